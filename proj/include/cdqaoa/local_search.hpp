#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cdqaoa {

using Objective = std::function<double(std::span<const double>)>;
/// Returns f(x) and writes the gradient into g.
using ObjectiveWithGradient = std::function<double(std::span<const double> x, std::span<double> g)>;

struct LocalSearchOptions {
  double f_tol = 1e-10;
  double x_tol = 1e-8;
  /// Evaluation budget, see evals_per_call.
  int max_evals = 20000;
  /// BFGS stops once the gradient max-norm is at most g_tol.
  double g_tol = 1e-9;
  /// Nelder-Mead initial simplex edge.
  double initial_step = 0.1;
  /// Budget charged per call of a value-and-gradient objective.
  int evals_per_call = 1;
};

struct LocalSearchResult {
  std::vector<double> x;
  double f = 0.0;
  int n_evals = 0;
  bool converged = false;
};

/// Nelder-Mead with dimension-adapted coefficients (Gao & Han 2012). Stops
/// when the simplex values spread by at most f_tol (relative to max(1, |f|))
/// and its diameter is at most x_tol.
LocalSearchResult nelder_mead(const Objective& f, std::vector<double> x0,
                              const LocalSearchOptions& opt);

/// BFGS on the inverse Hessian with a strong-Wolfe line search. Stops when
/// the gradient is below g_tol, two successive steps change f by at most
/// f_tol relative to max(1, |f|), or a step moves x by at most x_tol.
LocalSearchResult bfgs(const ObjectiveWithGradient& f, std::vector<double> x0,
                       const LocalSearchOptions& opt);

/// Wraps f with a central-difference gradient (2n extra calls per gradient).
ObjectiveWithGradient central_difference(Objective f, double step = 1e-6);

}  // namespace cdqaoa
