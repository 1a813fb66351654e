#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "cdqaoa/circuit_evaluator.hpp"
#include "cdqaoa/model.hpp"

namespace cdqaoa {

enum class Method {
  NelderMead,
  /// BFGS on central-difference gradients.
  NumericGradientQuasiNewton,
  /// BFGS on the exact gradient from CircuitEvaluator.
  AdjointQuasiNewton,
};

std::string_view to_string(Method m) noexcept;
Method method_from_string(std::string_view name);

struct OptimizerConfig {
  Method method = Method::NelderMead;
  double f_tol = 1e-10;
  double x_tol = 1e-8;
  /// Cost-function calls per start. A value-and-gradient call of the adjoint
  /// method counts as one call; a finite-difference gradient counts 2n.
  int max_evals = 20000;
  int restarts = 1;
  /// Random starts are uniform on [-init_box, init_box] per angle.
  double init_box = std::numbers::pi / 2.0;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument on non-positive tolerances or budget.
void validate(const OptimizerConfig& config);
nlohmann::json to_json(const OptimizerConfig& config);
/// Missing keys keep their defaults.
OptimizerConfig optimizer_config_from_json(const nlohmann::json& j);

struct OptimizationResult {
  AngleSchedule best_angles;
  double best_energy = 0.0;
  double residual = 0.0;
  int n_evals = 0;
  int start_index = 0;
  bool converged = false;
  double wall_time_ms = 0.0;
};

/// Random start number `start` of the seed pool. Angle family f (gamma, beta,
/// alpha, delta, zeta) of step k is element 5k + f of CounterRng(seed, start),
/// so constrained and free-form variants share their (gamma, beta) draws and
/// deeper schedules extend shallower ones.
AngleSchedule random_schedule(Variant variant, int p, const OptimizerConfig& config, int start);

/// Local minimisation from `init` (one start, no restarts).
OptimizationResult minimize(const ChainSpec& spec, Variant variant, int p, const AngleSchedule& init,
                            const OptimizerConfig& config);
OptimizationResult minimize(const CircuitEvaluator& evaluator, const AngleSchedule& init,
                            const OptimizerConfig& config, const SpectrumBounds& bounds);

/// Best of config.restarts random starts followed by the extra starts, which
/// take start indices restarts, restarts + 1, ... Ties go to the lowest index.
OptimizationResult multistart(const CircuitEvaluator& evaluator, int p, const OptimizerConfig& config,
                              const SpectrumBounds& bounds, std::span<const AngleSchedule> extra = {});

/// Depth-(p+1) guess from depth-p angles, interpolating each angle family
/// with zero boundary values.
AngleSchedule interp_extend(const AngleSchedule& prev);

enum class Strategy { Interp, MultiStart };

std::string_view to_string(Strategy s) noexcept;
Strategy strategy_from_string(std::string_view name);

/// Extra candidate starts for depth p.
using ExtraStarts = std::function<std::vector<AngleSchedule>(int p)>;

/// Results for p = 1..p_max.
///
/// Interp: depth 1 is a multistart; each later depth starts from
/// interp_extend of the previous optimum (index 0), from one random start
/// (index 1) and from the previous optimum padded with a zero step (index 2),
/// keeping the best.
///
/// MultiStart: every depth runs config.restarts random starts plus the
/// padded previous optimum.
///
/// The padded start reproduces the previous energy, so the best energy never
/// rises with p.
std::vector<OptimizationResult> sweep_depth(const ChainSpec& spec, Variant variant, int p_max,
                                            Strategy strategy, const OptimizerConfig& config,
                                            const ExtraStarts& extra = {});

struct LandscapeGrid {
  double beta_lo = 0.0;
  double beta_hi = std::numbers::pi / 2.0;
  int n_beta = 0;
  double gamma_lo = 0.0;
  double gamma_hi = std::numbers::pi / 2.0;
  int n_gamma = 0;

  /// Inclusive end points; a single point sits at the lower end.
  double beta(int i) const;
  double gamma(int j) const;
};

/// Depth-one cost on the grid, rows indexed by beta and columns by gamma.
/// Free-form CD variants need their extra angles (alpha[, delta, zeta]) in
/// `fixed`; constrained variants derive them from each grid point.
Eigen::MatrixXd landscape_grid(const ChainSpec& spec, Variant variant, const LandscapeGrid& grid,
                               std::span<const double> fixed = {});

}  // namespace cdqaoa
