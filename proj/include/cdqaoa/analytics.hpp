#pragma once

#include <optional>
#include <span>

#include "cdqaoa/model.hpp"

namespace cdqaoa {

/// (e - e_min) / (e_max - e_min). Throws std::invalid_argument for degenerate
/// bounds or e < e_min - 1e-9; tiny negative values from roundoff become 0.
double residual_energy(double e, const SpectrumBounds& bounds);

/// Residual of the conjectured ring optimum: 1/(2p+2) for even N and
/// (N/(N-1)) (1/(2p+2) - 1/N) for odd N, zero once p >= floor(N/2).
double upper_bound_ring(int n, int p);

/// -N p/(p+1) for p < floor(N/2), then -N (even N) or -N+2 (odd N).
double conjectured_min_ring(int n, int p);

/// -(N/2) sin(4 beta) sin(4 gamma).
double cost_p1_ring(int n, double beta, double gamma);

/// Closed-form depth-one energy of an open chain with arbitrary couplings;
/// needs N >= 4.
double cost_p1_open(const ChainSpec& spec, double beta, double gamma);

/// Light-cone argument on the uniform ring: a depth-p circuit sees a subgraph
/// of 2p+2 (QAOA), 4p+2 (QAOA-CD) or 6p+2 (QAOA-2CD) vertices.
struct ConvergencePrediction {
  Variant variant;
  /// Smallest p whose subgraph reaches N + 2 vertices, i.e. wraps the whole
  /// ring; for QAOA this is the rule 2p >= N.
  int p_star;
  /// Smallest p whose subgraph reaches N vertices.
  int p_cover;
  int subgraph_vertices;
};

int subgraph_vertices(Variant variant, int p);

/// Free-form variants on periodic chains only; throws std::invalid_argument otherwise.
ConvergencePrediction predicted_convergence_step(int n, Variant variant);
ConvergencePrediction predicted_convergence_step(const ChainSpec& spec, Variant variant);

/// Smallest p (1-based) with residuals[p-1] <= eps.
std::optional<int> threshold_crossing(std::span<const double> residuals, double eps);

}  // namespace cdqaoa
