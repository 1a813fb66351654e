#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cdqaoa/fermion_sim.hpp"
#include "cdqaoa/model.hpp"
#include "cdqaoa/pauli.hpp"

// Brute-force 2^N state-vector reference for the fermionic simulator.
// Basis state b has spin i down (Z_i = -1) when bit i of b is set.

namespace cdqaoa::dense {

inline constexpr int kMaxStateSites = 14;
inline constexpr int kMaxNestedSites = 12;
inline constexpr int kMaxDiagonalSites = 20;

struct StateVector {
  Eigen::VectorXcd amplitudes;
  int n_sites = 0;
};

/// (|up> - |down>)^{(x) N} / sqrt(2^N).
StateVector dense_initial(int n);

/// exp(-i gamma H_T), diagonal in the computational basis.
StateVector dense_apply_target(const StateVector& state, const ChainSpec& spec, double gamma);
/// exp(-i beta sum_j X_j), one exp(-i beta X) rotation per site.
StateVector dense_apply_mixer(const StateVector& state, double beta);

struct ExpmResult {
  StateVector state;
  /// | ||psi|| - 1 | before renormalisation.
  double norm_drift = 0.0;
  int matvecs = 0;
};

/// exp(i theta Op)|psi> for Hermitian Op by a Taylor series on substeps of
/// norm at most kExpmStepNorm. Throws std::runtime_error if a substep does
/// not converge within kExpmMaxTerms terms.
ExpmResult dense_expm_apply(const PauliSum& op, double theta, const StateVector& state);

inline constexpr double kExpmStepNorm = 2.0;
inline constexpr int kExpmMaxTerms = 60;

/// Sparse form of a Pauli sum: one diagonal per distinct X mask, so
/// (Op psi)[b ^ x] += d_x[b] psi[b].
class CompiledOperator {
 public:
  explicit CompiledOperator(const PauliSum& op);

  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  /// Max column 1-norm; bounds the spectral norm.
  double norm_bound() const noexcept { return norm_bound_; }

 private:
  // out(b) = sum_j coeffs_(j, b) * in(b ^ masks_[j])
  std::vector<std::uint64_t> masks_;
  Eigen::MatrixXcd coeffs_;
  double norm_bound_ = 0.0;
};

/// Exact extremes of the diagonal H_T by enumeration; N <= kMaxDiagonalSites.
SpectrumBounds dense_spectrum(const ChainSpec& spec);

PauliSum pauli_mixer(int n);
PauliSum pauli_target(const ChainSpec& spec);

/// State after the circuit; free-form variants use the Pauli commutators of
/// pauli_mixer and pauli_target, constrained ones are expanded first.
StateVector dense_circuit_state(const ChainSpec& spec, const AngleSchedule& schedule);
double dense_run_circuit(const ChainSpec& spec, const AngleSchedule& schedule);

double expect_diagonal(const StateVector& state, const ChainSpec& spec);
double expect(const StateVector& state, const PauliSum& op);

/// Jordan-Wigner images of c_j and c_j^dag on n sites.
PauliSum annihilator(int n, int j);
PauliSum creator(int n, int j);

/// Spin operator 1/2 Psi^dag M Psi + offset built from the Jordan-Wigner
/// fermions. Small N only: the product expansion has O(N^2) terms per entry.
PauliSum reconstruct(const QuadraticGenerator& gen);

/// (1 + s X_1...X_N)/2, the projector onto fermion parity s.
PauliSum parity_projector(int n, int sign);

}  // namespace cdqaoa::dense
