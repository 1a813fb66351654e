#pragma once

#include <utility>

#include <Eigen/Dense>

#include "cdqaoa/model.hpp"

// Free-fermion simulation of the variational circuits.
//
// Spins map to fermions through sigma^X_j = 1 - 2 n_j and
// sigma^Z_j = prod_{l<j}(1 - 2 n_l) (c_j^dag + c_j). Every circuit generator
// is then a quadratic form
//
//   G = 1/2 Psi^dag M Psi + offset,   Psi = (c_1..c_N, c_1^dag..c_N^dag)^T
//
// with M a 2N x 2N Hermitian Bogoliubov-de Gennes (BdG) matrix, and the
// circuit state stays Gaussian: it is fully described by the correlation
// matrix Gamma_ij = <Psi_i Psi_j^dag>.
//
// On a ring the closing bond carries the fermion parity operator P. Every
// generator conserves P and the initial state has P = (-1)^N, so the closing
// bond enters the BdG matrix with the fixed factor -(-1)^N.

namespace cdqaoa {

using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

struct QuadraticGenerator {
  CMatrix matrix;
  double offset = 0.0;

  int n_modes() const noexcept { return static_cast<int>(matrix.rows() / 2); }
};

/// Largest |M - M^dag| entry.
double hermiticity_error(const CMatrix& m);
/// Largest entry of |tau M^* tau + M|, tau swapping the particle and hole halves.
double particle_hole_error(const CMatrix& m);
/// tau X^* tau.
CMatrix particle_hole_image(const CMatrix& x);

/// BdG matrix of the commutator [A, B] of two quadratic forms; it is again a
/// quadratic form with matrix [M_A, M_B] and no constant part.
CMatrix nambu_bracket(const CMatrix& a, const CMatrix& b);

/// sum_j sigma^X_j.
QuadraticGenerator generator_mixer(const ChainSpec& spec);
/// sum_b J_b sigma^Z sigma^Z (parity sector of the initial state on rings).
QuadraticGenerator generator_target(const ChainSpec& spec);
/// G with i G = [H_X, H_T], so exp(alpha [H_X, H_T]) = exp(i alpha G).
QuadraticGenerator generator_cd(const ChainSpec& spec);
/// ([H_X,[H_X,H_T]], [H_T,[H_X,H_T]]); U_2CD = exp(i (delta*first - zeta*second)).
std::pair<QuadraticGenerator, QuadraticGenerator> generator_2cd(const ChainSpec& spec);

struct GaussianState {
  CMatrix corr;
  /// Fermion parity sector, (-1)^N for every state reachable from the initial one.
  int parity = 1;

  int n_modes() const noexcept { return static_cast<int>(corr.rows() / 2); }
};

/// Ground state of H_X: every site has sigma^X = -1, i.e. every mode is filled.
GaussianState initial_state(const ChainSpec& spec);

/// Gamma -> V Gamma V^dag with V = exp(i angle M), i.e. the state after
/// applying exp(i angle G). Throws std::invalid_argument on a size mismatch.
GaussianState apply_unitary(const GaussianState& state, const QuadraticGenerator& gen,
                            double angle);

/// <G> = -1/2 Tr(M Gamma) + offset (the BdG matrices here are traceless).
double expect(const GaussianState& state, const QuadraticGenerator& gen);
double expect_target(const GaussianState& state, const ChainSpec& spec);

/// Max entry of |Gamma^2 - Gamma| and |Gamma + tau Gamma^* tau - 1|.
double purity_error(const GaussianState& state);
double canonical_error(const GaussianState& state);

/// Applies, per step, U_2CD then U_CD then U_T(gamma) = exp(-i gamma H_T) then
/// U_X(beta) = exp(-i beta H_X) to the initial state and returns <H_T>.
/// Constrained schedules are expanded first.
double run_circuit(const ChainSpec& spec, const AngleSchedule& schedule);
GaussianState run_circuit_state(const ChainSpec& spec, const AngleSchedule& schedule);

}  // namespace cdqaoa
