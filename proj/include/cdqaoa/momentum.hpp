#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cdqaoa/fermion_sim.hpp"
#include "cdqaoa/model.hpp"

// Pseudo-spin decomposition of the uniform ring.
//
// With c_q = N^{-1/2} sum_j exp(-i q j) c_j every generator couples only the
// Nambu pair (c_q, c_{-q}^dag), giving one 2x2 block per momentum pair. The
// boundary twist fixed by the parity sector selects the momenta: q = 2 pi m / N
// for odd N and q = (2m + 1) pi / N (antiperiodic) for even N, m = 0..floor((N-1)/2).
// Only q = 0 on odd rings is its own partner.

namespace cdqaoa {

enum class GeneratorKind { Mixer, Target, Cd, Xxt, Txt };

struct MomentumBlock {
  int k_index = 0;
  double theta_k = 0.0;
  /// False for the self-conjugate mode q = -q.
  bool paired = true;
  /// Indexed by GeneratorKind, basis (c_q, c_{-q}^dag).
  Eigen::Matrix2cd blocks[5];

  const Eigen::Matrix2cd& block(GeneratorKind kind) const { return blocks[static_cast<int>(kind)]; }
};

/// Throws std::invalid_argument unless the spec is a uniform ring.
std::vector<MomentumBlock> momentum_blocks(const ChainSpec& spec);

/// Full BdG matrix rebuilt from the blocks by the inverse transform.
CMatrix reassemble_generator(const std::vector<MomentumBlock>& blocks, int n_sites,
                             GeneratorKind kind);

/// <H_T> after the circuit, evolving each 2x2 block independently.
double momentum_energy(const std::vector<MomentumBlock>& blocks, const AngleSchedule& schedule);
double momentum_run_circuit(const ChainSpec& spec, const AngleSchedule& schedule);

}  // namespace cdqaoa
