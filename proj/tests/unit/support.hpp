#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>

#include "cdqaoa/model.hpp"

namespace testing {

// Ising energy of a bit pattern straight from the couplings; bit set = spin down.
inline double ising_energy(const cdqaoa::ChainSpec& spec, std::uint64_t bits) {
  const int n = spec.n_sites();
  double e = 0.0;
  for (int b = 0; b < spec.n_bonds(); ++b) {
    const int i = b;
    const int j = (b + 1) % n;
    const int si = (bits >> i) & 1 ? -1 : 1;
    const int sj = (bits >> j) & 1 ? -1 : 1;
    e += spec.couplings()[b] * si * sj;
  }
  return e;
}

inline std::pair<double, double> brute_force_bounds(const cdqaoa::ChainSpec& spec) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << spec.n_sites()); ++b) {
    const double e = ising_energy(spec, b);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return {lo, hi};
}

inline cdqaoa::AngleSchedule random_angles(cdqaoa::Variant v, int p, std::mt19937_64& rng, double box = 1.0) {
  std::uniform_real_distribution<double> u(-box, box);
  cdqaoa::AngleSchedule s(v, p);
  for (double& x : s.values()) x = u(rng);
  return s;
}

}  // namespace testing
