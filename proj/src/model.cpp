#include "cdqaoa/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cdqaoa/rng.hpp"

namespace cdqaoa {

ChainSpec::ChainSpec(int n_sites, Boundary boundary, std::vector<double> couplings,
                     std::optional<std::uint64_t> seed)
    : n_sites_(n_sites), boundary_(boundary), couplings_(std::move(couplings)), seed_(seed) {
  const int min_sites = boundary == Boundary::Periodic ? 3 : 2;
  if (n_sites < min_sites) {
    throw std::invalid_argument("chain needs at least " + std::to_string(min_sites) +
                                " sites, got " + std::to_string(n_sites));
  }
  if (n_sites > 62) throw std::invalid_argument("chain too long");
  const auto expected = static_cast<std::size_t>(boundary == Boundary::Periodic ? n_sites : n_sites - 1);
  if (couplings_.size() != expected) {
    throw std::invalid_argument("expected " + std::to_string(expected) + " couplings, got " +
                                std::to_string(couplings_.size()));
  }
  for (double j : couplings_) {
    if (!std::isfinite(j)) throw std::invalid_argument("coupling is not finite");
  }
}

bool ChainSpec::uniform() const noexcept {
  return std::all_of(couplings_.begin(), couplings_.end(),
                     [&](double j) { return j == couplings_.front(); });
}

double ChainSpec::classical_energy(std::uint64_t bits) const noexcept {
  double e = 0.0;
  for (int b = 0; b < n_bonds(); ++b) {
    const auto [i, j] = bond_sites(b);
    const bool anti = ((bits >> i) ^ (bits >> j)) & 1U;
    e += anti ? -couplings_[b] : couplings_[b];
  }
  return e;
}

ChainSpec make_ring_uniform(int n) {
  if (n < 3) throw std::invalid_argument("ring needs n >= 3");
  return ChainSpec(n, Boundary::Periodic, std::vector<double>(n, 1.0));
}

ChainSpec make_open_uniform(int n) {
  if (n < 2) throw std::invalid_argument("open chain needs n >= 2");
  return ChainSpec(n, Boundary::Open, std::vector<double>(n - 1, 1.0));
}

ChainSpec make_open_random(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("open chain needs n >= 2");
  const CounterRng rng(seed, 0);
  std::vector<double> j(n - 1);
  for (int b = 0; b < n - 1; ++b) {
    const double u = static_cast<double>(rng.at(static_cast<std::uint64_t>(b)) >> 11) * 0x1.0p-53;
    j[b] = -1.0 + 2.0 * u;
  }
  return ChainSpec(n, Boundary::Open, std::move(j), seed);
}

int params_per_step(Variant v) noexcept {
  switch (v) {
    case Variant::Qaoa: return 2;
    case Variant::QaoaCd: return 3;
    case Variant::Qaoa2Cd: return 5;
    case Variant::QaoaCd2p: return 2;
    case Variant::Qaoa2Cd2p: return 2;
  }
  return 0;
}

bool is_constrained(Variant v) noexcept {
  return v == Variant::QaoaCd2p || v == Variant::Qaoa2Cd2p;
}

Variant free_form_of(Variant v) noexcept {
  switch (v) {
    case Variant::QaoaCd2p: return Variant::QaoaCd;
    case Variant::Qaoa2Cd2p: return Variant::Qaoa2Cd;
    default: return v;
  }
}

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::Qaoa: return "qaoa";
    case Variant::QaoaCd: return "qaoa-cd";
    case Variant::Qaoa2Cd: return "qaoa-2cd";
    case Variant::QaoaCd2p: return "qaoa-cd-2p";
    case Variant::Qaoa2Cd2p: return "qaoa-2cd-2p";
  }
  return "?";
}

Variant variant_from_string(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (to_string(v) == name) return v;
  }
  throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

AngleSchedule::AngleSchedule(Variant variant, int steps)
    : AngleSchedule(variant, steps,
                    std::vector<double>(static_cast<std::size_t>(std::max(steps, 0)) *
                                        params_per_step(variant))) {}

AngleSchedule::AngleSchedule(Variant variant, int steps, std::vector<double> values)
    : variant_(variant), steps_(steps), values_(std::move(values)) {
  if (steps < 1) throw std::invalid_argument("schedule needs at least one step");
  if (values_.size() != static_cast<std::size_t>(steps) * params_per_step(variant)) {
    throw std::invalid_argument("schedule has " + std::to_string(values_.size()) +
                                " values, expected " +
                                std::to_string(steps * params_per_step(variant)));
  }
}

double AngleSchedule::alpha(int k) const {
  if (width() < 3) throw std::logic_error("variant has no alpha angles");
  return values_[k * width() + 2];
}

double AngleSchedule::delta(int k) const {
  if (width() < 5) throw std::logic_error("variant has no delta angles");
  return values_[k * width() + 3];
}

double AngleSchedule::zeta(int k) const {
  if (width() < 5) throw std::logic_error("variant has no zeta angles");
  return values_[k * width() + 4];
}

AngleSchedule expand_constrained(const AngleSchedule& schedule) {
  if (!is_constrained(schedule.variant())) {
    throw std::invalid_argument("expand_constrained needs a constrained (2p) variant");
  }
  const Variant target = free_form_of(schedule.variant());
  AngleSchedule out(target, schedule.steps());
  const int w = out.width();
  auto v = out.values();
  for (int k = 0; k < schedule.steps(); ++k) {
    const double g = schedule.gamma(k);
    const double b = schedule.beta(k);
    v[k * w] = g;
    v[k * w + 1] = b;
    v[k * w + 2] = -b * g / 2.0;
    if (w == 5) {
      v[k * w + 3] = b * b * g / 6.0;
      v[k * w + 4] = b * g * g / 3.0;
    }
  }
  return out;
}

SpectrumBounds spectrum_bounds(const ChainSpec& spec) {
  const auto& j = spec.couplings();
  double abs_sum = 0.0;
  double abs_min = std::numeric_limits<double>::infinity();
  for (double x : j) {
    abs_sum += std::abs(x);
    abs_min = std::min(abs_min, std::abs(x));
  }
  if (!spec.periodic()) return {-abs_sum, abs_sum};

  // Around a ring the product of s_i s_{i+1} is +1, so the bond-wise optimum
  // exists only if the product of preferred signs is +1.
  int negatives = 0;
  for (double x : j) negatives += x < 0.0 ? 1 : 0;
  const int n = spec.n_bonds();
  // minimum wants s_i s_{i+1} = -sign(J_i); maximum wants +sign(J_i)
  const bool min_frustrated = ((n - negatives) % 2) != 0;
  const bool max_frustrated = (negatives % 2) != 0;
  const double e_min = -abs_sum + (min_frustrated ? 2.0 * abs_min : 0.0);
  const double e_max = abs_sum - (max_frustrated ? 2.0 * abs_min : 0.0);
  return {e_min, e_max};
}

}  // namespace cdqaoa
