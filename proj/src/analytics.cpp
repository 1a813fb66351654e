#include "cdqaoa/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdqaoa {
namespace {

void check_ring_args(int n, int p) {
  if (n < 3) throw std::invalid_argument("ring needs at least 3 sites");
  if (p < 1) throw std::invalid_argument("depth must be positive");
}

}  // namespace

double residual_energy(double e, const SpectrumBounds& bounds) {
  const double width = bounds.e_max - bounds.e_min;
  if (!(width > 0.0)) throw std::invalid_argument("degenerate spectrum bounds");
  if (e < bounds.e_min - 1e-9) throw std::invalid_argument("energy below the ground state");
  return std::max(0.0, (e - bounds.e_min) / width);
}

double upper_bound_ring(int n, int p) {
  check_ring_args(n, p);
  if (p >= n / 2) return 0.0;
  const double base = 1.0 / (2.0 * p + 2.0);
  if (n % 2 == 0) return base;
  return (static_cast<double>(n) / (n - 1)) * (base - 1.0 / n);
}

double conjectured_min_ring(int n, int p) {
  check_ring_args(n, p);
  if (p < n / 2) return -static_cast<double>(n) * p / (p + 1.0);
  return n % 2 == 0 ? -n : -n + 2.0;
}

double cost_p1_ring(int n, double beta, double gamma) {
  return -0.5 * n * std::sin(4.0 * beta) * std::sin(4.0 * gamma);
}

double cost_p1_open(const ChainSpec& spec, double beta, double gamma) {
  if (spec.periodic()) throw std::invalid_argument("closed form covers open chains only");
  if (spec.n_sites() < 4) throw std::invalid_argument("closed form needs N >= 4");
  const auto& j = spec.couplings();
  const int last = spec.n_bonds() - 1;
  auto sin2 = [&](int b) { return std::pow(std::sin(gamma * j[b]), 2); };
  auto cos2 = [&](int b) { return std::pow(std::cos(gamma * j[b]), 2); };
  auto bond = [&](int b) { return j[b] * std::sin(2.0 * gamma * j[b]); };

  double sum = bond(0) * cos2(1) + bond(last) * cos2(last - 1);
  for (int b = 1; b < last; ++b) sum += bond(b) * (1.0 - sin2(b - 1) - sin2(b + 1));
  return -std::sin(4.0 * beta) * sum;
}

int subgraph_vertices(Variant variant, int p) {
  switch (variant) {
    case Variant::Qaoa: return 2 * p + 2;
    case Variant::QaoaCd: return 4 * p + 2;
    case Variant::Qaoa2Cd: return 6 * p + 2;
    default: throw std::invalid_argument("prediction covers free-form variants only");
  }
}

ConvergencePrediction predicted_convergence_step(int n, Variant variant) {
  if (n < 3) throw std::invalid_argument("ring needs at least 3 sites");
  ConvergencePrediction out{variant, 0, 0, 0};
  for (int p = 1; out.p_star == 0; ++p) {
    const int v = subgraph_vertices(variant, p);
    if (out.p_cover == 0 && v >= n) out.p_cover = p;
    if (v >= n + 2) {
      out.p_star = p;
      out.subgraph_vertices = v;
    }
  }
  return out;
}

ConvergencePrediction predicted_convergence_step(const ChainSpec& spec, Variant variant) {
  if (!spec.periodic()) throw std::invalid_argument("prediction assumes a periodic chain");
  return predicted_convergence_step(spec.n_sites(), variant);
}

std::optional<int> threshold_crossing(std::span<const double> residuals, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("threshold must be positive");
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (residuals[i] <= eps) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

}  // namespace cdqaoa
