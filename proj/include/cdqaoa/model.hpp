#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdqaoa {

enum class Boundary { Periodic, Open };

/// A one-dimensional Ising/MaxCut instance H_T = sum_i J_i Z_i Z_{i+1}.
///
/// Bond i couples sites i and i+1 (0-based); for a periodic chain the last
/// bond closes the ring between sites N-1 and 0.
class ChainSpec {
 public:
  /// Throws std::invalid_argument when the coupling count does not match the
  /// boundary, the chain is too short, or a coupling is not finite.
  ChainSpec(int n_sites, Boundary boundary, std::vector<double> couplings,
            std::optional<std::uint64_t> seed = std::nullopt);

  int n_sites() const noexcept { return n_sites_; }
  Boundary boundary() const noexcept { return boundary_; }
  bool periodic() const noexcept { return boundary_ == Boundary::Periodic; }
  const std::vector<double>& couplings() const noexcept { return couplings_; }
  int n_bonds() const noexcept { return static_cast<int>(couplings_.size()); }
  /// Seed the couplings were drawn from, when the instance is random.
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

  /// Sites joined by bond b.
  std::pair<int, int> bond_sites(int b) const noexcept {
    return {b, (b + 1) % n_sites_};
  }

  bool uniform() const noexcept;

  /// Diagonal energy of a computational basis configuration; bit i set means
  /// spin i points down (Z_i = -1).
  double classical_energy(std::uint64_t bits) const noexcept;

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;

 private:
  int n_sites_;
  Boundary boundary_;
  std::vector<double> couplings_;
  std::optional<std::uint64_t> seed_;
};

ChainSpec make_ring_uniform(int n);
ChainSpec make_open_uniform(int n);
/// Couplings drawn i.i.d. uniform on [-1, 1) from CounterRng(seed), element i
/// of stream 0 feeding bond i.
ChainSpec make_open_random(int n, std::uint64_t seed);

enum class Variant { Qaoa, QaoaCd, Qaoa2Cd, QaoaCd2p, Qaoa2Cd2p };

inline constexpr Variant kAllVariants[] = {Variant::Qaoa, Variant::QaoaCd, Variant::Qaoa2Cd,
                                           Variant::QaoaCd2p, Variant::Qaoa2Cd2p};

int params_per_step(Variant v) noexcept;
bool is_constrained(Variant v) noexcept;
/// Free-form variant executing the same circuit (QaoaCd for QaoaCd2p, ...).
Variant free_form_of(Variant v) noexcept;
std::string_view to_string(Variant v) noexcept;
/// Accepts the names produced by to_string; throws std::invalid_argument.
Variant variant_from_string(std::string_view name);

/// Variational angles, one row per step. Row layout is
/// (gamma, beta[, alpha[, delta, zeta]]) depending on the variant.
class AngleSchedule {
 public:
  AngleSchedule(Variant variant, int steps);
  AngleSchedule(Variant variant, int steps, std::vector<double> values);

  Variant variant() const noexcept { return variant_; }
  int steps() const noexcept { return steps_; }
  int width() const noexcept { return params_per_step(variant_); }
  /// Total parameter count N_p.
  int n_params() const noexcept { return steps_ * width(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> row(int k) const { return std::span(values_).subspan(k * width(), width()); }

  double gamma(int k) const { return values_[k * width()]; }
  double beta(int k) const { return values_[k * width() + 1]; }
  double alpha(int k) const;
  double delta(int k) const;
  double zeta(int k) const;

  friend bool operator==(const AngleSchedule&, const AngleSchedule&) = default;

 private:
  Variant variant_;
  int steps_;
  std::vector<double> values_;
};

/// Maps a constrained schedule onto the equivalent free-form one using
/// alpha = -beta*gamma/2, delta = beta^2*gamma/6, zeta = beta*gamma^2/3.
AngleSchedule expand_constrained(const AngleSchedule& schedule);

struct SpectrumBounds {
  double e_min;
  double e_max;
};

/// Exact extremal eigenvalues of the diagonal H_T. Paths satisfy every bond
/// independently; a ring pays 2*min|J| when its sign product frustrates the
/// preferred alignment.
SpectrumBounds spectrum_bounds(const ChainSpec& spec);

}  // namespace cdqaoa
