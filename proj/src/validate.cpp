#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cdqaoa/dense_oracle.hpp"
#include "cdqaoa/fermion_sim.hpp"
#include "cdqaoa/harness.hpp"
#include "cdqaoa/rng.hpp"

namespace cdqaoa {
namespace {

using dense::PauliSum;

std::string describe(const ChainSpec& spec) {
  std::ostringstream os;
  os << "n=" << spec.n_sites() << (spec.periodic() ? " ring" : " open");
  if (spec.seed()) os << " coupling_seed=" << *spec.seed();
  return os.str();
}

std::string angles_text(const AngleSchedule& s) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < s.values().size(); ++i) os << (i ? "," : "") << s.values()[i];
  os << ']';
  return os.str();
}

double dense_difference(const PauliSum& a, const PauliSum& b, const PauliSum* proj) {
  if (proj) return ((*proj) * (a - b) * (*proj)).to_dense().cwiseAbs().maxCoeff();
  return (a - b).to_dense().cwiseAbs().maxCoeff();
}

}  // namespace

ValidationReport validate(const ValidationOptions& options) {
  if (options.trials < 0) throw std::invalid_argument("trials must be non-negative");
  for (int n : options.n_list) {
    if (n < 3 || n > dense::kMaxStateSites) throw std::invalid_argument("validate needs 3 <= n <= 14");
  }
  ValidationReport report;
  if (options.trials == 0) return report;

  for (int n : options.check_energies ? options.n_list : std::vector<int>{}) {
    const ChainSpec ring = make_ring_uniform(n);
    const ChainSpec open = make_open_random(n, options.seed + static_cast<std::uint64_t>(n));
    for (Variant v : kAllVariants) {
      if (free_form_of(v) == Variant::Qaoa2Cd && n > dense::kMaxNestedSites) continue;
      CounterRng rng(options.seed, 1000 * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(v));
      for (int t = 0; t < options.trials; ++t) {
        const ChainSpec& spec = t % 2 == 0 ? ring : open;
        AngleSchedule s(v, 1 + t % 3);
        for (double& x : s.values()) x = (std::numbers::pi / 2.0) * (2.0 * rng.uniform() - 1.0);
        const double err = std::abs(run_circuit(spec, s) - dense::dense_run_circuit(spec, s));
        ++report.energy_checks;
        report.max_energy_error = std::max(report.max_energy_error, err);
        if (!(err <= kEnergyTolerance)) {
          std::ostringstream os;
          os.precision(3);
          os << "energy " << describe(spec) << " variant=" << to_string(v) << " trial=" << t << " |dE|=" << err
             << " angles=" << angles_text(s);
          report.violations.push_back(os.str());
        }
      }
    }
  }

  for (int n : options.n_list) {
    if (n > options.max_commutator_n) continue;
    for (const ChainSpec& spec : {make_ring_uniform(n), make_open_random(n, options.seed + static_cast<std::uint64_t>(n))}) {
      // ring generators are exact in the parity sector of the initial state
      const PauliSum proj = dense::parity_projector(n, n % 2 == 0 ? 1 : -1);
      const PauliSum* p = spec.periodic() ? &proj : nullptr;
      const PauliSum hx = dense::pauli_mixer(n);
      const PauliSum ht = dense::pauli_target(spec);
      const PauliSum xt = dense::commutator(hx, ht);

      QuadraticGenerator cd = generator_cd(spec);
      if (options.corrupt_generator) {
        cd.matrix(0, 1) += 1e-3;
        cd.matrix(1, 0) += 1e-3;
      }
      const auto [xxt, txt] = generator_2cd(spec);
      const std::pair<const char*, double> checks[] = {
          {"cd", dense_difference(Complex(0.0, 1.0) * dense::reconstruct(cd), xt, p)},
          {"xxt", dense_difference(dense::reconstruct(xxt), dense::commutator(hx, xt), p)},
          {"txt", dense_difference(dense::reconstruct(txt), dense::commutator(ht, xt), p)},
      };
      for (const auto& [name, err] : checks) {
        ++report.commutator_checks;
        report.max_commutator_error = std::max(report.max_commutator_error, err);
        if (!(err <= kCommutatorTolerance)) {
          std::ostringstream os;
          os.precision(3);
          os << "commutator " << name << ' ' << describe(spec) << " max_elem_diff=" << err;
          report.violations.push_back(os.str());
        }
      }
    }
  }
  return report;
}

}  // namespace cdqaoa
