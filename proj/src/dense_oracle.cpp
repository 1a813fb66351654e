#include "cdqaoa/dense_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace cdqaoa::dense {
namespace {

void check_sites(int n, int cap) {
  if (n < 1 || n > cap) {
    throw std::invalid_argument("dense oracle supports 1.." + std::to_string(cap) + " sites, got " +
                                std::to_string(n));
  }
}

std::uint64_t dimension(int n) { return std::uint64_t{1} << n; }

double z_sign(std::uint64_t mask, std::uint64_t b) {
  return (std::popcount(mask & b) & 1) ? -1.0 : 1.0;
}

}  // namespace

StateVector dense_initial(int n) {
  check_sites(n, kMaxStateSites);
  const std::uint64_t dim = dimension(n);
  StateVector s{Eigen::VectorXcd(static_cast<Eigen::Index>(dim)), n};
  const double a = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    s.amplitudes(static_cast<Eigen::Index>(b)) = (std::popcount(b) & 1) ? -a : a;
  }
  return s;
}

StateVector dense_apply_target(const StateVector& state, const ChainSpec& spec, double gamma) {
  if (spec.n_sites() != state.n_sites) throw std::invalid_argument("state and spec sizes differ");
  StateVector out = state;
  for (Eigen::Index b = 0; b < out.amplitudes.size(); ++b) {
    const double e = spec.classical_energy(static_cast<std::uint64_t>(b));
    out.amplitudes(b) *= std::exp(Complex(0.0, -gamma * e));
  }
  return out;
}

StateVector dense_apply_mixer(const StateVector& state, double beta) {
  StateVector out = state;
  const Complex c = std::cos(beta);
  const Complex s(0.0, -std::sin(beta));
  const Eigen::Index dim = out.amplitudes.size();
  for (int q = 0; q < out.n_sites; ++q) {
    const Eigen::Index bit = Eigen::Index{1} << q;
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (b & bit) continue;
      const Complex a0 = out.amplitudes(b);
      const Complex a1 = out.amplitudes(b | bit);
      out.amplitudes(b) = c * a0 + s * a1;
      out.amplitudes(b | bit) = s * a0 + c * a1;
    }
  }
  return out;
}

CompiledOperator::CompiledOperator(const PauliSum& op) {
  check_sites(op.n_qubits(), kMaxStateSites);
  const std::uint64_t dim = dimension(op.n_qubits());
  std::map<std::uint64_t, Eigen::VectorXcd> by_mask;
  for (const PauliTerm& t : op.terms()) {
    auto [it, fresh] = by_mask.try_emplace(t.x);
    if (fresh) it->second = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (std::uint64_t b = 0; b < dim; ++b) {
      it->second(static_cast<Eigen::Index>(b)) += z_sign(t.z, b) * t.coeff;
    }
  }
  Eigen::VectorXd column_norm = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  coeffs_.resize(static_cast<Eigen::Index>(by_mask.size()), static_cast<Eigen::Index>(dim));
  Eigen::Index j = 0;
  for (const auto& [mask, diag] : by_mask) {
    column_norm += diag.cwiseAbs();
    masks_.push_back(mask);
    for (std::uint64_t b = 0; b < dim; ++b) {
      coeffs_(j, static_cast<Eigen::Index>(b)) = diag(static_cast<Eigen::Index>(b ^ mask));
    }
    ++j;
  }
  norm_bound_ = dim > 0 ? column_norm.maxCoeff() : 0.0;
}

void CompiledOperator::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  out.resize(in.size());
  const auto m = static_cast<Eigen::Index>(masks_.size());
  for (Eigen::Index b = 0; b < in.size(); ++b) {
    // real arithmetic avoids the NaN-recovery path of complex multiplication
    const Complex* c = coeffs_.col(b).data();
    double re = 0.0;
    double im = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const Complex x = in(static_cast<Eigen::Index>(static_cast<std::uint64_t>(b) ^ masks_[static_cast<std::size_t>(j)]));
      re += c[j].real() * x.real() - c[j].imag() * x.imag();
      im += c[j].real() * x.imag() + c[j].imag() * x.real();
    }
    out(b) = Complex(re, im);
  }
}

ExpmResult dense_expm_apply(const PauliSum& op, double theta, const StateVector& state) {
  if (op.n_qubits() != state.n_sites) throw std::invalid_argument("operator and state sizes differ");
  ExpmResult result{state, 0.0, 0};
  if (theta == 0.0 || op.empty()) return result;

  const CompiledOperator compiled(op);
  const double total = std::abs(theta) * compiled.norm_bound();
  const int substeps = std::max(1, static_cast<int>(std::ceil(total / kExpmStepNorm)));
  const double h = theta / substeps;

  Eigen::VectorXcd psi = state.amplitudes;
  Eigen::VectorXcd term(psi.size());
  Eigen::VectorXcd next(psi.size());
  for (int s = 0; s < substeps; ++s) {
    Eigen::VectorXcd acc = psi;
    term = psi;
    bool converged = false;
    for (int k = 1; k <= kExpmMaxTerms; ++k) {
      compiled.apply(term, next);
      ++result.matvecs;
      term = (Complex(0.0, h) / static_cast<double>(k)) * next;
      acc += term;
      if (term.norm() <= std::numeric_limits<double>::epsilon() * 1e-2 * acc.norm()) {
        converged = true;
        break;
      }
    }
    if (!converged) throw std::runtime_error("Taylor series did not converge");
    psi = std::move(acc);
  }
  const double norm = psi.norm();
  result.norm_drift = std::abs(norm - 1.0);
  result.state.amplitudes = psi / norm;
  return result;
}

SpectrumBounds dense_spectrum(const ChainSpec& spec) {
  check_sites(spec.n_sites(), kMaxDiagonalSites);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::uint64_t b = 0; b < dimension(spec.n_sites()); ++b) {
    const double e = spec.classical_energy(b);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return {lo, hi};
}

PauliSum pauli_mixer(int n) {
  PauliSum h(n);
  for (int j = 0; j < n; ++j) h += PauliSum::x(n, j);
  return h;
}

PauliSum pauli_target(const ChainSpec& spec) {
  const int n = spec.n_sites();
  PauliSum h(n);
  for (int b = 0; b < spec.n_bonds(); ++b) {
    const auto [i, j] = spec.bond_sites(b);
    h.add_term(0, (std::uint64_t{1} << i) | (std::uint64_t{1} << j), spec.couplings()[b]);
  }
  return h;
}

StateVector dense_circuit_state(const ChainSpec& spec, const AngleSchedule& schedule) {
  if (is_constrained(schedule.variant())) {
    return dense_circuit_state(spec, expand_constrained(schedule));
  }
  const int n = spec.n_sites();
  const Variant v = schedule.variant();
  if (v == Variant::Qaoa2Cd) check_sites(n, kMaxNestedSites);

  const PauliSum hx = pauli_mixer(n);
  const PauliSum ht = pauli_target(spec);
  const PauliSum xt = commutator(hx, ht);
  // exp(alpha [H_X, H_T]) = exp(i alpha G) with G = -i [H_X, H_T]
  const PauliSum cd = Complex(0.0, -1.0) * xt;
  PauliSum xxt(n);
  PauliSum txt(n);
  if (v == Variant::Qaoa2Cd) {
    xxt = commutator(hx, xt);
    txt = commutator(ht, xt);
  }

  StateVector psi = dense_initial(n);
  for (int k = 0; k < schedule.steps(); ++k) {
    if (v == Variant::Qaoa2Cd) {
      psi = dense_expm_apply(schedule.delta(k) * xxt - schedule.zeta(k) * txt, 1.0, psi).state;
    }
    if (v != Variant::Qaoa) psi = dense_expm_apply(cd, schedule.alpha(k), psi).state;
    psi = dense_apply_target(psi, spec, schedule.gamma(k));
    psi = dense_apply_mixer(psi, schedule.beta(k));
  }
  return psi;
}

double dense_run_circuit(const ChainSpec& spec, const AngleSchedule& schedule) {
  return expect_diagonal(dense_circuit_state(spec, schedule), spec);
}

double expect_diagonal(const StateVector& state, const ChainSpec& spec) {
  double e = 0.0;
  for (Eigen::Index b = 0; b < state.amplitudes.size(); ++b) {
    e += std::norm(state.amplitudes(b)) * spec.classical_energy(static_cast<std::uint64_t>(b));
  }
  return e;
}

double expect(const StateVector& state, const PauliSum& op) {
  const CompiledOperator compiled(op);
  Eigen::VectorXcd out;
  compiled.apply(state.amplitudes, out);
  return state.amplitudes.dot(out).real();
}

PauliSum annihilator(int n, int j) {
  // n_j = (1 - X_j)/2, so c_j = prod_{l<j} X_l * Z_j (1 - X_j)/2
  //                           = prod_{l<j} X_l * (Z_j + X_j Z_j)/2.
  const std::uint64_t string = (std::uint64_t{1} << j) - 1;
  const std::uint64_t site = std::uint64_t{1} << j;
  PauliSum c(n);
  c.add_term(string, site, 0.5);
  c.add_term(string | site, site, 0.5);
  return c;
}

PauliSum creator(int n, int j) {
  const std::uint64_t string = (std::uint64_t{1} << j) - 1;
  const std::uint64_t site = std::uint64_t{1} << j;
  PauliSum c(n);
  c.add_term(string, site, 0.5);
  c.add_term(string | site, site, -0.5);
  return c;
}

PauliSum reconstruct(const QuadraticGenerator& gen) {
  const int n = gen.n_modes();
  std::vector<PauliSum> psi;
  std::vector<PauliSum> psi_dag;
  for (int j = 0; j < n; ++j) {
    psi.push_back(annihilator(n, j));
    psi_dag.push_back(creator(n, j));
  }
  for (int j = 0; j < n; ++j) {
    psi.push_back(creator(n, j));
    psi_dag.push_back(annihilator(n, j));
  }
  PauliSum out = PauliSum::identity(n, gen.offset);
  for (int a = 0; a < 2 * n; ++a) {
    for (int b = 0; b < 2 * n; ++b) {
      const Complex m = gen.matrix(a, b);
      if (m == Complex(0.0, 0.0)) continue;
      out += (0.5 * m) * (psi_dag[a] * psi[b]);
    }
  }
  return out.pruned(1e-14);
}

PauliSum parity_projector(int n, int sign) {
  PauliSum p = PauliSum::identity(n, 0.5);
  p.add_term((std::uint64_t{1} << n) - 1, 0, 0.5 * sign);
  return p;
}

}  // namespace cdqaoa::dense
