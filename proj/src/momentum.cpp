#include "cdqaoa/momentum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cdqaoa {
namespace {

using Matrix2 = Eigen::Matrix2cd;

// Momentum of Fourier row r; row partner(r) carries -q.
double momentum(int n, int r) {
  return n % 2 == 0 ? (2 * r + 1) * std::numbers::pi / n : 2 * r * std::numbers::pi / n;
}

int partner(int n, int r) { return n % 2 == 0 ? n - 1 - r : (n - r) % n; }

// diag(F, F^*) with F_qj = exp(-i q j) / sqrt(N).
CMatrix nambu_fourier(int n) {
  CMatrix f = CMatrix::Zero(2 * n, 2 * n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < n; ++j) {
      const Complex e = std::exp(Complex(0.0, -momentum(n, r) * j)) * norm;
      f(r, j) = e;
      f(n + r, n + j) = std::conj(e);
    }
  }
  return f;
}

Matrix2 extract(const CMatrix& mt, int n, int r) {
  const int a = r;
  const int b = n + partner(n, r);
  Matrix2 h;
  h << mt(a, a), mt(a, b), mt(b, a), mt(b, b);
  return h;
}

// exp(i theta h) for Hermitian 2x2 h = a0 + a.sigma.
Matrix2 exp_i(const Matrix2& h, double theta) {
  const double a0 = 0.5 * (h(0, 0) + h(1, 1)).real();
  const double az = 0.5 * (h(0, 0) - h(1, 1)).real();
  const Complex off = h(0, 1);  // ax - i ay
  const double r = std::sqrt(az * az + std::norm(off));
  const Complex i(0.0, 1.0);
  const double c = std::cos(theta * r);
  // sin(theta r)/r, finite at r = 0
  const double s = r > 1e-300 ? std::sin(theta * r) / r : theta;
  Matrix2 u;
  u(0, 0) = c + i * s * az;
  u(1, 1) = c - i * s * az;
  u(0, 1) = i * s * off;
  u(1, 0) = i * s * std::conj(off);
  return std::exp(i * (theta * a0)) * u;
}

}  // namespace

std::vector<MomentumBlock> momentum_blocks(const ChainSpec& spec) {
  if (!spec.periodic() || !spec.uniform()) {
    throw std::invalid_argument("momentum blocks need a uniform periodic chain");
  }
  const int n = spec.n_sites();
  const CMatrix f = nambu_fourier(n);
  const CMatrix mx = generator_mixer(spec).matrix;
  const CMatrix mt = generator_target(spec).matrix;
  const CMatrix cd = generator_cd(spec).matrix;
  const auto [xxt, txt] = generator_2cd(spec);
  const CMatrix* full[5] = {&mx, &mt, &cd, &xxt.matrix, &txt.matrix};

  std::vector<MomentumBlock> out((n - 1) / 2 + 1);
  for (int kind = 0; kind < 5; ++kind) {
    const CMatrix rotated = f * *full[kind] * f.adjoint();
    for (int r = 0; r < static_cast<int>(out.size()); ++r) {
      out[r].blocks[kind] = extract(rotated, n, r);
    }
  }
  for (int r = 0; r < static_cast<int>(out.size()); ++r) {
    out[r].k_index = r;
    out[r].theta_k = momentum(n, r);
    out[r].paired = partner(n, r) != r;
  }
  return out;
}

CMatrix reassemble_generator(const std::vector<MomentumBlock>& blocks, int n_sites,
                             GeneratorKind kind) {
  const int n = n_sites;
  CMatrix mt = CMatrix::Zero(2 * n, 2 * n);
  auto place = [&](int r, const Matrix2& h) {
    const int a = r;
    const int b = n + partner(n, r);
    mt(a, a) = h(0, 0);
    mt(a, b) = h(0, 1);
    mt(b, a) = h(1, 0);
    mt(b, b) = h(1, 1);
  };
  for (const MomentumBlock& blk : blocks) {
    const Matrix2& h = blk.block(kind);
    place(blk.k_index, h);
    if (blk.paired) {
      // particle-hole partner: h_{-q} = -sigma_x h_q^* sigma_x
      Matrix2 g;
      g << -std::conj(h(1, 1)), -std::conj(h(1, 0)), -std::conj(h(0, 1)), -std::conj(h(0, 0));
      place(partner(n, blk.k_index), g);
    }
  }
  const CMatrix f = nambu_fourier(n);
  return f.adjoint() * mt * f;
}

double momentum_energy(const std::vector<MomentumBlock>& blocks, const AngleSchedule& schedule) {
  if (is_constrained(schedule.variant())) {
    return momentum_energy(blocks, expand_constrained(schedule));
  }
  const Variant v = schedule.variant();
  double energy = 0.0;
  for (const MomentumBlock& blk : blocks) {
    Matrix2 corr = Matrix2::Zero();
    corr(1, 1) = 1.0;  // every mode filled: <c_q c_q^dag> = 0, <c_-q^dag c_-q> = 1
    for (int k = 0; k < schedule.steps(); ++k) {
      auto evolve = [&](const Matrix2& h, double theta) {
        const Matrix2 u = exp_i(h, theta);
        corr = u * corr * u.adjoint();
      };
      if (v == Variant::Qaoa2Cd) {
        evolve(schedule.delta(k) * blk.block(GeneratorKind::Xxt) -
                   schedule.zeta(k) * blk.block(GeneratorKind::Txt),
               1.0);
      }
      if (v != Variant::Qaoa) evolve(blk.block(GeneratorKind::Cd), schedule.alpha(k));
      evolve(blk.block(GeneratorKind::Target), -schedule.gamma(k));
      evolve(blk.block(GeneratorKind::Mixer), -schedule.beta(k));
    }
    const Matrix2& h = blk.block(GeneratorKind::Target);
    const double trace_hg = (h * corr).trace().real();
    energy += blk.paired ? -0.5 * (2.0 * trace_hg - h.trace().real()) : -0.5 * trace_hg;
  }
  return energy;  // the target generator has no constant part
}

double momentum_run_circuit(const ChainSpec& spec, const AngleSchedule& schedule) {
  return momentum_energy(momentum_blocks(spec), schedule);
}

}  // namespace cdqaoa
