#include "cdqaoa/circuit_evaluator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

extern "C" void dgesvd_(const char* jobu, const char* jobvt, const int* m, const int* n, double* a, const int* lda,
                        double* s, double* u, const int* ldu, double* vt, const int* ldvt, double* work,
                        const int* lwork, int* info);

namespace cdqaoa {
namespace {

using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// Rows of the complex matrix [Re | Im] times exp(i theta values).
void phase_rows(const RVector& values, double theta, RMatrix& z) {
  const Eigen::Index c = z.cols() / 2;
  const Eigen::ArrayXd ang = theta * values.array();
  const Eigen::ArrayXd co = ang.cos();
  const Eigen::ArrayXd si = ang.sin();
  for (Eigen::Index j = 0; j < c; ++j) {
    auto re = z.col(j).array();
    auto im = z.col(c + j).array();
    const Eigen::ArrayXd r = re;
    re = co * r - si * im;
    im = si * r + co * im;
  }
}

// exp(-theta T) on rows in the Schur basis of a rotation propagator.
void rotate_rows(const std::vector<Eigen::Index>& first, const RVector& omega, double theta, RMatrix& z) {
  for (std::size_t k = 0; k < first.size(); ++k) {
    const Eigen::Index i = first[k];
    const double c = std::cos(theta * omega(static_cast<Eigen::Index>(k)));
    const double s = std::sin(theta * omega(static_cast<Eigen::Index>(k)));
    const RVector a = z.row(i);
    z.row(i) = c * a.transpose() - s * z.row(i + 1);
    z.row(i + 1) = s * a.transpose() + c * z.row(i + 1);
  }
}

// Im <Y, diag(values) W> for z = [Wr | Yr | Wi | Yi].
double diagonal_overlap(const RVector& values, const RMatrix& z, Eigen::Index n) {
  const RVector per_row = (z.middleCols(n, n).cwiseProduct(z.middleCols(2 * n, n)) -
                           z.rightCols(n).cwiseProduct(z.leftCols(n)))
                              .rowwise()
                              .sum();
  return values.dot(per_row);
}

// Re <Y, T W> for the block-antisymmetric T of a rotation propagator.
double rotation_overlap(const std::vector<Eigen::Index>& first, const RVector& omega, const RMatrix& z,
                        Eigen::Index n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < first.size(); ++k) {
    const Eigen::Index i = first[k];
    const Eigen::Index j = i + 1;
    double t = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) {
      t += z(i, n + c) * z(j, c) + z(i, 3 * n + c) * z(j, 2 * n + c) - z(j, n + c) * z(i, c) -
           z(j, 3 * n + c) * z(i, 2 * n + c);
    }
    acc += omega(static_cast<Eigen::Index>(k)) * t;
  }
  return acc;
}

bool has_bdg_blocks(const RMatrix& m) {
  const Eigen::Index n = m.rows() / 2;
  const double tol = 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m.bottomRightCorner(n, n) + m.topLeftCorner(n, n)).cwiseAbs().maxCoeff() <= tol &&
         (m.bottomLeftCorner(n, n) + m.topRightCorner(n, n)).cwiseAbs().maxCoeff() <= tol;
}

// Eigensystem of [[h, D], [-D, -h]] from the SVD a = h + D = U S V^T: the
// values are +-S with vectors [(V + U)/2; (V - U)/2] and [(V - U)/2; (V + U)/2].
void bdg_eigensystem(RMatrix a, RMatrix& vectors, RVector& values) {
  const int n = static_cast<int>(a.rows());
  RMatrix u(n, n);
  RMatrix vt(n, n);
  RVector s(n);
  const int lwork = 8 * n + 16;
  std::vector<double> work(static_cast<std::size_t>(lwork));
  int info = 0;
  dgesvd_("A", "A", &n, &n, a.data(), &n, s.data(), u.data(), &n, vt.data(), &n, work.data(), &lwork, &info);
  if (info != 0) throw std::runtime_error("dgesvd failed with info " + std::to_string(info));
  const RMatrix plus = 0.5 * (vt.transpose() + u);
  const RMatrix minus = 0.5 * (vt.transpose() - u);
  vectors.resize(2 * n, 2 * n);
  vectors << plus, minus, minus, plus;
  values.resize(2 * n);
  values << s, -s;
}

RMatrix real_part_checked(const CMatrix& m) {
  if (m.imag().cwiseAbs().maxCoeff() > 1e-12) throw std::logic_error("expected a real generator");
  return m.real();
}

}  // namespace

CircuitEvaluator::Propagator CircuitEvaluator::make_propagator(const CMatrix& generator) {
  Propagator p;
  const double scale = std::max(1.0, generator.cwiseAbs().maxCoeff());
  const bool real = generator.imag().cwiseAbs().maxCoeff() == 0.0;
  const bool imaginary = generator.real().cwiseAbs().maxCoeff() == 0.0;
  if (real && (generator.real() - RMatrix(generator.real().diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0) {
    p.kind = Propagator::Kind::Diagonal;
    p.values = generator.diagonal().real();
  } else if (real) {
    p.kind = Propagator::Kind::Symmetric;
    const Eigen::SelfAdjointEigenSolver<RMatrix> eig(generator.real());
    p.vectors = eig.eigenvectors();
    p.values = eig.eigenvalues();
  } else if (imaginary) {
    p.kind = Propagator::Kind::Rotation;
    const RMatrix s = generator.imag();
    const Eigen::RealSchur<RMatrix> schur(s);
    const RMatrix& t = schur.matrixT();
    RMatrix blocks = RMatrix::Zero(s.rows(), s.cols());
    std::vector<double> omega;
    for (Eigen::Index i = 0; i < s.rows();) {
      if (i + 1 < s.rows() && t(i + 1, i) != 0.0) {
        const double w = 0.5 * (t(i, i + 1) - t(i + 1, i));
        p.first.push_back(i);
        omega.push_back(w);
        blocks(i, i + 1) = w;
        blocks(i + 1, i) = -w;
        i += 2;
      } else {
        ++i;
      }
    }
    p.vectors = schur.matrixU();
    p.values = Eigen::Map<const RVector>(omega.data(), static_cast<Eigen::Index>(omega.size()));
    if ((p.vectors * blocks * p.vectors.transpose() - s).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw std::logic_error("antisymmetric generator has no clean real Schur form");
    }
  } else {
    throw std::logic_error("generator is neither real nor imaginary");
  }
  return p;
}

void CircuitEvaluator::apply(const Propagator& p, double theta, RMatrix& z) {
  if (theta == 0.0) return;
  switch (p.kind) {
    case Propagator::Kind::Diagonal:
      phase_rows(p.values, theta, z);
      return;
    case Propagator::Kind::Symmetric: {
      RMatrix t = p.vectors.transpose() * z;
      phase_rows(p.values, theta, t);
      z.noalias() = p.vectors * t;
      return;
    }
    case Propagator::Kind::Rotation: {
      RMatrix t = p.vectors.transpose() * z;
      rotate_rows(p.first, p.values, theta, t);
      z.noalias() = p.vectors * t;
      return;
    }
  }
}

double CircuitEvaluator::overlap(const Propagator& p, const RMatrix& z, Eigen::Index n) {
  return p.kind == Propagator::Kind::Rotation ? rotation_overlap(p.first, p.values, z, n)
                                              : diagonal_overlap(p.values, z, n);
}

CircuitEvaluator::CircuitEvaluator(const ChainSpec& spec, Variant variant)
    : spec_(spec), variant_(variant), free_variant_(free_form_of(variant)) {
  mixer_ = make_propagator(generator_mixer(spec).matrix);
  const CMatrix target = generator_target(spec).matrix;
  target_ = make_propagator(target);
  target_matrix_ = real_part_checked(target);
  if (free_variant_ != Variant::Qaoa) cd_ = make_propagator(generator_cd(spec).matrix);
  if (free_variant_ == Variant::Qaoa2Cd) {
    // real couplings make both nested commutators real symmetric
    auto [xxt, txt] = generator_2cd(spec);
    xxt_ = real_part_checked(xxt.matrix);
    txt_ = real_part_checked(txt.matrix);
    chiral_ = has_bdg_blocks(xxt_) && has_bdg_blocks(txt_);
    if (chiral_) {
      const Eigen::Index n = spec.n_sites();
      xxt_block_ = xxt_.topLeftCorner(n, n) + xxt_.topRightCorner(n, n);
      txt_block_ = txt_.topLeftCorner(n, n) + txt_.topRightCorner(n, n);
    }
  }
}

std::vector<double> CircuitEvaluator::free_form(std::span<const double> angles) const {
  if (!is_constrained(variant_)) return {angles.begin(), angles.end()};
  const int steps = static_cast<int>(angles.size() / 2);
  const AngleSchedule expanded =
      expand_constrained(AngleSchedule(variant_, steps, {angles.begin(), angles.end()}));
  return {expanded.values().begin(), expanded.values().end()};
}

double CircuitEvaluator::energy(std::span<const double> angles) const {
  return energy_and_gradient(angles, {});
}

double CircuitEvaluator::energy_and_gradient(std::span<const double> angles,
                                             std::span<double> grad) const {
  if (angles.empty() || angles.size() % static_cast<std::size_t>(width()) != 0) {
    throw std::invalid_argument("angle count does not match the variant");
  }
  if (!grad.empty() && grad.size() != angles.size()) {
    throw std::invalid_argument("gradient buffer has the wrong size");
  }
  if (!is_constrained(variant_)) return free_energy(angles, grad);

  const std::vector<double> expanded = free_form(angles);
  if (grad.empty()) return free_energy(expanded, {});
  std::vector<double> g(expanded.size());
  const double e = free_energy(expanded, g);
  const int fw = params_per_step(free_variant_);
  const std::size_t steps = angles.size() / 2;
  for (std::size_t k = 0; k < steps; ++k) {
    const double gamma = angles[2 * k];
    const double beta = angles[2 * k + 1];
    const double* gk = &g[k * fw];
    double dg = gk[0] - gk[2] * beta / 2.0;
    double db = gk[1] - gk[2] * gamma / 2.0;
    if (fw == 5) {
      dg += gk[3] * beta * beta / 6.0 + gk[4] * 2.0 * beta * gamma / 3.0;
      db += gk[3] * beta * gamma / 3.0 + gk[4] * gamma * gamma / 3.0;
    }
    grad[2 * k] = dg;
    grad[2 * k + 1] = db;
  }
  return e;
}

double CircuitEvaluator::free_energy(std::span<const double> angles, std::span<double> grad) const {
  const Eigen::Index n = spec_.n_sites();
  const Eigen::Index m = 2 * n;
  const int w = params_per_step(free_variant_);
  const int steps = static_cast<int>(angles.size()) / w;
  const bool has_cd = w >= 3;
  const bool has_second = w == 5;

  struct Eigensystem {
    RMatrix vectors;
    RVector values;
  };
  std::vector<Eigensystem> second(has_second ? steps : 0);

  // x = [Re W | Im W]
  RMatrix x = RMatrix::Zero(m, 2 * n);
  x.block(n, 0, n, n).setIdentity();
  RMatrix t(m, 2 * n);
  for (int k = 0; k < steps; ++k) {
    const double* a = &angles[static_cast<std::size_t>(k) * w];
    if (has_second) {
      if (chiral_) {
        bdg_eigensystem(a[3] * xxt_block_ - a[4] * txt_block_, second[k].vectors, second[k].values);
      } else {
        const Eigen::SelfAdjointEigenSolver<RMatrix> eig(a[3] * xxt_ - a[4] * txt_);
        second[k] = {eig.eigenvectors(), eig.eigenvalues()};
      }
      t.noalias() = second[k].vectors.transpose() * x;
      phase_rows(second[k].values, 1.0, t);
      x.noalias() = second[k].vectors * t;
    }
    if (has_cd) apply(cd_, a[2], x);
    apply(target_, -a[0], x);
    apply(mixer_, -a[1], x);
  }

  const RMatrix y = target_matrix_ * x;
  const double energy = -0.5 * x.cwiseProduct(y).sum();
  if (grad.empty()) return energy;

  // Reverse sweep over z = [Re W | Re Y | Im W | Im Y], Y = B W with B the
  // observable pulled back to the current point of the circuit.
  RMatrix z(m, 4 * n);
  z.leftCols(n) = x.leftCols(n);
  z.middleCols(n, n) = y.leftCols(n);
  z.middleCols(2 * n, n) = x.rightCols(n);
  z.rightCols(n) = y.rightCols(n);
  RMatrix zt(m, 4 * n);

  // gradient of exp(i theta M) at the current point, then un-apply it
  auto reverse = [&](const Propagator& p, double theta) {
    double g = 0.0;
    if (p.kind == Propagator::Kind::Diagonal) {
      g = overlap(p, z, n);
      phase_rows(p.values, -theta, z);
      return g;
    }
    zt.noalias() = p.vectors.transpose() * z;
    g = overlap(p, zt, n);
    if (p.kind == Propagator::Kind::Rotation) {
      rotate_rows(p.first, p.values, -theta, zt);
    } else {
      phase_rows(p.values, -theta, zt);
    }
    z.noalias() = p.vectors * zt;
    return g;
  };

  RMatrix wb(m, 2 * n);
  RMatrix ya(m, 2 * n);
  RMatrix weighted(m, m);
  for (int k = steps - 1; k >= 0; --k) {
    const double* a = &angles[static_cast<std::size_t>(k) * w];
    double* g = &grad[static_cast<std::size_t>(k) * w];
    g[1] = -reverse(mixer_, -a[1]);
    g[0] = -reverse(target_, -a[0]);
    if (has_cd) g[2] = reverse(cd_, a[2]);
    if (has_second) {
      // Daleckii-Krein: d exp(iK) = V (Phi o (V^T dK V)) V^T with
      // Phi_jl = i exp(i (l_j + l_l)/2) sinc((l_j - l_l)/2).
      const Eigensystem& es = second[k];
      zt.noalias() = es.vectors.transpose() * z;
      wb.leftCols(n) = zt.leftCols(n);
      wb.rightCols(n) = zt.middleCols(2 * n, n);
      phase_rows(es.values, -1.0, wb);
      ya.leftCols(n) = zt.middleCols(n, n);
      ya.rightCols(n) = zt.rightCols(n);
      // R = W_before Y_after^dag
      const RMatrix r_re = wb * ya.transpose();
      RMatrix swapped(m, 2 * n);
      swapped.leftCols(n) = wb.rightCols(n);
      swapped.rightCols(n) = -wb.leftCols(n);
      const RMatrix r_im = swapped * ya.transpose();
      const Eigen::ArrayXd hs = (0.5 * es.values.array()).sin();
      const Eigen::ArrayXd hc = (0.5 * es.values.array()).cos();
      for (Eigen::Index l = 0; l < m; ++l) {
        for (Eigen::Index j = 0; j < m; ++j) {
          const double d = 0.5 * (es.values(j) - es.values(l));
          const double sn = std::abs(d) < 0.5 ? sinc(d) : (hs(j) * hc(l) - hc(j) * hs(l)) / d;
          const double se = hs(j) * hc(l) + hc(j) * hs(l);
          const double ce = hc(j) * hc(l) - hs(j) * hs(l);
          // Re(Phi_jl R_lj)
          weighted(j, l) = -sn * (se * r_re(l, j) + ce * r_im(l, j));
        }
      }
      // sum_jl weighted_jl (V^T X V)_jl = sum_ab X_ab (V weighted V^T)_ab
      const RMatrix b = es.vectors * weighted * es.vectors.transpose();
      g[3] = -(xxt_.cwiseProduct(b)).sum();
      g[4] = (txt_.cwiseProduct(b)).sum();
      zt.leftCols(n) = wb.leftCols(n);
      zt.middleCols(2 * n, n) = wb.rightCols(n);
      RMatrix yb(m, 2 * n);
      yb = ya;
      phase_rows(es.values, -1.0, yb);
      zt.middleCols(n, n) = yb.leftCols(n);
      zt.rightCols(n) = yb.rightCols(n);
      z.noalias() = es.vectors * zt;
    }
  }
  return energy;
}

}  // namespace cdqaoa
