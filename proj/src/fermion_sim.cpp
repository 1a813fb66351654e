#include "cdqaoa/fermion_sim.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cdqaoa {
namespace {

// Accumulates sum A_ij c_i^dag c_j + B_ij c_i^dag c_j^dag + C_ij c_i c_j + const
// and converts it to (M, offset).
class BdgBuilder {
 public:
  explicit BdgBuilder(int n) : n_(n), a_(CMatrix::Zero(n, n)), b_(CMatrix::Zero(n, n)), c_(CMatrix::Zero(n, n)) {}

  void hop(int i, int j, Complex v) { a_(i, j) += v; }
  void create_pair(int i, int j, Complex v) { b_(i, j) += v; }
  void annihilate_pair(int i, int j, Complex v) { c_(i, j) += v; }
  void constant(double v) { constant_ += v; }

  QuadraticGenerator build() const {
    QuadraticGenerator g;
    g.matrix = CMatrix::Zero(2 * n_, 2 * n_);
    g.matrix.topLeftCorner(n_, n_) = a_;
    g.matrix.topRightCorner(n_, n_) = b_ - b_.transpose();
    g.matrix.bottomLeftCorner(n_, n_) = c_ - c_.transpose();
    g.matrix.bottomRightCorner(n_, n_) = -a_.transpose();
    g.offset = constant_ + 0.5 * a_.trace().real();
    return g;
  }

 private:
  int n_;
  CMatrix a_, b_, c_;
  double constant_ = 0.0;
};

// sigma^Z_i sigma^Z_j = sign (c_i^dag - c_i)(c_j^dag + c_j) for a bond i -> j.
void add_zz_bond(BdgBuilder& bdg, int i, int j, double weight) {
  bdg.create_pair(i, j, weight);
  bdg.hop(i, j, weight);
  bdg.hop(j, i, weight);  // -c_i c_j^dag = c_j^dag c_i
  bdg.annihilate_pair(i, j, -weight);
}

QuadraticGenerator from_matrix(CMatrix m) { return QuadraticGenerator{std::move(m), 0.0}; }

}  // namespace

double hermiticity_error(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix particle_hole_image(const CMatrix& x) {
  const Eigen::Index n = x.rows() / 2;
  CMatrix out(x.rows(), x.cols());
  const CMatrix xc = x.conjugate();
  out.topLeftCorner(n, n) = xc.bottomRightCorner(n, n);
  out.topRightCorner(n, n) = xc.bottomLeftCorner(n, n);
  out.bottomLeftCorner(n, n) = xc.topRightCorner(n, n);
  out.bottomRightCorner(n, n) = xc.topLeftCorner(n, n);
  return out;
}

double particle_hole_error(const CMatrix& m) {
  return (particle_hole_image(m) + m).cwiseAbs().maxCoeff();
}

CMatrix nambu_bracket(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

QuadraticGenerator generator_mixer(const ChainSpec& spec) {
  const int n = spec.n_sites();
  BdgBuilder bdg(n);
  for (int j = 0; j < n; ++j) {
    bdg.constant(1.0);
    bdg.hop(j, j, -2.0);
  }
  return bdg.build();
}

QuadraticGenerator generator_target(const ChainSpec& spec) {
  const int n = spec.n_sites();
  BdgBuilder bdg(n);
  // parity sector of the all-filled initial state
  const double closing_sign = (n % 2 == 0) ? -1.0 : 1.0;
  for (int b = 0; b < spec.n_bonds(); ++b) {
    const auto [i, j] = spec.bond_sites(b);
    const bool closing = j < i;
    add_zz_bond(bdg, i, j, spec.couplings()[b] * (closing ? closing_sign : 1.0));
  }
  return bdg.build();
}

QuadraticGenerator generator_cd(const ChainSpec& spec) {
  const CMatrix mx = generator_mixer(spec).matrix;
  const CMatrix mt = generator_target(spec).matrix;
  return from_matrix(Complex(0.0, -1.0) * nambu_bracket(mx, mt));
}

std::pair<QuadraticGenerator, QuadraticGenerator> generator_2cd(const ChainSpec& spec) {
  const CMatrix mx = generator_mixer(spec).matrix;
  const CMatrix mt = generator_target(spec).matrix;
  const CMatrix xt = nambu_bracket(mx, mt);
  return {from_matrix(nambu_bracket(mx, xt)), from_matrix(nambu_bracket(mt, xt))};
}

GaussianState initial_state(const ChainSpec& spec) {
  const int n = spec.n_sites();
  GaussianState s;
  s.corr = CMatrix::Zero(2 * n, 2 * n);
  // <c_i c_j^dag> = 0 and <c_i^dag c_j> = delta_ij for the filled state
  s.corr.bottomRightCorner(n, n).setIdentity();
  s.parity = (n % 2 == 0) ? 1 : -1;
  return s;
}

GaussianState apply_unitary(const GaussianState& state, const QuadraticGenerator& gen,
                            double angle) {
  if (gen.matrix.rows() != state.corr.rows() || gen.matrix.cols() != state.corr.cols()) {
    throw std::invalid_argument("generator and state dimensions differ");
  }
  if (angle == 0.0) return state;
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(gen.matrix);
  const Eigen::VectorXcd phases =
      (Complex(0.0, angle) * eig.eigenvalues().cast<Complex>()).array().exp();
  const CMatrix v = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  GaussianState out{v * state.corr * v.adjoint(), state.parity};
  return out;
}

double expect(const GaussianState& state, const QuadraticGenerator& gen) {
  return -0.5 * (gen.matrix.cwiseProduct(state.corr.transpose())).sum().real() + gen.offset;
}

double expect_target(const GaussianState& state, const ChainSpec& spec) {
  return expect(state, generator_target(spec));
}

double purity_error(const GaussianState& state) {
  return (state.corr * state.corr - state.corr).cwiseAbs().maxCoeff();
}

double canonical_error(const GaussianState& state) {
  const CMatrix id = CMatrix::Identity(state.corr.rows(), state.corr.cols());
  return (state.corr + particle_hole_image(state.corr) - id).cwiseAbs().maxCoeff();
}

GaussianState run_circuit_state(const ChainSpec& spec, const AngleSchedule& schedule) {
  if (is_constrained(schedule.variant())) {
    return run_circuit_state(spec, expand_constrained(schedule));
  }
  const Variant v = schedule.variant();
  const QuadraticGenerator mixer = generator_mixer(spec);
  const QuadraticGenerator target = generator_target(spec);
  QuadraticGenerator cd;
  std::pair<QuadraticGenerator, QuadraticGenerator> second;
  if (v == Variant::QaoaCd || v == Variant::Qaoa2Cd) cd = generator_cd(spec);
  if (v == Variant::Qaoa2Cd) second = generator_2cd(spec);

  GaussianState state = initial_state(spec);
  for (int k = 0; k < schedule.steps(); ++k) {
    if (v == Variant::Qaoa2Cd) {
      const QuadraticGenerator combined{
          schedule.delta(k) * second.first.matrix - schedule.zeta(k) * second.second.matrix, 0.0};
      state = apply_unitary(state, combined, 1.0);
    }
    if (v != Variant::Qaoa) state = apply_unitary(state, cd, schedule.alpha(k));
    state = apply_unitary(state, target, -schedule.gamma(k));
    state = apply_unitary(state, mixer, -schedule.beta(k));
  }
  return state;
}

double run_circuit(const ChainSpec& spec, const AngleSchedule& schedule) {
  return expect_target(run_circuit_state(spec, schedule), spec);
}

}  // namespace cdqaoa
