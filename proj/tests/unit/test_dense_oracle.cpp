#include <doctest.h>

#include <numbers>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "cdqaoa/dense_oracle.hpp"
#include "cdqaoa/fermion_sim.hpp"
#include "support.hpp"

using namespace cdqaoa;
using namespace cdqaoa::dense;

namespace {

constexpr double kPi = std::numbers::pi;

// Explicit Kronecker construction; site 0 is the least significant bit.
CMatrix single_site(int n, int site, const Eigen::Matrix2cd& m) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    const CMatrix f = q == site ? CMatrix(m) : CMatrix::Identity(2, 2);
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

Eigen::Matrix2cd pauli(char c) {
  Eigen::Matrix2cd m;
  const Complex i(0.0, 1.0);
  switch (c) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -i, i, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
  }
  return m;
}

double max_abs(const Eigen::VectorXcd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("dense_oracle") {
  TEST_CASE("Pauli strings match Kronecker products") {
    const int n = 3;
    for (int site = 0; site < n; ++site) {
      CHECK((PauliSum::x(n, site).to_dense() - single_site(n, site, pauli('x'))).cwiseAbs().maxCoeff() == 0.0);
      CHECK((PauliSum::y(n, site).to_dense() - single_site(n, site, pauli('y'))).cwiseAbs().maxCoeff() == 0.0);
      CHECK((PauliSum::z(n, site).to_dense() - single_site(n, site, pauli('z'))).cwiseAbs().maxCoeff() == 0.0);
    }
    const PauliSum prod = PauliSum::x(n, 0) * PauliSum::z(n, 0) * PauliSum::y(n, 2);
    const CMatrix expected = single_site(n, 0, pauli('x')) * single_site(n, 0, pauli('z')) *
                             single_site(n, 2, pauli('y'));
    CHECK((prod.to_dense() - expected).cwiseAbs().maxCoeff() <= 1e-15);
  }

  TEST_CASE("Pauli algebra") {
    const int n = 2;
    const PauliSum xy = PauliSum::x(n, 1) * PauliSum::y(n, 1);
    CHECK(xy.max_coeff_difference(PauliSum::z(n, 1, Complex(0.0, 1.0))) == 0.0);
    const PauliSum c = commutator(PauliSum::x(n, 0), PauliSum::z(n, 0));
    CHECK(c.max_coeff_difference(PauliSum::y(n, 0, Complex(0.0, -2.0))) == 0.0);
    CHECK(commutator(PauliSum::x(n, 0), PauliSum::z(n, 1)).pruned(0.0).empty());
    const PauliSum h = PauliSum::x(n, 0) + PauliSum::y(n, 1, 0.5);
    CHECK(h.adjoint().max_coeff_difference(h) == 0.0);
    CHECK((PauliSum::z(n, 0) - PauliSum::z(n, 0)).pruned(0.0).empty());
  }

  TEST_CASE("random operator products match dense products") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::uint64_t> mask(0, 15);
    std::normal_distribution<double> g;
    const int n = 4;
    PauliSum a(n);
    PauliSum b(n);
    for (int t = 0; t < 6; ++t) {
      a.add_term(mask(rng), mask(rng), {g(rng), g(rng)});
      b.add_term(mask(rng), mask(rng), {g(rng), g(rng)});
    }
    CHECK(((a * b).to_dense() - a.to_dense() * b.to_dense()).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((a.adjoint().to_dense() - a.to_dense().adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
  }

  TEST_CASE("initial state") {
    const StateVector one = dense_initial(1);
    CHECK(std::abs(one.amplitudes(0) - Complex(1.0 / std::sqrt(2.0))) <= 1e-15);
    CHECK(std::abs(one.amplitudes(1) + Complex(1.0 / std::sqrt(2.0))) <= 1e-15);
    for (int n : {3, 6}) {
      const StateVector s = dense_initial(n);
      CHECK(s.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(expect(s, pauli_mixer(n)) == doctest::Approx(-n).epsilon(1e-14));
    }
    CHECK_THROWS(dense_initial(kMaxStateSites + 1));
  }

  TEST_CASE("target phases") {
    std::mt19937_64 rng(2);
    const ChainSpec spec = make_open_random(6, 12);
    StateVector s = dense_apply_mixer(dense_initial(6), 0.3);
    CHECK(max_abs(dense_apply_target(s, spec, 0.0).amplitudes - s.amplitudes) == 0.0);
    const StateVector twice = dense_apply_target(dense_apply_target(s, spec, 0.2), spec, 0.5);
    CHECK(max_abs(twice.amplitudes - dense_apply_target(s, spec, 0.7).amplitudes) <= 1e-14);
    const StateVector viaexp = dense_expm_apply(pauli_target(spec), -0.7, s).state;
    CHECK(max_abs(viaexp.amplitudes - dense_apply_target(s, spec, 0.7).amplitudes) <= 1e-12);
  }

  TEST_CASE("mixer rotations") {
    const ChainSpec spec = make_open_random(6, 13);
    const StateVector s = dense_apply_target(dense_apply_mixer(dense_initial(6), 0.4), spec, 0.9);
    CHECK(max_abs(dense_apply_mixer(s, 0.0).amplitudes - s.amplitudes) == 0.0);
    const StateVector rot = dense_apply_mixer(s, kPi);
    CHECK(max_abs(rot.amplitudes.cwiseAbs2() - s.amplitudes.cwiseAbs2()) <= 1e-14);
    const StateVector viaexp = dense_expm_apply(pauli_mixer(6), -0.37, s).state;
    CHECK(max_abs(viaexp.amplitudes - dense_apply_mixer(s, 0.37).amplitudes) <= 1e-12);
  }

  TEST_CASE("Taylor exponential") {
    const ChainSpec spec = make_ring_uniform(6);
    const PauliSum cd = Complex(0.0, -1.0) * commutator(pauli_mixer(6), pauli_target(spec));
    const StateVector s = dense_apply_mixer(dense_initial(6), 0.2);
    CHECK(max_abs(dense_expm_apply(cd, 0.0, s).state.amplitudes - s.amplitudes) == 0.0);
    const ExpmResult fwd = dense_expm_apply(cd, 0.8, s);
    const ExpmResult back = dense_expm_apply(cd, -0.8, fwd.state);
    CHECK(max_abs(back.state.amplitudes - s.amplitudes) <= 1e-11);
    CHECK(fwd.norm_drift <= 1e-11);
    CHECK(fwd.matvecs > 0);
    // a single Pauli string exponentiates in closed form
    const PauliSum zz = PauliSum::z(6, 0) * PauliSum::z(6, 1);
    const Eigen::VectorXcd expected =
        std::cos(0.3) * s.amplitudes + Complex(0.0, std::sin(0.3)) * (zz.to_dense() * s.amplitudes);
    CHECK(max_abs(dense_expm_apply(zz, 0.3, s).state.amplitudes - expected) <= 1e-13);
  }

  TEST_CASE("CD unitary agrees with the fermionic simulator") {
    const ChainSpec spec = make_ring_uniform(6);
    const PauliSum cd = Complex(0.0, -1.0) * commutator(pauli_mixer(6), pauli_target(spec));
    for (double alpha : {0.3, -1.1}) {
      const StateVector d = dense_expm_apply(cd, alpha, dense_initial(6)).state;
      const GaussianState g = apply_unitary(initial_state(spec), generator_cd(spec), alpha);
      CHECK(std::abs(expect_diagonal(d, spec) - expect_target(g, spec)) <= 1e-9);
      CHECK(std::abs(expect(d, pauli_mixer(6)) - expect(g, generator_mixer(spec))) <= 1e-9);
      const auto [xxt, txt] = generator_2cd(spec);
      CHECK(std::abs(expect(d, commutator(pauli_mixer(6), commutator(pauli_mixer(6), pauli_target(spec)))) -
                     expect(g, xxt)) <= 1e-9);
      CHECK(std::abs(expect(d, commutator(pauli_target(spec), commutator(pauli_mixer(6), pauli_target(spec)))) -
                     expect(g, txt)) <= 1e-9);
    }
  }

  TEST_CASE("spectrum by enumeration") {
    const auto ring = dense_spectrum(make_ring_uniform(10));
    CHECK(ring.e_min == -10.0);
    CHECK(ring.e_max == 10.0);
    const auto open = dense_spectrum(make_open_uniform(5));
    CHECK(open.e_min == -4.0);
    CHECK(open.e_max == 4.0);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const ChainSpec spec = make_open_random(10, 500 + s);
      const auto d = dense_spectrum(spec);
      const auto m = spectrum_bounds(spec);
      CHECK(d.e_min == doctest::Approx(m.e_min).epsilon(1e-14));
      CHECK(d.e_max == doctest::Approx(m.e_max).epsilon(1e-14));
    }
    CHECK_THROWS(dense_spectrum(make_open_uniform(kMaxDiagonalSites + 1)));
  }

  TEST_CASE("circuit states keep their norm") {
    std::mt19937_64 rng(6);
    const ChainSpec spec = make_open_random(8, 3);
    for (Variant v : kAllVariants) {
      const StateVector s = dense_circuit_state(spec, testing::random_angles(v, 3, rng));
      CHECK(std::abs(s.amplitudes.norm() - 1.0) <= 1e-11);
    }
  }

  TEST_CASE("annihilators obey the canonical anticommutation relations") {
    const int n = 4;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const PauliSum ac = annihilator(n, i) * creator(n, j) + creator(n, j) * annihilator(n, i);
        const PauliSum expected = i == j ? PauliSum::identity(n) : PauliSum(n);
        CHECK(ac.max_coeff_difference(expected) <= 1e-15);
        const PauliSum aa = annihilator(n, i) * annihilator(n, j) + annihilator(n, j) * annihilator(n, i);
        CHECK(aa.pruned(1e-15).empty());
      }
    }
  }
}
