#include <doctest.h>

#include <random>

#include "cdqaoa/fermion_sim.hpp"
#include "cdqaoa/momentum.hpp"
#include "support.hpp"

using namespace cdqaoa;

TEST_SUITE("momentum") {
  TEST_CASE("block count") {
    for (int n = 3; n <= 16; ++n) {
      CHECK(momentum_blocks(make_ring_uniform(n)).size() == static_cast<std::size_t>((n - 1) / 2 + 1));
    }
  }

  TEST_CASE("only uniform rings decompose") {
    CHECK_THROWS_AS(momentum_blocks(make_open_uniform(6)), std::invalid_argument);
    CHECK_THROWS_AS(momentum_blocks(ChainSpec(4, Boundary::Periodic, {1.0, 1.0, 0.5, 1.0})),
                    std::invalid_argument);
  }

  TEST_CASE("blocks are Hermitian and reassemble every generator") {
    for (int n : {5, 6, 10}) {
      const ChainSpec spec = make_ring_uniform(n);
      const auto blocks = momentum_blocks(spec);
      for (const MomentumBlock& b : blocks) {
        for (const auto& m : b.blocks) CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
      }
      const auto [xxt, txt] = generator_2cd(spec);
      const std::pair<GeneratorKind, CMatrix> kinds[] = {
          {GeneratorKind::Mixer, generator_mixer(spec).matrix},
          {GeneratorKind::Target, generator_target(spec).matrix},
          {GeneratorKind::Cd, generator_cd(spec).matrix},
          {GeneratorKind::Xxt, xxt.matrix},
          {GeneratorKind::Txt, txt.matrix},
      };
      for (const auto& [kind, full] : kinds) {
        CHECK((reassemble_generator(blocks, n, kind) - full).cwiseAbs().maxCoeff() <= 1e-10);
      }
    }
  }

  TEST_CASE("block evolution equals the full evolution") {
    std::mt19937_64 rng(12);
    for (int n : {3, 6, 7, 10}) {
      const ChainSpec spec = make_ring_uniform(n);
      const auto blocks = momentum_blocks(spec);
      for (Variant v : kAllVariants) {
        for (int t = 0; t < 4; ++t) {
          const AngleSchedule s = testing::random_angles(v, 1 + t, rng, 1.5);
          CHECK(std::abs(momentum_energy(blocks, s) - run_circuit(spec, s)) <= 1e-10);
        }
      }
    }
  }

  TEST_CASE("identity circuit") {
    CHECK(momentum_run_circuit(make_ring_uniform(8), AngleSchedule(Variant::Qaoa2Cd, 2)) ==
          doctest::Approx(0.0).epsilon(1e-14));
  }
}
