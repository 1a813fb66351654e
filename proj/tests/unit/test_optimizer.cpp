#include <doctest.h>

#include <numbers>
#include <random>

#include "cdqaoa/analytics.hpp"
#include "cdqaoa/fermion_sim.hpp"
#include "cdqaoa/optimizer.hpp"
#include "support.hpp"

using namespace cdqaoa;

namespace {

constexpr double kPi = std::numbers::pi;

OptimizerConfig adjoint(int restarts, std::uint64_t seed = 0) {
  OptimizerConfig c;
  c.method = Method::AdjointQuasiNewton;
  c.restarts = restarts;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("optimizer") {
  TEST_CASE("interpolation of one step") {
    const AngleSchedule next = interp_extend(AngleSchedule(Variant::Qaoa, 1, {0.4, -0.2}));
    CHECK(next.steps() == 2);
    CHECK(next.gamma(0) == 0.4);
    CHECK(next.gamma(1) == 0.4);
    CHECK(next.beta(0) == -0.2);
    CHECK(next.beta(1) == -0.2);
  }

  TEST_CASE("interpolation of two steps") {
    const AngleSchedule next = interp_extend(AngleSchedule(Variant::QaoaCd, 2, {1.0, 0.1, 0.3, 3.0, 0.5, 0.7}));
    CHECK(next.gamma(0) == 1.0);
    CHECK(next.gamma(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(next.gamma(2) == 3.0);
    CHECK(next.alpha(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(interp_extend(AngleSchedule(Variant::Qaoa2Cd, 3)) == AngleSchedule(Variant::Qaoa2Cd, 4));
  }

  TEST_CASE("interpolated values stay between their parents") {
    std::mt19937_64 rng(3);
    for (int p = 1; p <= 6; ++p) {
      const AngleSchedule prev = testing::random_angles(Variant::Qaoa2Cd, p, rng);
      const AngleSchedule next = interp_extend(prev);
      const int w = prev.width();
      for (int i = 1; i <= p + 1; ++i) {
        for (int f = 0; f < w; ++f) {
          const double left = i >= 2 ? prev.values()[(i - 2) * w + f] : 0.0;
          const double right = i <= p ? prev.values()[(i - 1) * w + f] : 0.0;
          const double v = next.values()[(i - 1) * w + f];
          CHECK(v >= std::min(left, right) - 1e-15);
          CHECK(v <= std::max(left, right) + 1e-15);
        }
      }
    }
  }

  TEST_CASE("random starts are shared across variants and depths") {
    OptimizerConfig c;
    c.seed = 9;
    const AngleSchedule cd = random_schedule(Variant::QaoaCd, 3, c, 4);
    const AngleSchedule qa = random_schedule(Variant::Qaoa, 3, c, 4);
    const AngleSchedule deep = random_schedule(Variant::QaoaCd, 5, c, 4);
    for (int k = 0; k < 3; ++k) {
      CHECK(cd.gamma(k) == qa.gamma(k));
      CHECK(cd.beta(k) == qa.beta(k));
      CHECK(cd.alpha(k) == deep.alpha(k));
    }
    for (double x : deep.values()) CHECK(std::abs(x) <= c.init_box);
    CHECK(random_schedule(Variant::QaoaCd, 3, c, 5) != cd);
  }

  TEST_CASE("depth-one minimum on the ring") {
    const ChainSpec ring = make_ring_uniform(10);
    OptimizerConfig c;
    const auto r = minimize(ring, Variant::Qaoa, 1, AngleSchedule(Variant::Qaoa, 1, {0.35, 0.42}), c);
    CHECK(r.best_energy == doctest::Approx(-5.0).epsilon(1e-8));
    CHECK(r.residual == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(r.converged);
  }

  TEST_CASE("one evaluation from zero angles returns the initial energy") {
    OptimizerConfig c;
    c.max_evals = 1;
    c.init_box = 0.0;
    for (Method m : {Method::NelderMead, Method::AdjointQuasiNewton}) {
      c.method = m;
      const auto r = minimize(make_open_random(6, 1), Variant::QaoaCd, 2, AngleSchedule(Variant::QaoaCd, 2), c);
      CHECK(r.best_energy == 0.0);
    }
  }

  TEST_CASE("depth sweep on the ring follows the residual bound") {
    for (Method m : {Method::NelderMead, Method::AdjointQuasiNewton}) {
      OptimizerConfig c;
      c.method = m;
      c.restarts = 3;
      const auto results = sweep_depth(make_ring_uniform(10), Variant::Qaoa, 5, Strategy::Interp, c);
      REQUIRE(results.size() == 5);
      for (int p = 1; p <= 5; ++p) {
        CHECK(std::abs(results[p - 1].residual - upper_bound_ring(10, p)) <= 1e-6);
      }
      CHECK(results[4].best_energy == doctest::Approx(-10.0).epsilon(1e-7));
    }
  }

  TEST_CASE("second-order variant converges at depth two on the ring") {
    const auto results = sweep_depth(make_ring_uniform(10), Variant::Qaoa2Cd, 2, Strategy::Interp, adjoint(10));
    CHECK(results[1].residual <= 1e-6);
  }

  TEST_CASE("multistart residuals never rise with depth") {
    for (Variant v : {Variant::Qaoa, Variant::QaoaCd}) {
      const auto results = sweep_depth(make_open_random(8, 4), v, 5, Strategy::MultiStart, adjoint(3, 4));
      for (std::size_t p = 1; p < results.size(); ++p) {
        CHECK(results[p].best_energy <= results[p - 1].best_energy + 1e-12);
      }
    }
  }

  TEST_CASE("sweeps are deterministic") {
    const auto a = sweep_depth(make_open_random(7, 2), Variant::QaoaCd, 3, Strategy::Interp, adjoint(2, 1));
    const auto b = sweep_depth(make_open_random(7, 2), Variant::QaoaCd, 3, Strategy::Interp, adjoint(2, 1));
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].best_angles == b[i].best_angles);
      CHECK(a[i].best_energy == b[i].best_energy);
      CHECK(a[i].start_index == b[i].start_index);
    }
  }

  TEST_CASE("energies never fall below the ground energy") {
    const ChainSpec spec = make_open_random(8, 6);
    const double e_min = spectrum_bounds(spec).e_min;
    for (const auto& r : sweep_depth(spec, Variant::Qaoa2Cd, 4, Strategy::MultiStart, adjoint(2))) {
      CHECK(r.best_energy >= e_min - 1e-9);
      CHECK(r.residual >= -1e-12);
      CHECK(r.residual <= 1.0);
    }
  }

  TEST_CASE("free-form variants dominate their constrained forms") {
    const ChainSpec spec = make_open_uniform(8);
    const OptimizerConfig c = adjoint(3, 2);
    for (Variant v : {Variant::QaoaCd2p, Variant::Qaoa2Cd2p}) {
      const auto constrained = sweep_depth(spec, v, 3, Strategy::MultiStart, c);
      const auto free = sweep_depth(spec, free_form_of(v), 3, Strategy::MultiStart, c, [&](int p) {
        return std::vector<AngleSchedule>{expand_constrained(constrained[p - 1].best_angles)};
      });
      for (int p = 0; p < 3; ++p) CHECK(free[p].best_energy <= constrained[p].best_energy + 1e-9);
    }
  }

  TEST_CASE("multistart ties go to the lowest index") {
    const ChainSpec spec = make_ring_uniform(6);
    const CircuitEvaluator eval(spec, Variant::Qaoa);
    OptimizerConfig c;
    c.restarts = 0;
    c.max_evals = 1;
    const std::vector<AngleSchedule> starts(3, AngleSchedule(Variant::Qaoa, 1, {0.1, 0.2}));
    CHECK(multistart(eval, 1, c, spectrum_bounds(spec), starts).start_index == 0);
    CHECK_THROWS_AS(multistart(eval, 1, c, spectrum_bounds(spec)), std::invalid_argument);
  }

  TEST_CASE("landscape of the ring") {
    const LandscapeGrid grid{0.0, kPi / 2, 9, 0.0, kPi / 2, 9};
    const auto m = landscape_grid(make_ring_uniform(10), Variant::Qaoa, grid);
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) {
        CHECK(std::abs(m(i, j) + 5.0 * std::sin(4 * grid.beta(i)) * std::sin(4 * grid.gamma(j))) <= 1e-10);
      }
      CHECK(std::abs(m(0, i)) <= 1e-12);
    }
    CHECK(m(2, 2) == doctest::Approx(-5.0).epsilon(1e-12));
  }

  TEST_CASE("landscape of the open chain") {
    const ChainSpec spec = make_open_uniform(20);
    const LandscapeGrid grid{-0.5, 1.0, 7, -0.8, 0.9, 6};
    const auto m = landscape_grid(spec, Variant::Qaoa, grid);
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 6; ++j) CHECK(std::abs(m(i, j) - cost_p1_open(spec, grid.beta(i), grid.gamma(j))) <= 1e-9);
    }
  }

  TEST_CASE("landscape arguments") {
    const ChainSpec spec = make_ring_uniform(6);
    const LandscapeGrid grid{0.0, 1.0, 3, 0.0, 1.0, 3};
    CHECK_THROWS_AS(landscape_grid(spec, Variant::QaoaCd, grid), std::invalid_argument);
    const std::vector<double> alpha{0.2};
    CHECK(landscape_grid(spec, Variant::QaoaCd, grid, alpha).rows() == 3);
    CHECK_THROWS_AS(landscape_grid(spec, Variant::QaoaCd2p, grid, alpha), std::invalid_argument);
    CHECK_THROWS_AS(landscape_grid(spec, Variant::Qaoa, LandscapeGrid{0.0, 1.0, 0, 0.0, 1.0, 3}),
                    std::invalid_argument);
  }

  TEST_CASE("config validation and JSON") {
    OptimizerConfig c;
    c.method = Method::NumericGradientQuasiNewton;
    c.seed = 123456789012345ULL;
    c.restarts = 7;
    const OptimizerConfig back = optimizer_config_from_json(to_json(c));
    CHECK(back.method == c.method);
    CHECK(back.seed == c.seed);
    CHECK(back.restarts == 7);
    CHECK(back.init_box == c.init_box);
    OptimizerConfig bad;
    bad.f_tol = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = OptimizerConfig{};
    bad.max_evals = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    CHECK_THROWS_AS(method_from_string("simplex"), std::invalid_argument);
    CHECK(strategy_from_string("interp") == Strategy::Interp);
    CHECK_THROWS_AS(sweep_depth(make_ring_uniform(5), Variant::Qaoa, 0, Strategy::Interp, c), std::invalid_argument);
  }
}
