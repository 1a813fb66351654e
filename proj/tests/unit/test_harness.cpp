#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "cdqaoa/analytics.hpp"
#include "cdqaoa/harness.hpp"

using namespace cdqaoa;

namespace {

constexpr double kPi = std::numbers::pi;

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("cdqaoa_unit_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

ExperimentConfig small_ensemble() {
  ExperimentConfig c;
  c.family = SpecFamily::OpenRandom;
  c.n_sites = 6;
  c.m_instances = 3;
  c.base_seed = 40;
  c.variants = {Variant::Qaoa, Variant::QaoaCd};
  c.p_max = 3;
  c.n_starts = 2;
  c.optimizer.method = Method::AdjointQuasiNewton;
  c.threads = 1;
  return c;
}

RunRecord record(int instance, Variant v, int p, double residual) {
  RunRecord r;
  r.instance_id = instance;
  r.variant = v;
  r.p = p;
  r.n_p = p * params_per_step(v);
  r.residual = residual;
  return r;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("config validation") {
    ExperimentConfig c;
    CHECK_NOTHROW(validate(c));
    c.family = SpecFamily::RingUniform;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c.m_instances = 1;
    CHECK_NOTHROW(validate(c));
    c.p_max = 0;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = ExperimentConfig{};
    c.m_instances = 0;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    CHECK(ExperimentConfig{}.m_instances == 20);
    CHECK(ExperimentConfig{}.n_starts == 20);
    CHECK(ExperimentConfig{}.threshold == 1e-2);
  }

  TEST_CASE("strategy defaults") {
    ExperimentConfig c;
    CHECK(c.strategy_for(Variant::Qaoa) == Strategy::MultiStart);
    c.family = SpecFamily::OpenUniform;
    CHECK(c.strategy_for(Variant::Qaoa) == Strategy::Interp);
    c.strategies[Variant::Qaoa] = Strategy::MultiStart;
    CHECK(c.strategy_for(Variant::Qaoa) == Strategy::MultiStart);
    CHECK(c.strategy_for(Variant::QaoaCd) == Strategy::Interp);
  }

  TEST_CASE("config JSON round trip") {
    ExperimentConfig c = small_ensemble();
    c.strategies[Variant::QaoaCd] = Strategy::Interp;
    c.output_dir = "somewhere/else";
    const ExperimentConfig back = experiment_config_from_json(nlohmann::json::parse(to_json(c).dump()));
    CHECK(to_json(back) == to_json(c));
    CHECK(back.strategy_for(Variant::QaoaCd) == Strategy::Interp);
    CHECK_THROWS(experiment_config_from_json(nlohmann::json{{"family", "ring"}}));
  }

  TEST_CASE("instances") {
    ExperimentConfig c = small_ensemble();
    CHECK(make_instance(c, 2) == make_open_random(6, 42));
    CHECK(instance_seed(c, 5) == 45);
    c.family = SpecFamily::RingUniform;
    CHECK(make_instance(c, 0) == make_ring_uniform(6));
  }

  TEST_CASE("experiment records") {
    const ExperimentConfig c = small_ensemble();
    const auto records = run_experiment(c);
    REQUIRE(records.size() == 3u * 2u * 3u);
    for (std::size_t i = 0; i < records.size(); ++i) {
      const RunRecord& r = records[i];
      CHECK(r.status == "ok");
      CHECK(r.n_p == r.p * params_per_step(r.variant));
      CHECK(r.residual >= -1e-12);
      CHECK(r.residual <= 1.0);
      CHECK(r.seed == 40u + static_cast<unsigned>(r.instance_id));
      CHECK(r.angles.size() == static_cast<std::size_t>(r.n_p));
      CHECK(r.residual == doctest::Approx(residual_energy(r.energy, spectrum_bounds(make_instance(c, r.instance_id)))));
      if (i > 0) {
        const RunRecord& q = records[i - 1];
        CHECK(std::tuple(q.instance_id, static_cast<int>(q.variant), q.p) <
              std::tuple(r.instance_id, static_cast<int>(r.variant), r.p));
      }
    }
  }

  TEST_CASE("records do not depend on the thread count") {
    ExperimentConfig c = small_ensemble();
    const auto serial = run_experiment(c);
    c.threads = 3;
    const auto parallel = run_experiment(c);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      CHECK(serial[i].energy == parallel[i].energy);
      CHECK(serial[i].angles == parallel[i].angles);
    }
  }

  TEST_CASE("single-instance random ensemble") {
    ExperimentConfig c = small_ensemble();
    c.m_instances = 1;
    c.variants = {Variant::Qaoa2Cd};
    c.p_max = 2;
    CHECK(run_experiment(c).size() == 2);
  }

  TEST_CASE("statistics") {
    const auto one = ensemble_stats({record(0, Variant::Qaoa, 1, 0.3)});
    REQUIRE(one.size() == 1);
    CHECK(one[0].stddev == 0.0);
    CHECK(one[0].count == 1);

    const auto twin = ensemble_stats({record(0, Variant::Qaoa, 1, 0.3), record(1, Variant::Qaoa, 1, 0.3)});
    CHECK(twin[0].mean == 0.3);
    CHECK(twin[0].stddev == 0.0);

    // sample standard deviation of {1, 2, 3, 4} is sqrt(5/3)
    std::vector<RunRecord> rs;
    for (int i = 0; i < 4; ++i) rs.push_back(record(i, Variant::QaoaCd, 2, i + 1.0));
    RunRecord failed = record(9, Variant::QaoaCd, 2, 100.0);
    failed.status = "error: boom";
    rs.push_back(failed);
    const auto s = ensemble_stats(rs);
    CHECK(s[0].mean == doctest::Approx(2.5));
    CHECK(s[0].stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(s[0].count == 4);
    CHECK(s[0].n_p == 6);
  }

  TEST_CASE("re-indexing by parameter count") {
    const std::vector<RunRecord> rs{record(0, Variant::Qaoa, 5, 0.0), record(0, Variant::QaoaCd, 3, 0.0),
                                    record(0, Variant::Qaoa2Cd, 2, 0.0), record(0, Variant::Qaoa, 1, 0.25)};
    const auto out = reindex_by_parameters(rs);
    REQUIRE(out.size() == 4);
    CHECK(out[0].n_p == 2);
    CHECK(out[1].n_p == 10);
    CHECK(out[2].n_p == 9);
    CHECK(out[3].n_p == 10);
    CHECK(reindex_by_parameters({}).empty());
    CHECK(record(0, Variant::Qaoa, 20, 0.0).n_p == 40);
    CHECK(record(0, Variant::Qaoa2Cd, 6, 0.0).n_p == 30);
  }

  TEST_CASE("threshold crossings") {
    std::vector<RunRecord> rs;
    const double a[] = {0.5, 0.05, 0.005};
    const double b[] = {0.4, 0.2, 0.1};
    for (int p = 1; p <= 3; ++p) {
      rs.push_back(record(0, Variant::Qaoa, p, a[p - 1]));
      rs.push_back(record(1, Variant::Qaoa, p, b[p - 1]));
    }
    const auto c = threshold_crossings(rs, 0.06);
    REQUIRE(c.size() == 1);
    CHECK(c[0].mean_curve == 3);
    CHECK(c[0].instances_crossed == 1);
    CHECK(c[0].mean_of_instances == doctest::Approx((2 + 4) / 2.0));
  }

  TEST_CASE("CSV round trip keeps every digit") {
    const auto dir = scratch("csv");
    ExperimentConfig c = small_ensemble();
    c.output_dir = dir;
    c.p_max = 2;
    const auto records = run_experiment(c);
    emit_experiment(c, records);
    for (const char* f : {"records.csv", "stats.csv", "reindexed.csv", "crossings.csv", "manifest.json"}) {
      CHECK(std::filesystem::exists(dir / f));
    }
    const auto back = read_records_csv(dir / "records.csv");
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].energy == records[i].energy);
      CHECK(back[i].residual == records[i].residual);
      CHECK(back[i].angles == records[i].angles);
      CHECK(back[i].variant == records[i].variant);
      CHECK(back[i].seed == records[i].seed);
    }
    std::ifstream stats(dir / "stats.csv");
    std::string header;
    std::getline(stats, header);
    CHECK(header == "variant,p,n_p,mean_residual,std_residual,count,single");
  }

  TEST_CASE("experiments replay from their manifest") {
    const auto dir = scratch("replay");
    ExperimentConfig c = small_ensemble();
    c.output_dir = dir;
    c.p_max = 2;
    const auto first = run_experiment(c);
    emit_experiment(c, first);
    std::ifstream in(dir / "manifest.json");
    const auto manifest = nlohmann::json::parse(in);
    CHECK(manifest.at("version") == kVersion);
    CHECK(manifest.at("instances").size() == 3);
    const auto again = run_experiment(experiment_config_from_json(manifest.at("config")));
    REQUIRE(again.size() == first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
      CHECK(std::abs(again[i].energy - first[i].energy) <= 1e-12);
      CHECK(again[i].angles == first[i].angles);
    }
  }

  TEST_CASE("ring landscape") {
    const auto path = scratch("landscape") / "grid.csv";
    OptimizerConfig opt;
    opt.method = Method::AdjointQuasiNewton;
    const LandscapeGrid grid{0.0, kPi / 2, 5, 0.0, kPi / 2, 5};
    const auto out = emit_landscape(make_ring_uniform(10), Variant::Qaoa, grid, opt, path);
    CHECK(out.free_grid.minCoeff() == doctest::Approx(-5.0).epsilon(1e-12));
    CHECK(out.free_grid(1, 1) == doctest::Approx(-5.0).epsilon(1e-12));
    std::ifstream in(path);
    int lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 1 + 2 * 25);
  }

  TEST_CASE("free landscape keeps the mixer period, constrained one does not") {
    OptimizerConfig opt;
    opt.method = Method::AdjointQuasiNewton;
    opt.restarts = 2;
    const ChainSpec spec = make_ring_uniform(8);
    const auto path = scratch("period") / "grid.csv";
    const LandscapeGrid grid{0.0, 1.2, 6, 0.1, 1.4, 6};
    const LandscapeGrid shifted{kPi, kPi + 1.2, 6, 0.1, 1.4, 6};
    const auto base = emit_landscape(spec, Variant::QaoaCd, grid, opt, path);
    REQUIRE(base.fixed.size() == 1);
    const auto moved = landscape_grid(spec, Variant::QaoaCd, shifted, base.fixed);
    CHECK((moved - base.free_grid).cwiseAbs().maxCoeff() <= 1e-10);
    const auto moved_c = landscape_grid(spec, Variant::QaoaCd2p, shifted);
    CHECK((moved_c - base.constrained_grid).cwiseAbs().maxCoeff() > 1e-3);
    CHECK_THROWS_AS(emit_landscape(spec, Variant::Qaoa, LandscapeGrid{0.0, 1.0, 0, 0.0, 1.0, 0}, opt, path),
                    std::invalid_argument);
    CHECK_THROWS_AS(emit_landscape(spec, Variant::QaoaCd2p, grid, opt, path), std::invalid_argument);
  }

  TEST_CASE("validation driver") {
    ValidationOptions none;
    none.trials = 0;
    const auto empty = validate(none);
    CHECK(empty.ok());
    CHECK(empty.energy_checks == 0);

    ValidationOptions small;
    small.n_list = {4, 5};
    small.trials = 4;
    const auto r = validate(small);
    CHECK(r.ok());
    CHECK(r.energy_checks == 2 * 5 * 4);
    CHECK(r.max_energy_error <= kEnergyTolerance);
    CHECK(r.commutator_checks == 2 * 2 * 3);

    small.corrupt_generator = true;
    const auto bad = validate(small);
    CHECK_FALSE(bad.ok());
    CHECK(bad.violations.front().find("commutator cd") != std::string::npos);

    ValidationOptions too_big;
    too_big.n_list = {15};
    CHECK_THROWS_AS(validate(too_big), std::invalid_argument);
  }
}
