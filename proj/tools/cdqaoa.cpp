#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdqaoa/analytics.hpp"
#include "cdqaoa/harness.hpp"
#include "cdqaoa/instance_io.hpp"

using namespace cdqaoa;

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kBudget = 3 };

struct Flags {
  int n = 10;
  std::string family;
  std::vector<std::string> variants;
  int p_max = 1;
  int instances = 1;
  std::uint64_t seed = 0;
  double threshold = 1e-2;
  int starts = 20;
  std::string strategy;
  std::string method = "quasi-newton-adjoint";
  std::string out = "out";
  std::string config;
  int threads = 0;
  bool require_converged = false;
};

void add_experiment_flags(CLI::App* app, Flags& f, bool ensemble) {
  app->add_option("--n", f.n, "number of sites")->capture_default_str();
  app->add_option("--family", f.family, "ring-uniform | open-uniform | open-random");
  app->add_option("--variant", f.variants, "qaoa, qaoa-cd, qaoa-2cd, qaoa-cd-2p, qaoa-2cd-2p (repeatable)");
  app->add_option("--p-max", f.p_max, "deepest circuit")->capture_default_str();
  if (ensemble) app->add_option("--instances", f.instances, "random instances M (default 20)");
  app->add_option("--seed", f.seed, "base seed")->capture_default_str();
  app->add_option("--threshold", f.threshold, "residual threshold for crossings")->capture_default_str();
  app->add_option("--starts", f.starts, "random starts N_0")->capture_default_str();
  app->add_option("--strategy", f.strategy, "interp | multistart (all variants)");
  app->add_option("--method", f.method, "nelder-mead | quasi-newton-fd | quasi-newton-adjoint")
      ->capture_default_str();
  app->add_option("--out", f.out, "output directory")->capture_default_str();
  app->add_option("--config", f.config, "JSON experiment config; its keys override the flags");
  app->add_option("--threads", f.threads, "worker threads (0: all cores)")->capture_default_str();
  app->add_flag("--require-converged", f.require_converged, "exit 3 if any run exhausts its budget");
}

ExperimentConfig build_config(const Flags& f, SpecFamily default_family) {
  ExperimentConfig c;
  c.family = f.family.empty() ? default_family : family_from_string(f.family);
  c.n_sites = f.n;
  c.m_instances = f.instances;
  c.base_seed = f.seed;
  if (!f.variants.empty()) {
    c.variants.clear();
    for (const auto& v : f.variants) c.variants.push_back(variant_from_string(v));
  }
  c.p_max = f.p_max;
  if (!f.strategy.empty()) {
    for (Variant v : c.variants) c.strategies[v] = strategy_from_string(f.strategy);
  }
  c.n_starts = f.starts;
  c.threshold = f.threshold;
  c.optimizer.method = method_from_string(f.method);
  c.output_dir = f.out;
  c.threads = f.threads;
  if (f.config.empty()) {
    validate(c);
    return c;
  }
  std::ifstream in(f.config);
  if (!in) throw std::invalid_argument("cannot read " + f.config);
  nlohmann::json merged = to_json(c);
  merged.merge_patch(nlohmann::json::parse(in));
  return experiment_config_from_json(merged);
}

void print_crossings(const std::vector<RunRecord>& records, double threshold) {
  std::printf("%-12s %10s %14s %8s\n", "variant", "mean-curve", "mean-instance", "crossed");
  for (const CrossingRow& c : threshold_crossings(records, threshold)) {
    const std::string mc = c.mean_curve ? std::to_string(*c.mean_curve) : "-";
    std::printf("%-12s %10s %14.3f %5d/%d\n", std::string(to_string(c.variant)).c_str(), mc.c_str(),
                c.mean_of_instances, c.instances_crossed, c.instances);
  }
}

int run_and_emit(const ExperimentConfig& config, bool require_converged) {
  const auto records = run_experiment(config, [](int done, int total) {
    std::fprintf(stderr, "\r%d/%d sweeps", done, total);
    if (done == total) std::fputc('\n', stderr);
  });
  emit_experiment(config, records);
  int failed = 0;
  int unconverged = 0;
  for (const RunRecord& r : records) {
    if (r.status != "ok") {
      ++failed;
    } else {
      if (config.m_instances == 1) {
        std::printf("%-12s p=%-3d n_p=%-4d E=%-22.15g residual=%.6e\n", std::string(to_string(r.variant)).c_str(),
                    r.p, r.n_p, r.energy, r.residual);
      }
      if (!r.converged) ++unconverged;
    }
  }
  print_crossings(records, config.threshold);
  std::printf("wrote %s\n", config.output_dir.string().c_str());
  if (failed) std::fprintf(stderr, "%d runs failed; see status column\n", failed);
  if (require_converged && unconverged) {
    std::fprintf(stderr, "%d runs exhausted their budget\n", unconverged);
    return kBudget;
  }
  return failed ? kValidation : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterdiabatic QAOA simulator for one-dimensional Ising/MaxCut chains"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Flags f;

  auto* instance = app.add_subcommand("instance", "print a chain instance as JSON");
  instance->add_option("--n", f.n, "number of sites")->capture_default_str();
  instance->add_option("--family", f.family, "ring-uniform | open-uniform | open-random");
  instance->add_option("--seed", f.seed, "coupling seed")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "depth sweep on one instance");
  add_experiment_flags(sweep, f, false);

  auto* ensemble = app.add_subcommand("ensemble", "depth sweeps over a random ensemble");
  add_experiment_flags(ensemble, f, true);

  std::string lvariant = "qaoa-cd";
  int grid_points = 50;
  double lo = 0.0;
  double hi = 1.5707963267948966;
  std::string lout = "landscape.csv";
  auto* landscape = app.add_subcommand("landscape", "depth-one cost grids of a free and a constrained variant");
  landscape->add_option("--n", f.n, "number of sites")->capture_default_str();
  landscape->add_option("--family", f.family, "ring-uniform | open-uniform | open-random");
  landscape->add_option("--seed", f.seed, "coupling and optimizer seed")->capture_default_str();
  landscape->add_option("--variant", lvariant, "free-form variant")->capture_default_str();
  landscape->add_option("--grid", grid_points, "points per axis")->capture_default_str();
  landscape->add_option("--lo", lo, "lower angle")->capture_default_str();
  landscape->add_option("--hi", hi, "upper angle")->capture_default_str();
  landscape->add_option("--starts", f.starts, "random starts for the free optimum")->capture_default_str();
  landscape->add_option("--out", lout, "CSV file")->capture_default_str();

  std::vector<int> vn{4, 6, 8};
  int trials = 100;
  bool corrupt = false;
  auto* validate_cmd = app.add_subcommand("validate", "fermionic simulator against the dense oracle");
  validate_cmd->add_option("--n", vn, "site counts (repeatable)")->capture_default_str();
  validate_cmd->add_option("--trials", trials, "random schedules per (n, variant)")->capture_default_str();
  validate_cmd->add_option("--seed", f.seed, "seed")->capture_default_str();
  validate_cmd->add_flag("--corrupt-generator", corrupt, "perturb the CD generator (negative control)");

  std::string rin;
  auto* report = app.add_subcommand("report", "statistics from stored records");
  report->add_option("--in", rin, "records.csv or a directory holding it")->required();
  report->add_option("--threshold", f.threshold, "residual threshold")->capture_default_str();
  report->add_option("--out", f.out, "output directory (default: next to the records)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*instance) {
      const SpecFamily fam = f.family.empty() ? SpecFamily::RingUniform : family_from_string(f.family);
      ExperimentConfig c;
      c.family = fam;
      c.n_sites = f.n;
      c.base_seed = f.seed;
      std::cout << to_json(make_instance(c, 0)).dump(2) << '\n';
      return kOk;
    }
    if (*sweep) {
      f.instances = 1;
      return run_and_emit(build_config(f, SpecFamily::RingUniform), f.require_converged);
    }
    if (*ensemble) {
      if (ensemble->count("--instances") == 0) f.instances = 20;
      return run_and_emit(build_config(f, SpecFamily::OpenRandom), f.require_converged);
    }
    if (*landscape) {
      ExperimentConfig c;
      c.family = f.family.empty() ? SpecFamily::RingUniform : family_from_string(f.family);
      c.n_sites = f.n;
      c.base_seed = f.seed;
      OptimizerConfig opt;
      opt.method = Method::AdjointQuasiNewton;
      opt.restarts = f.starts;
      opt.seed = f.seed;
      const LandscapeGrid grid{lo, hi, grid_points, lo, hi, grid_points};
      const auto out = emit_landscape(make_instance(c, 0), variant_from_string(lvariant), grid, opt, lout);
      std::printf("%s min %.12g, %s min %.12g; wrote %s\n", std::string(to_string(out.free_variant)).c_str(),
                  out.free_grid.minCoeff(), std::string(to_string(out.constrained_variant)).c_str(),
                  out.constrained_grid.minCoeff(), lout.c_str());
      return kOk;
    }
    if (*validate_cmd) {
      ValidationOptions opt;
      opt.n_list = vn;
      opt.trials = trials;
      opt.seed = f.seed;
      opt.corrupt_generator = corrupt;
      const ValidationReport r = validate(opt);
      std::printf("energy checks %d, max |dE| %.3e\n", r.energy_checks, r.max_energy_error);
      std::printf("commutator checks %d, max element difference %.3e\n", r.commutator_checks,
                  r.max_commutator_error);
      for (const auto& v : r.violations) std::printf("VIOLATION %s\n", v.c_str());
      std::printf("%s\n", r.ok() ? "ok" : "FAILED");
      return r.ok() ? kOk : kValidation;
    }
    if (*report) {
      std::filesystem::path in = rin;
      if (std::filesystem::is_directory(in)) in /= "records.csv";
      const auto records = read_records_csv(in);
      if (records.empty()) throw std::invalid_argument("no records in " + in.string());
      const std::filesystem::path dir = report->count("--out") ? std::filesystem::path(f.out) : in.parent_path();
      write_stats_csv(dir / "stats.csv", ensemble_stats(records));
      write_reindexed_csv(dir / "reindexed.csv", records);
      write_crossings_csv(dir / "crossings.csv", threshold_crossings(records, f.threshold));
      print_crossings(records, f.threshold);
      return kOk;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  }
  return kUsage;
}
