#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "cdqaoa/model.hpp"
#include "cdqaoa/optimizer.hpp"

namespace cdqaoa {

inline constexpr const char* kVersion = "1.0.0";

enum class SpecFamily { RingUniform, OpenUniform, OpenRandom };

std::string_view to_string(SpecFamily f) noexcept;
SpecFamily family_from_string(std::string_view name);

struct ExperimentConfig {
  SpecFamily family = SpecFamily::OpenRandom;
  int n_sites = 10;
  /// Must be 1 unless the family is OpenRandom.
  int m_instances = 20;
  std::uint64_t base_seed = 0;
  std::vector<Variant> variants{Variant::Qaoa};
  int p_max = 1;
  /// Per-variant override; otherwise Interp for uniform chains and
  /// MultiStart for random ones.
  std::map<Variant, Strategy> strategies;
  /// Random starts N_0 (MultiStart at every depth, Interp at depth one).
  int n_starts = 20;
  double threshold = 1e-2;
  OptimizerConfig optimizer;
  std::filesystem::path output_dir = "out";
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  int threads = 0;

  Strategy strategy_for(Variant v) const;
};

/// Throws std::invalid_argument when the config is inconsistent.
void validate(const ExperimentConfig& config);
nlohmann::json to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

/// Instance `id` of the family; random couplings use seed base_seed + id.
ChainSpec make_instance(const ExperimentConfig& config, int instance_id);
std::uint64_t instance_seed(const ExperimentConfig& config, int instance_id);

struct RunRecord {
  int instance_id = 0;
  Variant variant = Variant::Qaoa;
  int p = 0;
  int n_p = 0;
  double energy = 0.0;
  double residual = 0.0;
  int n_evals = 0;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
  bool converged = false;
  /// "ok", or "error: <message>" when the sweep failed.
  std::string status = "ok";
  std::vector<double> angles;
};

/// Called after each finished (instance, variant) sweep with the number of
/// finished and total sweeps.
using Progress = std::function<void(int done, int total)>;

/// One record per instance x variant x p, sorted by (instance_id, variant, p)
/// whatever the thread count. Sweeps run as independent tasks; the optimizer
/// seed of instance i is base_seed + i.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const Progress& progress = {});

struct StatsRow {
  Variant variant;
  int p;
  int n_p;
  double mean;
  /// Sample standard deviation (n - 1); 0 for a single record.
  double stddev;
  int count;
};

/// Per (variant, p) residual statistics over instances; failed runs are skipped.
std::vector<StatsRow> ensemble_stats(const std::vector<RunRecord>& records);

/// The records ordered by (variant, n_p, instance_id).
std::vector<RunRecord> reindex_by_parameters(const std::vector<RunRecord>& records);

struct CrossingRow {
  Variant variant;
  /// First p where the mean residual curve is at or below the threshold.
  std::optional<int> mean_curve;
  /// Mean over instances of the per-instance first crossing; instances that
  /// never cross count as p_max + 1.
  double mean_of_instances;
  int instances_crossed;
  int instances;
};

std::vector<CrossingRow> threshold_crossings(const std::vector<RunRecord>& records, double threshold);

/// CSV emitters: header row, fixed columns, 17 significant digits.
void write_records_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(const std::filesystem::path& path);
void write_stats_csv(const std::filesystem::path& path, const std::vector<StatsRow>& rows);
void write_reindexed_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);
void write_crossings_csv(const std::filesystem::path& path, const std::vector<CrossingRow>& rows);
void write_manifest(const std::filesystem::path& path, const ExperimentConfig& config,
                    const nlohmann::json& extra = {});

/// Writes records.csv, stats.csv, reindexed.csv, crossings.csv and
/// manifest.json into config.output_dir.
void emit_experiment(const ExperimentConfig& config, const std::vector<RunRecord>& records);

struct LandscapeOutput {
  Variant free_variant;
  Variant constrained_variant;
  /// Extra angles of the free variant, taken from its depth-one optimum.
  std::vector<double> fixed;
  Eigen::MatrixXd free_grid;
  Eigen::MatrixXd constrained_grid;
};

/// Depth-one landscapes of a free CD variant (extra angles fixed at the
/// optimum found with `optimizer`) and of its constrained counterpart,
/// written as (variant, beta, gamma, cost) rows to `path`.
LandscapeOutput emit_landscape(const ChainSpec& spec, Variant free_variant, const LandscapeGrid& grid,
                               const OptimizerConfig& optimizer, const std::filesystem::path& path);

struct ValidationOptions {
  std::vector<int> n_list{4, 6, 8};
  int trials = 100;
  std::uint64_t seed = 0;
  /// Largest N for the commutator reconstruction checks.
  int max_commutator_n = 8;
  bool check_energies = true;
  /// Test hook: perturbs the CD generator before the checks.
  bool corrupt_generator = false;
};

struct ValidationReport {
  int energy_checks = 0;
  double max_energy_error = 0.0;
  int commutator_checks = 0;
  double max_commutator_error = 0.0;
  /// One line per violation with the inputs needed to replay it.
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

inline constexpr double kEnergyTolerance = 1e-9;
inline constexpr double kCommutatorTolerance = 1e-10;

/// Fermion-vs-dense energies for every variant on uniform rings and random
/// open chains, plus Pauli reconstructions of every generator against
/// symbolic commutators. All n must be at most 14 (12 for QAOA-2CD).
ValidationReport validate(const ValidationOptions& options);

}  // namespace cdqaoa
