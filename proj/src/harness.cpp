#include "cdqaoa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "cdqaoa/analytics.hpp"
#include "cdqaoa/instance_io.hpp"

namespace cdqaoa {
namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

bool record_ok(const RunRecord& r) { return r.status == "ok"; }

auto record_key(const RunRecord& r) { return std::tuple(r.instance_id, static_cast<int>(r.variant), r.p); }

Variant constrained_of(Variant v) {
  switch (v) {
    case Variant::QaoaCd: return Variant::QaoaCd2p;
    case Variant::Qaoa2Cd: return Variant::Qaoa2Cd2p;
    default: return v;
  }
}

const char* kRecordsHeader =
    "instance_id,variant,p,n_p,energy,residual,n_evals,seed,wall_time_ms,converged,status,angles";

void write_record_rows(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kRecordsHeader << '\n';
  for (const RunRecord& r : records) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << r.instance_id << ',' << to_string(r.variant) << ',' << r.p << ',' << r.n_p << ',' << fmt(r.energy)
        << ',' << fmt(r.residual) << ',' << r.n_evals << ',' << r.seed << ',' << fmt(r.wall_time_ms) << ','
        << (r.converged ? 1 : 0) << ',' << status << ',';
    for (std::size_t i = 0; i < r.angles.size(); ++i) out << (i ? " " : "") << fmt(r.angles[i]);
    out << '\n';
  }
}

}  // namespace

std::string_view to_string(SpecFamily f) noexcept {
  switch (f) {
    case SpecFamily::RingUniform: return "ring-uniform";
    case SpecFamily::OpenUniform: return "open-uniform";
    case SpecFamily::OpenRandom: return "open-random";
  }
  return "?";
}

SpecFamily family_from_string(std::string_view name) {
  for (SpecFamily f : {SpecFamily::RingUniform, SpecFamily::OpenUniform, SpecFamily::OpenRandom}) {
    if (name == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown family: " + std::string(name));
}

Strategy ExperimentConfig::strategy_for(Variant v) const {
  if (auto it = strategies.find(v); it != strategies.end()) return it->second;
  return family == SpecFamily::OpenRandom ? Strategy::MultiStart : Strategy::Interp;
}

void validate(const ExperimentConfig& c) {
  if (c.n_sites < 3) throw std::invalid_argument("n_sites must be at least 3");
  if (c.m_instances < 1) throw std::invalid_argument("m_instances must be at least 1");
  if (c.m_instances != 1 && c.family != SpecFamily::OpenRandom) {
    throw std::invalid_argument("uniform families have a single instance");
  }
  if (c.p_max < 1) throw std::invalid_argument("p_max must be at least 1");
  if (c.variants.empty()) throw std::invalid_argument("no variants selected");
  if (c.n_starts < 1) throw std::invalid_argument("n_starts must be at least 1");
  if (!(c.threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  if (c.threads < 0) throw std::invalid_argument("threads must be non-negative");
  validate(c.optimizer);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json variants = nlohmann::json::array();
  for (Variant v : c.variants) variants.push_back(to_string(v));
  nlohmann::json strategies = nlohmann::json::object();
  for (const auto& [v, s] : c.strategies) strategies[std::string(to_string(v))] = to_string(s);
  nlohmann::json effective = nlohmann::json::object();
  for (Variant v : c.variants) effective[std::string(to_string(v))] = to_string(c.strategy_for(v));
  return {{"family", to_string(c.family)},
          {"n_sites", c.n_sites},
          {"m_instances", c.m_instances},
          {"base_seed", c.base_seed},
          {"variants", variants},
          {"p_max", c.p_max},
          {"strategies", strategies},
          {"effective_strategies", effective},
          {"n_starts", c.n_starts},
          {"threshold", c.threshold},
          {"optimizer", to_json(c.optimizer)},
          {"output_dir", c.output_dir.string()},
          {"threads", c.threads}};
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("family")) c.family = family_from_string(j.at("family").get<std::string>());
  c.n_sites = j.value("n_sites", c.n_sites);
  c.m_instances = j.value("m_instances", c.m_instances);
  c.base_seed = j.value("base_seed", c.base_seed);
  if (j.contains("variants")) {
    c.variants.clear();
    for (const auto& v : j.at("variants")) c.variants.push_back(variant_from_string(v.get<std::string>()));
  }
  c.p_max = j.value("p_max", c.p_max);
  if (j.contains("strategies")) {
    for (const auto& [k, v] : j.at("strategies").items()) {
      c.strategies[variant_from_string(k)] = strategy_from_string(v.get<std::string>());
    }
  }
  c.n_starts = j.value("n_starts", c.n_starts);
  c.threshold = j.value("threshold", c.threshold);
  if (j.contains("optimizer")) c.optimizer = optimizer_config_from_json(j.at("optimizer"));
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  c.threads = j.value("threads", c.threads);
  validate(c);
  return c;
}

std::uint64_t instance_seed(const ExperimentConfig& config, int instance_id) {
  return config.base_seed + static_cast<std::uint64_t>(instance_id);
}

ChainSpec make_instance(const ExperimentConfig& config, int instance_id) {
  switch (config.family) {
    case SpecFamily::RingUniform: return make_ring_uniform(config.n_sites);
    case SpecFamily::OpenUniform: return make_open_uniform(config.n_sites);
    case SpecFamily::OpenRandom: return make_open_random(config.n_sites, instance_seed(config, instance_id));
  }
  throw std::invalid_argument("unknown family");
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const Progress& progress) {
  validate(config);
  struct Task {
    int instance;
    Variant variant;
  };
  std::vector<Task> tasks;
  for (int i = 0; i < config.m_instances; ++i) {
    for (Variant v : config.variants) tasks.push_back({i, v});
  }

  std::vector<RunRecord> records;
  std::mutex mutex;
  std::atomic<std::size_t> next{0};
  int done = 0;

  auto run_task = [&](const Task& t) {
    const std::uint64_t seed = instance_seed(config, t.instance);
    std::vector<RunRecord> local;
    try {
      const ChainSpec spec = make_instance(config, t.instance);
      OptimizerConfig opt = config.optimizer;
      opt.seed = seed;
      opt.restarts = config.n_starts;
      const auto results = sweep_depth(spec, t.variant, config.p_max, config.strategy_for(t.variant), opt);
      for (std::size_t k = 0; k < results.size(); ++k) {
        const OptimizationResult& r = results[k];
        RunRecord rec;
        rec.instance_id = t.instance;
        rec.variant = t.variant;
        rec.p = static_cast<int>(k) + 1;
        rec.n_p = rec.p * params_per_step(t.variant);
        rec.energy = r.best_energy;
        rec.residual = r.residual;
        rec.n_evals = r.n_evals;
        rec.seed = seed;
        rec.wall_time_ms = r.wall_time_ms;
        rec.converged = r.converged;
        rec.angles.assign(r.best_angles.values().begin(), r.best_angles.values().end());
        local.push_back(std::move(rec));
      }
    } catch (const std::exception& e) {
      local.clear();
      for (int p = 1; p <= config.p_max; ++p) {
        RunRecord rec;
        rec.instance_id = t.instance;
        rec.variant = t.variant;
        rec.p = p;
        rec.n_p = p * params_per_step(t.variant);
        rec.energy = rec.residual = std::numeric_limits<double>::quiet_NaN();
        rec.seed = seed;
        rec.status = std::string("error: ") + e.what();
        local.push_back(std::move(rec));
      }
    }
    const std::lock_guard lock(mutex);
    for (RunRecord& r : local) records.push_back(std::move(r));
    ++done;
    if (progress) progress(done, static_cast<int>(tasks.size()));
  };

  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) run_task(tasks[i]);
  };

  int n_threads = config.threads > 0 ? config.threads : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, static_cast<int>(tasks.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  std::sort(records.begin(), records.end(),
            [](const RunRecord& a, const RunRecord& b) { return record_key(a) < record_key(b); });
  return records;
}

std::vector<StatsRow> ensemble_stats(const std::vector<RunRecord>& records) {
  std::map<std::pair<int, int>, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) {
    if (record_ok(r)) groups[{static_cast<int>(r.variant), r.p}].push_back(&r);
  }
  std::vector<StatsRow> out;
  for (const auto& [key, group] : groups) {
    const double n = static_cast<double>(group.size());
    double mean = 0.0;
    for (const RunRecord* r : group) mean += r->residual;
    mean /= n;
    double ss = 0.0;
    for (const RunRecord* r : group) ss += (r->residual - mean) * (r->residual - mean);
    const double sd = group.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    out.push_back({group.front()->variant, key.second, group.front()->n_p, mean, sd,
                   static_cast<int>(group.size())});
  }
  return out;
}

std::vector<RunRecord> reindex_by_parameters(const std::vector<RunRecord>& records) {
  std::vector<RunRecord> out = records;
  std::stable_sort(out.begin(), out.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tuple(static_cast<int>(a.variant), a.n_p, a.instance_id) <
           std::tuple(static_cast<int>(b.variant), b.n_p, b.instance_id);
  });
  return out;
}

std::vector<CrossingRow> threshold_crossings(const std::vector<RunRecord>& records, double threshold) {
  const std::vector<StatsRow> stats = ensemble_stats(records);
  std::map<int, std::map<int, std::vector<double>>> per_instance;  // variant -> instance -> residual by p
  int p_max = 0;
  for (const RunRecord& r : records) {
    if (!record_ok(r)) continue;
    auto& curve = per_instance[static_cast<int>(r.variant)][r.instance_id];
    if (static_cast<int>(curve.size()) < r.p) curve.resize(r.p, std::numeric_limits<double>::infinity());
    curve[r.p - 1] = r.residual;
    p_max = std::max(p_max, r.p);
  }

  std::vector<CrossingRow> out;
  for (const auto& [v, instances] : per_instance) {
    CrossingRow row{static_cast<Variant>(v), std::nullopt, 0.0, 0, static_cast<int>(instances.size())};
    std::vector<double> mean_curve;
    for (const StatsRow& s : stats) {
      if (static_cast<int>(s.variant) != v) continue;
      if (static_cast<int>(mean_curve.size()) < s.p) mean_curve.resize(s.p, std::numeric_limits<double>::infinity());
      mean_curve[s.p - 1] = s.mean;
    }
    row.mean_curve = threshold_crossing(mean_curve, threshold);
    double sum = 0.0;
    for (const auto& [id, curve] : instances) {
      const auto c = threshold_crossing(curve, threshold);
      if (c) ++row.instances_crossed;
      sum += c ? *c : p_max + 1;
    }
    row.mean_of_instances = sum / static_cast<double>(instances.size());
    out.push_back(row);
  }
  return out;
}

void write_records_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
  std::ofstream out = open_out(path);
  write_record_rows(out, records);
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader) {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  std::vector<RunRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 12) throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": bad row");
    RunRecord r;
    r.instance_id = std::stoi(f[0]);
    r.variant = variant_from_string(f[1]);
    r.p = std::stoi(f[2]);
    r.n_p = std::stoi(f[3]);
    r.energy = parse_double(f[4]);
    r.residual = parse_double(f[5]);
    r.n_evals = std::stoi(f[6]);
    r.seed = std::stoull(f[7]);
    r.wall_time_ms = parse_double(f[8]);
    r.converged = f[9] == "1";
    r.status = f[10];
    std::istringstream angles(f[11]);
    for (std::string a; angles >> a;) r.angles.push_back(parse_double(a));
    out.push_back(std::move(r));
  }
  return out;
}

void write_stats_csv(const std::filesystem::path& path, const std::vector<StatsRow>& rows) {
  std::ofstream out = open_out(path);
  out << "variant,p,n_p,mean_residual,std_residual,count,single\n";
  for (const StatsRow& s : rows) {
    out << to_string(s.variant) << ',' << s.p << ',' << s.n_p << ',' << fmt(s.mean) << ',' << fmt(s.stddev) << ','
        << s.count << ',' << (s.count == 1 ? 1 : 0) << '\n';
  }
}

void write_reindexed_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
  std::ofstream out = open_out(path);
  out << "variant,n_p,p,instance_id,residual,energy\n";
  for (const RunRecord& r : reindex_by_parameters(records)) {
    out << to_string(r.variant) << ',' << r.n_p << ',' << r.p << ',' << r.instance_id << ',' << fmt(r.residual)
        << ',' << fmt(r.energy) << '\n';
  }
}

void write_crossings_csv(const std::filesystem::path& path, const std::vector<CrossingRow>& rows) {
  std::ofstream out = open_out(path);
  out << "variant,mean_curve_crossing,mean_instance_crossing,instances_crossed,instances\n";
  for (const CrossingRow& c : rows) {
    out << to_string(c.variant) << ',' << (c.mean_curve ? std::to_string(*c.mean_curve) : "") << ','
        << fmt(c.mean_of_instances) << ',' << c.instances_crossed << ',' << c.instances << '\n';
  }
}

void write_manifest(const std::filesystem::path& path, const ExperimentConfig& config,
                    const nlohmann::json& extra) {
  nlohmann::json j = {{"version", kVersion}, {"config", to_json(config)}};
  nlohmann::json instances = nlohmann::json::array();
  for (int i = 0; i < config.m_instances; ++i) instances.push_back(to_json(make_instance(config, i)));
  j["instances"] = instances;
  if (!extra.is_null()) j["extra"] = extra;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

void emit_experiment(const ExperimentConfig& config, const std::vector<RunRecord>& records) {
  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir);
  write_records_csv(dir / "records.csv", records);
  write_stats_csv(dir / "stats.csv", ensemble_stats(records));
  write_reindexed_csv(dir / "reindexed.csv", records);
  write_crossings_csv(dir / "crossings.csv", threshold_crossings(records, config.threshold));
  write_manifest(dir / "manifest.json", config);
}

LandscapeOutput emit_landscape(const ChainSpec& spec, Variant free_variant, const LandscapeGrid& grid,
                               const OptimizerConfig& optimizer, const std::filesystem::path& path) {
  if (is_constrained(free_variant)) throw std::invalid_argument("emit_landscape expects a free-form variant");
  if (grid.n_beta < 1 || grid.n_gamma < 1) throw std::invalid_argument("empty landscape grid");
  LandscapeOutput out{free_variant, constrained_of(free_variant), {}, {}, {}};
  if (free_variant != Variant::Qaoa) {
    const auto best = sweep_depth(spec, free_variant, 1, Strategy::MultiStart, optimizer).front();
    const auto row = best.best_angles.row(0);
    out.fixed.assign(row.begin() + 2, row.end());
  }
  out.free_grid = landscape_grid(spec, free_variant, grid, out.fixed);
  out.constrained_grid = landscape_grid(spec, out.constrained_variant, grid);

  std::ofstream csv = open_out(path);
  csv << "variant,beta,gamma,cost\n";
  for (const auto& [v, m] : {std::pair{out.free_variant, &out.free_grid},
                             std::pair{out.constrained_variant, &out.constrained_grid}}) {
    for (int i = 0; i < grid.n_beta; ++i) {
      for (int j = 0; j < grid.n_gamma; ++j) {
        csv << to_string(v) << ',' << fmt(grid.beta(i)) << ',' << fmt(grid.gamma(j)) << ',' << fmt((*m)(i, j))
            << '\n';
      }
    }
  }
  return out;
}

}  // namespace cdqaoa
