#include "cdqaoa/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cdqaoa/analytics.hpp"
#include "cdqaoa/local_search.hpp"
#include "cdqaoa/rng.hpp"

namespace cdqaoa {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::NelderMead: return "nelder-mead";
    case Method::NumericGradientQuasiNewton: return "quasi-newton-fd";
    case Method::AdjointQuasiNewton: return "quasi-newton-adjoint";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  for (Method m : {Method::NelderMead, Method::NumericGradientQuasiNewton, Method::AdjointQuasiNewton}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown optimizer method: " + std::string(name));
}

std::string_view to_string(Strategy s) noexcept {
  return s == Strategy::Interp ? "interp" : "multistart";
}

Strategy strategy_from_string(std::string_view name) {
  if (name == "interp") return Strategy::Interp;
  if (name == "multistart") return Strategy::MultiStart;
  throw std::invalid_argument("unknown strategy: " + std::string(name));
}

void validate(const OptimizerConfig& c) {
  if (!(c.f_tol > 0.0) || !(c.x_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
  if (c.max_evals <= 0) throw std::invalid_argument("max_evals must be positive");
  if (c.restarts < 0) throw std::invalid_argument("restarts must be non-negative");
  if (!(c.init_box >= 0.0)) throw std::invalid_argument("init_box must be non-negative");
}

nlohmann::json to_json(const OptimizerConfig& c) {
  return {{"method", to_string(c.method)}, {"f_tol", c.f_tol},     {"x_tol", c.x_tol},
          {"max_evals", c.max_evals},      {"restarts", c.restarts}, {"init_box", c.init_box},
          {"seed", c.seed}};
}

OptimizerConfig optimizer_config_from_json(const nlohmann::json& j) {
  OptimizerConfig c;
  if (j.contains("method")) c.method = method_from_string(j.at("method").get<std::string>());
  c.f_tol = j.value("f_tol", c.f_tol);
  c.x_tol = j.value("x_tol", c.x_tol);
  c.max_evals = j.value("max_evals", c.max_evals);
  c.restarts = j.value("restarts", c.restarts);
  c.init_box = j.value("init_box", c.init_box);
  c.seed = j.value("seed", c.seed);
  validate(c);
  return c;
}

AngleSchedule random_schedule(Variant variant, int p, const OptimizerConfig& config, int start) {
  AngleSchedule s(variant, p);
  const CounterRng rng(config.seed, static_cast<std::uint64_t>(start));
  const int w = s.width();
  for (int k = 0; k < p; ++k) {
    for (int f = 0; f < w; ++f) {
      const double u = static_cast<double>(rng.at(5 * static_cast<std::uint64_t>(k) + f) >> 11) * 0x1.0p-53;
      s.values()[k * w + f] = config.init_box * (2.0 * u - 1.0);
    }
  }
  return s;
}

OptimizationResult minimize(const CircuitEvaluator& evaluator, const AngleSchedule& init,
                            const OptimizerConfig& config, const SpectrumBounds& bounds) {
  validate(config);
  if (init.variant() != evaluator.variant()) throw std::invalid_argument("schedule variant mismatch");

  LocalSearchOptions opt;
  opt.f_tol = config.f_tol;
  opt.x_tol = config.x_tol;
  opt.max_evals = config.max_evals;
  std::vector<double> x0(init.values().begin(), init.values().end());

  LocalSearchResult ls;
  switch (config.method) {
    case Method::NelderMead:
      ls = nelder_mead([&](std::span<const double> x) { return evaluator.energy(x); }, std::move(x0), opt);
      break;
    case Method::NumericGradientQuasiNewton:
      opt.evals_per_call = 2 * static_cast<int>(x0.size()) + 1;
      ls = bfgs(central_difference([&](std::span<const double> x) { return evaluator.energy(x); }),
                std::move(x0), opt);
      break;
    case Method::AdjointQuasiNewton:
      ls = bfgs([&](std::span<const double> x, std::span<double> g) { return evaluator.energy_and_gradient(x, g); },
                std::move(x0), opt);
      break;
  }

  OptimizationResult r{AngleSchedule(init.variant(), init.steps(), std::move(ls.x)), ls.f, 0.0, ls.n_evals, 0,
                       ls.converged};
  r.residual = residual_energy(r.best_energy, bounds);
  return r;
}

OptimizationResult minimize(const ChainSpec& spec, Variant variant, int p, const AngleSchedule& init,
                            const OptimizerConfig& config) {
  if (init.variant() != variant || init.steps() != p) {
    throw std::invalid_argument("initial schedule does not match variant and depth");
  }
  const CircuitEvaluator evaluator(spec, variant);
  return minimize(evaluator, init, config, spectrum_bounds(spec));
}

OptimizationResult multistart(const CircuitEvaluator& evaluator, int p, const OptimizerConfig& config,
                              const SpectrumBounds& bounds, std::span<const AngleSchedule> extra) {
  if (config.restarts == 0 && extra.empty()) throw std::invalid_argument("no starting points");
  std::optional<OptimizationResult> best;
  int total_evals = 0;
  auto consider = [&](const AngleSchedule& init, int index) {
    OptimizationResult r = minimize(evaluator, init, config, bounds);
    r.start_index = index;
    total_evals += r.n_evals;
    if (!best || r.best_energy < best->best_energy) best = std::move(r);
  };
  for (int s = 0; s < config.restarts; ++s) consider(random_schedule(evaluator.variant(), p, config, s), s);
  for (std::size_t i = 0; i < extra.size(); ++i) {
    if (extra[i].steps() != p) throw std::invalid_argument("extra start has the wrong depth");
    consider(extra[i], config.restarts + static_cast<int>(i));
  }
  best->n_evals = total_evals;
  return *best;
}

AngleSchedule interp_extend(const AngleSchedule& prev) {
  const int p = prev.steps();
  const int w = prev.width();
  AngleSchedule next(prev.variant(), p + 1);
  auto at = [&](int i, int f) { return i >= 1 && i <= p ? prev.values()[(i - 1) * w + f] : 0.0; };
  for (int i = 1; i <= p + 1; ++i) {
    for (int f = 0; f < w; ++f) {
      next.values()[(i - 1) * w + f] =
          (static_cast<double>(i - 1) / p) * at(i - 1, f) + (static_cast<double>(p - i + 1) / p) * at(i, f);
    }
  }
  return next;
}

namespace {

AngleSchedule pad_zero_step(const AngleSchedule& s) {
  std::vector<double> v(s.values().begin(), s.values().end());
  v.resize(v.size() + s.width(), 0.0);
  return AngleSchedule(s.variant(), s.steps() + 1, std::move(v));
}

}  // namespace

std::vector<OptimizationResult> sweep_depth(const ChainSpec& spec, Variant variant, int p_max,
                                            Strategy strategy, const OptimizerConfig& config,
                                            const ExtraStarts& extra) {
  if (p_max < 1) throw std::invalid_argument("p_max must be at least 1");
  validate(config);
  const CircuitEvaluator evaluator(spec, variant);
  const SpectrumBounds bounds = spectrum_bounds(spec);

  std::vector<OptimizationResult> out;
  for (int p = 1; p <= p_max; ++p) {
    std::vector<AngleSchedule> starts;
    OptimizerConfig cfg = config;
    if (p > 1 && strategy == Strategy::Interp) {
      cfg.restarts = 0;
      starts.push_back(interp_extend(out.back().best_angles));
      starts.push_back(random_schedule(variant, p, config, 0));
      starts.push_back(pad_zero_step(out.back().best_angles));
    } else if (p > 1) {
      starts.push_back(pad_zero_step(out.back().best_angles));
    }
    if (extra) {
      for (AngleSchedule& s : extra(p)) starts.push_back(std::move(s));
    }
    const auto t0 = std::chrono::steady_clock::now();
    out.push_back(multistart(evaluator, p, cfg, bounds, starts));
    out.back().wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  return out;
}

double LandscapeGrid::beta(int i) const {
  return n_beta == 1 ? beta_lo : beta_lo + (beta_hi - beta_lo) * i / (n_beta - 1);
}

double LandscapeGrid::gamma(int j) const {
  return n_gamma == 1 ? gamma_lo : gamma_lo + (gamma_hi - gamma_lo) * j / (n_gamma - 1);
}

Eigen::MatrixXd landscape_grid(const ChainSpec& spec, Variant variant, const LandscapeGrid& grid,
                               std::span<const double> fixed) {
  if (grid.n_beta < 1 || grid.n_gamma < 1) throw std::invalid_argument("empty landscape grid");
  const int w = params_per_step(variant);
  const std::size_t n_extra = is_constrained(variant) ? 0 : static_cast<std::size_t>(w - 2);
  if (fixed.size() != n_extra) {
    throw std::invalid_argument("variant " + std::string(to_string(variant)) + " needs " +
                                std::to_string(n_extra) + " fixed angles");
  }
  const CircuitEvaluator evaluator(spec, variant);
  Eigen::MatrixXd out(grid.n_beta, grid.n_gamma);
  std::vector<double> angles(w);
  for (std::size_t e = 0; e < n_extra; ++e) angles[2 + e] = fixed[e];
  for (int i = 0; i < grid.n_beta; ++i) {
    for (int j = 0; j < grid.n_gamma; ++j) {
      angles[0] = grid.gamma(j);
      angles[1] = grid.beta(i);
      out(i, j) = evaluator.energy(angles);
    }
  }
  return out;
}

}  // namespace cdqaoa
