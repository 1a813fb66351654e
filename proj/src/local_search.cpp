#include "cdqaoa/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace cdqaoa {
namespace {

using Vector = Eigen::VectorXd;

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

double scale(double f) { return std::max(1.0, std::abs(f)); }

}  // namespace

LocalSearchResult nelder_mead(const Objective& f, std::vector<double> x0,
                              const LocalSearchOptions& opt) {
  const int n = static_cast<int>(x0.size());
  if (n == 0) throw std::invalid_argument("empty parameter vector");
  if (opt.max_evals < 1) throw std::invalid_argument("evaluation budget must be positive");

  LocalSearchResult res;
  auto eval = [&](const Vector& x) {
    ++res.n_evals;
    return f(view(x));
  };

  std::vector<Vector> simplex(n + 1, Eigen::Map<const Vector>(x0.data(), n));
  std::vector<double> values(n + 1);
  values[0] = eval(simplex[0]);
  for (int i = 0; i < n && res.n_evals < opt.max_evals; ++i) {
    simplex[i + 1](i) += opt.initial_step;
    values[i + 1] = eval(simplex[i + 1]);
  }
  if (res.n_evals < n + 1) {
    // budget ran out while building the simplex
    const int filled = res.n_evals;
    const int best = static_cast<int>(std::min_element(values.begin(), values.begin() + filled) - values.begin());
    res.x.assign(simplex[best].data(), simplex[best].data() + n);
    res.f = values[best];
    return res;
  }

  const double dn = n;
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dn;
  const double contract = 0.75 - 1.0 / (2.0 * dn);
  const double shrink = 1.0 - 1.0 / dn;

  std::vector<int> order(n + 1);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[n - 1];

    double f_spread = 0.0;
    double x_spread = 0.0;
    for (int i = 0; i <= n; ++i) {
      f_spread = std::max(f_spread, std::abs(values[i] - values[best]));
      x_spread = std::max(x_spread, (simplex[i] - simplex[best]).cwiseAbs().maxCoeff());
    }
    if (f_spread <= opt.f_tol * scale(values[best]) && x_spread <= opt.x_tol) {
      res.converged = true;
      break;
    }
    if (res.n_evals >= opt.max_evals) break;

    Vector centroid = Vector::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[order[i]];
    centroid /= dn;

    const Vector xr = centroid + reflect * (centroid - simplex[worst]);
    const double fr = eval(xr);
    if (fr < values[best]) {
      const Vector xe = centroid + expand * (xr - centroid);
      const double fe = res.n_evals < opt.max_evals ? eval(xe) : fr;
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    if (res.n_evals >= opt.max_evals) break;
    const bool outside = fr < values[worst];
    const Vector xc = outside ? Vector(centroid + contract * (xr - centroid))
                              : Vector(centroid - contract * (centroid - simplex[worst]));
    const double fc = eval(xc);
    if (fc <= (outside ? fr : values[worst])) {
      simplex[worst] = xc;
      values[worst] = fc;
      continue;
    }
    for (int i = 0; i <= n && res.n_evals < opt.max_evals; ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + shrink * (simplex[i] - simplex[best]);
      values[i] = eval(simplex[i]);
    }
  }

  const int best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
  res.x.assign(simplex[best].data(), simplex[best].data() + n);
  res.f = values[best];
  return res;
}

namespace {

struct Point {
  Vector x;
  double f = 0.0;
  Vector g;
};

// Strong-Wolfe line search (Nocedal & Wright, Algorithms 3.5 and 3.6).
// Returns false when no acceptable step is found; `out` then holds the best
// point seen if it improves on `start`.
class LineSearch {
 public:
  LineSearch(const ObjectiveWithGradient& f, const LocalSearchOptions& opt, int& n_evals)
      : f_(f), opt_(opt), n_evals_(n_evals) {}

  bool run(const Point& start, const Vector& dir, double step0, Point& out) {
    start_ = &start;
    dir_ = &dir;
    dphi0_ = start.g.dot(dir);
    best_ = start;
    if (dphi0_ >= 0.0) return false;

    double a_prev = 0.0;
    double f_prev = start.f;
    double d_prev = dphi0_;
    double a = step0;
    for (int i = 0; i < kMaxBracket; ++i) {
      if (!budget()) break;
      Point p = probe(a);
      const double d = p.g.dot(dir);
      if (p.f > start.f + kC1 * a * dphi0_ || (i > 0 && p.f >= f_prev)) {
        return zoom(a_prev, f_prev, d_prev, a, p.f, d, out);
      }
      if (std::abs(d) <= -kC2 * dphi0_) {
        out = std::move(p);
        return true;
      }
      if (d >= 0.0) return zoom(a, p.f, d, a_prev, f_prev, d_prev, out);
      a_prev = a;
      f_prev = p.f;
      d_prev = d;
      a *= 2.0;
    }
    out = best_;
    return false;
  }

 private:
  static constexpr double kC1 = 1e-4;
  static constexpr double kC2 = 0.9;
  static constexpr int kMaxBracket = 30;
  static constexpr int kMaxZoom = 40;

  bool budget() const { return n_evals_ + opt_.evals_per_call <= opt_.max_evals; }

  Point probe(double a) {
    Point p;
    p.x = start_->x + a * *dir_;
    p.g.resize(p.x.size());
    p.f = f_(view(p.x), {p.g.data(), static_cast<std::size_t>(p.g.size())});
    n_evals_ += opt_.evals_per_call;
    if (p.f < best_.f) best_ = p;
    return p;
  }

  bool zoom(double lo, double f_lo, double d_lo, double hi, double f_hi, double d_hi, Point& out) {
    for (int i = 0; i < kMaxZoom && budget(); ++i) {
      double a = cubic_min(lo, f_lo, d_lo, hi, f_hi, d_hi);
      const double width = std::abs(hi - lo);
      if (!std::isfinite(a) || std::abs(a - lo) < 0.1 * width || std::abs(a - hi) < 0.1 * width) {
        a = 0.5 * (lo + hi);
      }
      if (width < 1e-16 * std::max(1.0, std::abs(lo))) break;
      Point p = probe(a);
      const double d = p.g.dot(*dir_);
      if (p.f > start_->f + kC1 * a * dphi0_ || p.f >= f_lo) {
        hi = a;
        f_hi = p.f;
        d_hi = d;
      } else {
        if (std::abs(d) <= -kC2 * dphi0_) {
          out = std::move(p);
          return true;
        }
        if (d * (hi - lo) >= 0.0) {
          hi = lo;
          f_hi = f_lo;
          d_hi = d_lo;
        }
        lo = a;
        f_lo = p.f;
        d_lo = d;
      }
    }
    out = best_;
    return false;
  }

  static double cubic_min(double a, double fa, double da, double b, double fb, double db) {
    const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - da * db;
    if (disc < 0.0) return std::nan("");
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    return b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
  }

  const ObjectiveWithGradient& f_;
  const LocalSearchOptions& opt_;
  int& n_evals_;
  const Point* start_ = nullptr;
  const Vector* dir_ = nullptr;
  double dphi0_ = 0.0;
  Point best_;
};

}  // namespace

LocalSearchResult bfgs(const ObjectiveWithGradient& f, std::vector<double> x0,
                       const LocalSearchOptions& opt) {
  const int n = static_cast<int>(x0.size());
  if (n == 0) throw std::invalid_argument("empty parameter vector");
  if (opt.max_evals < 1) throw std::invalid_argument("evaluation budget must be positive");

  LocalSearchResult res;
  Point cur;
  cur.x = Eigen::Map<const Vector>(x0.data(), n);
  cur.g.resize(n);
  cur.f = f(view(cur.x), {cur.g.data(), static_cast<std::size_t>(n)});
  res.n_evals += opt.evals_per_call;

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  bool reset_once = false;
  int flat_steps = 0;
  LineSearch search(f, opt, res.n_evals);

  while (true) {
    if (cur.g.cwiseAbs().maxCoeff() <= opt.g_tol) {
      res.converged = true;
      break;
    }
    if (res.n_evals + opt.evals_per_call > opt.max_evals) break;

    Vector dir = -h * cur.g;
    if (dir.dot(cur.g) >= 0.0) {
      h.setIdentity();
      dir = -cur.g;
    }
    const double step0 = scaled ? 1.0 : std::min(1.0, 1.0 / cur.g.cwiseAbs().maxCoeff());
    Point next;
    const bool ok = search.run(cur, dir, step0, next);
    if (!ok) {
      if (next.f < cur.f) {
        cur = std::move(next);
        continue;
      }
      if (reset_once) break;
      // retry once along steepest descent with a fresh curvature model
      reset_once = true;
      h.setIdentity();
      scaled = false;
      continue;
    }
    reset_once = false;

    const Vector s = next.x - cur.x;
    const Vector y = next.g - cur.g;
    const double df = cur.f - next.f;
    const double f_next = next.f;
    cur = std::move(next);

    if (s.cwiseAbs().maxCoeff() <= opt.x_tol) {
      res.converged = true;
      break;
    }
    flat_steps = std::abs(df) <= opt.f_tol * scale(f_next) ? flat_steps + 1 : 0;
    if (flat_steps >= 2) {
      res.converged = true;
      break;
    }

    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        h *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Vector hy = h * y;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      h += (rho * rho * y.dot(hy) + rho) * s * s.transpose() - rho * (hy * s.transpose() + s * hy.transpose());
    }
  }
  res.x.assign(cur.x.data(), cur.x.data() + n);
  res.f = cur.f;
  return res;
}

ObjectiveWithGradient central_difference(Objective f, double step) {
  return [f = std::move(f), step](std::span<const double> x, std::span<double> g) {
    std::vector<double> probe(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
      probe[i] = x[i] + step;
      const double up = f(probe);
      probe[i] = x[i] - step;
      const double down = f(probe);
      probe[i] = x[i];
      g[i] = (up - down) / (2.0 * step);
    }
    return f(x);
  };
}

}  // namespace cdqaoa
