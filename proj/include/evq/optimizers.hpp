#pragma once

// Classical outer loop: lattice search, Nelder-Mead, finite-difference BFGS,
// differential evolution and the layer-wise Egg procedure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "evq/error.hpp"
#include "evq/params.hpp"
#include "evq/rng.hpp"

namespace evq {

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box uniform(std::size_t n, double lo, double hi) { return {std::vector<double>(n, lo), std::vector<double>(n, hi)}; }

  std::size_t size() const noexcept { return lower.size(); }

  void validate() const {
    if (lower.size() != upper.size()) throw DomainError("box bounds have different lengths");
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (!(lower[i] <= upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i]))
        throw DomainError("box bounds must be finite with lower <= upper");
  }

  bool contains(std::span<const double> x) const {
    if (x.size() != size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
    return true;
  }

  std::vector<double> clamp(std::span<const double> x) const {
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::clamp(y[i], lower[i], upper[i]);
    return y;
  }

  double width(std::size_t i) const { return upper[i] - lower[i]; }
};

/// Box over flat (gamma_1..gamma_p, beta_1..beta_p) from a (gamma, beta) layer box.
inline Box flat_params_box(const Box& layer, int p) {
  if (layer.size() != 2) throw DomainError("layer box must be two-dimensional");
  const auto n = static_cast<std::size_t>(p);
  Box b{std::vector<double>(n, layer.lower[0]), std::vector<double>(n, layer.upper[0])};
  b.lower.insert(b.lower.end(), n, layer.lower[1]);
  b.upper.insert(b.upper.end(), n, layer.upper[1]);
  return b;
}

/// Counted, box-constrained objective. Evaluation must be thread-safe.
class Objective {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  Objective(Fn fn, Box bounds) : fn_(std::move(fn)), box_(std::move(bounds)) {
    box_.validate();
    if (box_.size() == 0) throw DomainError("objective arity must be at least 1");
  }
  Objective(const Objective&) = delete;
  Objective& operator=(const Objective&) = delete;

  std::size_t arity() const noexcept { return box_.size(); }
  const Box& bounds() const noexcept { return box_; }
  std::size_t evals() const noexcept { return count_.load(); }

  double operator()(std::span<const double> x) const {
    if (x.size() != arity()) throw DomainError("objective called with wrong arity");
    count_.fetch_add(1);
    return fn_(x);
  }

 private:
  Fn fn_;
  Box box_;
  mutable std::atomic<std::size_t> count_{0};
};

struct TracePoint {
  std::size_t evals = 0;
  double best_f = 0.0;
};

struct OptimizerReport {
  std::vector<double> best_x;
  double best_f = std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
  std::vector<TracePoint> trajectory;
  bool converged = false;
  std::string reason;
};

namespace detail {

// Tracks the incumbent so best_f is always a value actually returned by eval.
struct Incumbent {
  const Objective& obj;
  std::size_t start_evals;
  OptimizerReport report;

  explicit Incumbent(const Objective& o) : obj(o), start_evals(o.evals()) {}

  std::size_t used() const { return obj.evals() - start_evals; }

  /// `at` is the evaluation index of f; defaults to the latest one.
  void offer(std::span<const double> x, double f, std::size_t at = 0) {
    if (f < report.best_f || report.best_x.empty()) {
      report.best_f = f;
      report.best_x.assign(x.begin(), x.end());
    }
    report.trajectory.push_back({at ? at : used(), report.best_f});
  }

  double eval(std::span<const double> x) {
    const double f = obj(x);
    offer(x, f);
    return f;
  }

  OptimizerReport finish(bool converged, std::string reason) {
    report.evals = used();
    report.converged = converged;
    report.reason = std::move(reason);
    return std::move(report);
  }
};

inline std::vector<double> evaluate_batch(const Objective& obj, const std::vector<std::vector<double>>& points,
                                          unsigned workers) {
  std::vector<double> out(points.size());
  const std::size_t n = points.size();
  const unsigned w = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = obj(points[i]);
    return out;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(w);
  for (unsigned t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) out[i] = obj(points[i]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace detail

inline constexpr std::size_t kGridMaxArity = 3;

/// Inclusive lattice of `resolution` points per axis.
inline OptimizerReport grid_search(const Objective& obj, int resolution) {
  if (obj.arity() > kGridMaxArity) throw CapError("grid search supports at most 3 dimensions");
  if (resolution < 1) throw DomainError("grid resolution must be at least 1");
  const auto& box = obj.bounds();
  const std::size_t d = obj.arity();
  auto coord = [&](std::size_t axis, int j) {
    if (resolution == 1) return 0.5 * (box.lower[axis] + box.upper[axis]);
    if (j == resolution - 1) return box.upper[axis];
    return box.lower[axis] + box.width(axis) * static_cast<double>(j) / static_cast<double>(resolution - 1);
  };
  detail::Incumbent inc(obj);
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  for (;;) {
    for (std::size_t a = 0; a < d; ++a) x[a] = coord(a, idx[a]);
    inc.eval(x);
    std::size_t a = 0;
    while (a < d && ++idx[a] == resolution) idx[a++] = 0;
    if (a == d) break;
  }
  return inc.finish(true, "lattice exhausted");
}

struct NelderMeadOptions {
  std::size_t max_evals = 2000;
  double xtol = 1e-10;
  /// Initial edge length as a fraction of each box width.
  double initial_step = 0.05;
};

inline OptimizerReport nelder_mead(const Objective& obj, std::span<const double> x0, const NelderMeadOptions& opts = {}) {
  const std::size_t n = obj.arity();
  if (x0.size() != n) throw DomainError("x0 has wrong dimension");
  for (double v : x0)
    if (!std::isfinite(v)) throw DomainError("x0 must be finite");
  const auto& box = obj.bounds();
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  detail::Incumbent inc(obj);
  auto budget_left = [&] { return inc.used() < opts.max_evals; };

  std::vector<std::vector<double>> simplex;
  std::vector<double> fs;
  simplex.push_back(box.clamp(x0));
  for (std::size_t i = 0; i < n; ++i) {
    auto v = simplex[0];
    double step = opts.initial_step * box.width(i);
    if (step == 0.0) step = opts.initial_step;
    v[i] = v[i] + step <= box.upper[i] ? v[i] + step : v[i] - step;
    simplex.push_back(box.clamp(v));
  }
  for (const auto& v : simplex) {
    if (!budget_left()) return inc.finish(false, "evaluation budget exhausted");
    fs.push_back(inc.eval(v));
  }

  std::vector<std::size_t> order(n + 1);
  auto point = [&](const std::vector<double>& c, const std::vector<double>& worst, double t) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = c[i] + t * (worst[i] - c[i]);
    return box.clamp(p);
  };

  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const auto& best = simplex[order[0]];
    double diam = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
      for (std::size_t i = 0; i < n; ++i) diam = std::max(diam, std::abs(simplex[order[k]][i] - best[i]));
    if (diam < opts.xtol) return inc.finish(true, "simplex diameter below tolerance");
    if (!budget_left()) return inc.finish(false, "evaluation budget exhausted");

    std::vector<double> c(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) c[i] += simplex[order[k]][i] / static_cast<double>(n);
    const std::size_t w = order[n];
    const double f_best = fs[order[0]];
    const double f_second = fs[order[n - 1]];
    const double f_worst = fs[w];

    auto xr = point(c, simplex[w], -kReflect);
    const double fr = inc.eval(xr);
    if (fr < f_best) {
      if (!budget_left()) {
        simplex[w] = xr, fs[w] = fr;
        continue;
      }
      auto xe = point(c, simplex[w], -kReflect * kExpand);
      const double fe = inc.eval(xe);
      if (fe < fr) simplex[w] = xe, fs[w] = fe;
      else simplex[w] = xr, fs[w] = fr;
      continue;
    }
    if (fr < f_second) {
      simplex[w] = xr, fs[w] = fr;
      continue;
    }
    if (!budget_left()) continue;
    bool shrink = false;
    if (fr < f_worst) {
      auto xc = point(c, simplex[w], -kReflect * kContract);
      const double fc = inc.eval(xc);
      if (fc <= fr) simplex[w] = xc, fs[w] = fc;
      else shrink = true;
    } else {
      auto xcc = point(c, simplex[w], kContract);
      const double fcc = inc.eval(xcc);
      if (fcc < f_worst) simplex[w] = xcc, fs[w] = fcc;
      else shrink = true;
    }
    if (shrink) {
      const auto b = simplex[order[0]];
      for (std::size_t k = 1; k <= n; ++k) {
        if (!budget_left()) break;
        auto& v = simplex[order[k]];
        for (std::size_t i = 0; i < n; ++i) v[i] = b[i] + kShrink * (v[i] - b[i]);
        fs[order[k]] = inc.eval(v);
      }
    }
  }
}

/// Central differences with h_i = rel_step * (|x_i| + 1). Near a bound the
/// stencil is shifted inward so both points stay in the box.
inline std::vector<double> fd_gradient(const Objective& obj, std::span<const double> x, double rel_step = 1e-5) {
  const auto& box = obj.bounds();
  std::vector<double> g(x.size());
  std::vector<double> p(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = rel_step * (std::abs(x[i]) + 1.0);
    double center = x[i];
    if (box.width(i) >= 2.0 * h) center = std::clamp(center, box.lower[i] + h, box.upper[i] - h);
    p[i] = center + h;
    const double fp = obj(p);
    p[i] = center - h;
    const double fm = obj(p);
    p[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

struct BfgsOptions {
  std::size_t max_iter = 200;
  std::size_t max_evals = 4000;
  double gtol = 1e-8;
  double ftol = 1e-15;
  double rel_step = 1e-5;
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_line_search = 30;
};

inline OptimizerReport bfgs_fd(const Objective& obj, std::span<const double> x0, const BfgsOptions& opts = {}) {
  const std::size_t n = obj.arity();
  if (x0.size() != n) throw DomainError("x0 has wrong dimension");
  for (double v : x0)
    if (!std::isfinite(v)) throw DomainError("x0 must be finite");
  const auto& box = obj.bounds();
  detail::Incumbent inc(obj);
  auto grad = [&](std::span<const double> x) {
    auto g = fd_gradient(obj, x, opts.rel_step);
    inc.report.trajectory.push_back({inc.used(), inc.report.best_f});
    return g;
  };
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  auto norm_inf = [](const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  };

  std::vector<double> x = box.clamp(x0);
  double f = inc.eval(x);
  std::vector<double> g = grad(x);
  std::vector<double> H(n * n, 0.0);
  auto reset_h = [&] {
    std::fill(H.begin(), H.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
  };
  reset_h();
  bool first_step = true;

  for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
    if (norm_inf(g) < opts.gtol) return inc.finish(true, "gradient below tolerance");
    if (inc.used() + 2 * n + 1 > opts.max_evals) return inc.finish(false, "evaluation budget exhausted");

    std::vector<double> d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i] -= H[i * n + j] * g[j];
    double dphi0 = dot(g, d);
    if (!(dphi0 < 0.0)) {
      reset_h();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      dphi0 = dot(g, d);
    }

    auto at = [&](double a) {
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * d[i];
      return box.clamp(y);
    };

    // Strong Wolfe line search (bracketing then zoom).
    struct Trial {
      double a;
      double f;
      double dphi;
      std::vector<double> x;
      std::vector<double> g;
    };
    double a_init = first_step ? std::min(1.0, 1.0 / std::max(norm_inf(g), 1e-12)) : 1.0;
    Trial lo{0.0, f, dphi0, x, g};
    bool found = false;
    Trial acc;
    int trials = 0;
    auto eval_point = [&](double a) {
      Trial t{a, 0.0, 0.0, at(a), {}};
      t.f = inc.eval(t.x);
      ++trials;
      return t;
    };
    auto with_grad = [&](Trial& t) {
      t.g = grad(t.x);
      t.dphi = dot(t.g, d);
    };
    auto zoom = [&](Trial a_lo, Trial a_hi) {
      while (trials < opts.max_line_search && inc.used() + 2 * n + 1 <= opts.max_evals) {
        const double span_ = a_hi.a - a_lo.a;
        double a = a_lo.a + 0.5 * span_;
        // Quadratic interpolation from f(lo), f'(lo), f(hi), safeguarded.
        const double denom = 2.0 * (a_hi.f - a_lo.f - a_lo.dphi * span_);
        if (denom > 0.0) {
          const double q = a_lo.a - a_lo.dphi * span_ * span_ / denom;
          const double lo_b = std::min(a_lo.a, a_hi.a) + 0.1 * std::abs(span_);
          const double hi_b = std::max(a_lo.a, a_hi.a) - 0.1 * std::abs(span_);
          if (q > lo_b && q < hi_b) a = q;
        }
        Trial t = eval_point(a);
        if (t.f > f + opts.c1 * a * dphi0 || t.f >= a_lo.f) {
          a_hi = std::move(t);
          continue;
        }
        with_grad(t);
        if (std::abs(t.dphi) <= -opts.c2 * dphi0) {
          acc = std::move(t);
          return true;
        }
        if (t.dphi * (a_hi.a - a_lo.a) >= 0.0) a_hi = a_lo;
        a_lo = std::move(t);
        if (std::abs(a_hi.a - a_lo.a) < 1e-16) break;
      }
      // Accept a sufficient-decrease point even if curvature was not met.
      if (a_lo.a > 0.0) {
        if (a_lo.g.empty()) with_grad(a_lo);
        acc = std::move(a_lo);
        return true;
      }
      return false;
    };

    double a = a_init;
    Trial prev = lo;
    for (int i = 0; i < opts.max_line_search && inc.used() + 2 * n + 1 <= opts.max_evals; ++i) {
      Trial t = eval_point(a);
      if (t.f > f + opts.c1 * a * dphi0 || (i > 0 && t.f >= prev.f)) {
        found = zoom(prev, t);
        break;
      }
      with_grad(t);
      if (std::abs(t.dphi) <= -opts.c2 * dphi0) {
        acc = std::move(t);
        found = true;
        break;
      }
      if (t.dphi >= 0.0) {
        found = zoom(t, prev);
        break;
      }
      prev = std::move(t);
      a *= 2.0;
    }
    if (!found) return inc.finish(false, "line search failed");

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = acc.x[i] - x[i];
      y[i] = acc.g[i] - g[i];
    }
    const double f_prev = f;
    x = acc.x;
    f = acc.f;
    g = acc.g;
    double smax = 0.0;
    for (double v : s) smax = std::max(smax, std::abs(v));
    if (smax == 0.0) return inc.finish(false, "line search made no progress at a bound");
    if (std::abs(f_prev - f) <= opts.ftol * std::max({1.0, std::abs(f), std::abs(f_prev)}))
      return inc.finish(true, "relative function change below tolerance");

    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      if (first_step) {
        const double scale = sy / dot(y, y);
        for (double& h : H) h *= scale;
      }
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      std::vector<double> Hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) Hy[i] += H[i * n + j] * y[j];
      const double yHy = dot(y, Hy);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          H[i * n + j] += -rho * (Hy[i] * s[j] + s[i] * Hy[j]) + (rho * rho * yHy + rho) * s[i] * s[j];
    }
    first_step = false;
  }
  return inc.finish(false, "iteration limit reached");
}

struct DeOptions {
  static DeOptions with(std::size_t population, std::size_t max_gens, double tol) {
    DeOptions o;
    o.population = population;
    o.max_gens = max_gens;
    o.tol = tol;
    return o;
  }

  std::size_t population = 0;  // 0: 15 * arity
  double F = 0.7;
  double CR = 0.9;
  std::size_t max_gens = 1000;
  std::size_t budget = 0;  // 0: unlimited
  double tol = 1e-6;
  double atol = 1e-12;
  unsigned workers = 1;
  std::vector<std::vector<double>> initial_points;
};

/// DE/rand/1/bin. Trials are generated sequentially from one stream and then
/// evaluated as a batch, so the result does not depend on the worker count.
inline OptimizerReport diff_evolution(const Objective& obj, const DeOptions& opts, std::uint64_t seed) {
  const std::size_t d = obj.arity();
  const auto& box = obj.bounds();
  std::size_t np = opts.population ? opts.population : 15 * d;
  if (opts.budget) np = std::min(np, opts.budget);
  if (np < 4) throw DomainError("differential evolution needs a population of at least 4");
  if (!(opts.F > 0.0 && opts.F <= 2.0) || !(opts.CR >= 0.0 && opts.CR <= 1.0))
    throw DomainError("DE needs F in (0, 2] and CR in [0, 1]");

  Rng rng = make_rng(seed, {0xde});
  detail::Incumbent inc(obj);

  // Latin hypercube initialisation.
  std::vector<std::vector<double>> pop(np, std::vector<double>(d));
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<std::size_t> strata(np);
    std::iota(strata.begin(), strata.end(), 0);
    for (std::size_t i = np; i > 1; --i) std::swap(strata[i - 1], strata[uniform_index(rng, i)]);
    for (std::size_t i = 0; i < np; ++i)
      pop[i][j] = box.lower[j] + box.width(j) * (static_cast<double>(strata[i]) + uniform01(rng)) / static_cast<double>(np);
  }
  for (std::size_t i = 0; i < opts.initial_points.size() && i < np; ++i) {
    if (opts.initial_points[i].size() != d) throw DomainError("DE initial point has wrong dimension");
    pop[i] = box.clamp(opts.initial_points[i]);
  }

  auto record = [&](const std::vector<std::vector<double>>& pts, const std::vector<double>& fs) {
    const std::size_t first = inc.used() - pts.size() + 1;
    for (std::size_t i = 0; i < pts.size(); ++i) inc.offer(pts[i], fs[i], first + i);
  };
  std::vector<double> fit = detail::evaluate_batch(obj, pop, opts.workers);
  record(pop, fit);

  auto spread_ok = [&] {
    double mean = 0.0;
    for (double v : fit) mean += v;
    mean /= static_cast<double>(np);
    double var = 0.0;
    for (double v : fit) var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(np)) <= opts.atol + opts.tol * std::abs(mean);
  };

  for (std::size_t gen = 0; gen < opts.max_gens; ++gen) {
    if (spread_ok()) return inc.finish(true, "population spread below tolerance");
    if (opts.budget && inc.used() + np > opts.budget) return inc.finish(false, "evaluation budget exhausted");
    std::vector<std::vector<double>> trials(np, std::vector<double>(d));
    for (std::size_t i = 0; i < np; ++i) {
      std::size_t r[3];
      for (int k = 0; k < 3; ++k) {
        std::size_t c;
        do c = uniform_index(rng, np);
        while (c == i || (k > 0 && c == r[0]) || (k > 1 && c == r[1]));
        r[k] = c;
      }
      const std::size_t jrand = uniform_index(rng, d);
      for (std::size_t j = 0; j < d; ++j) {
        const double u = uniform01(rng);
        double v = pop[i][j];
        if (u < opts.CR || j == jrand) {
          v = pop[r[0]][j] + opts.F * (pop[r[1]][j] - pop[r[2]][j]);
          if (v < box.lower[j] || v > box.upper[j]) v = box.lower[j] + box.width(j) * uniform01(rng);
        }
        trials[i][j] = v;
      }
    }
    const auto tf = detail::evaluate_batch(obj, trials, opts.workers);
    record(trials, tf);
    for (std::size_t i = 0; i < np; ++i)
      if (tf[i] <= fit[i]) pop[i] = std::move(trials[i]), fit[i] = tf[i];
  }
  return inc.finish(false, "generation limit reached");
}

enum class PolishMethod { bfgs, nelder_mead, none };

/// Per-depth objective family for the layer-wise procedure.
struct LayeredObjective {
  /// Box for one (gamma, beta) layer.
  Box layer_box;
  /// Objective at arbitrary depth.
  std::function<double(const QaoaParams&)> full;
  /// Optional: given frozen depth-(k-1) angles, a function of the new
  /// (gamma_k, beta_k) that may reuse the cached prefix state.
  std::function<std::function<double(double, double)>(const QaoaParams&)> extend;
};

struct EggOptions {
  DeOptions de = DeOptions::with(20, 40, 1e-4);
  PolishMethod polish = PolishMethod::bfgs;
  BfgsOptions bfgs{.max_iter = 100, .max_evals = 1500};
  NelderMeadOptions nelder_mead{.max_evals = 1500, .xtol = 1e-8};
  bool seed_continuation = true;
};

struct EggLayerReport {
  QaoaParams params;
  OptimizerReport report;
};

/// DE on the newest (gamma, beta) with earlier angles frozen, then a
/// full-dimensional polish. Depth 1 is DE alone.
inline std::vector<EggLayerReport> egg_optimize(const LayeredObjective& lo, int p_max, const EggOptions& opts,
                                                std::uint64_t seed) {
  if (p_max < 1) throw DomainError("p_max must be at least 1");
  if (lo.layer_box.size() != 2) throw DomainError("layer box must be two-dimensional");
  if (!lo.full) throw DomainError("layered objective needs a full evaluator");
  std::vector<EggLayerReport> out;
  QaoaParams incumbent;
  for (int k = 1; k <= p_max; ++k) {
    std::function<double(double, double)> step;
    if (k == 1) {
      step = [&](double g, double b) { return lo.full(QaoaParams{{g}, {b}}); };
    } else if (lo.extend) {
      step = lo.extend(incumbent);
    } else {
      step = [&, frozen = incumbent](double g, double b) {
        QaoaParams p = frozen;
        p.gammas.push_back(g);
        p.betas.push_back(b);
        return lo.full(p);
      };
    }
    Objective layer_obj([&](std::span<const double> x) { return step(x[0], x[1]); }, lo.layer_box);
    DeOptions de = opts.de;
    if (k > 1 && opts.seed_continuation) de.initial_points.insert(de.initial_points.begin(), std::vector<double>{0.0, 0.0});
    OptimizerReport rep = diff_evolution(layer_obj, de, derive_seed(seed, {static_cast<std::uint64_t>(k)}));

    QaoaParams cand = incumbent;
    cand.gammas.push_back(rep.best_x[0]);
    cand.betas.push_back(rep.best_x[1]);

    if (k > 1 && opts.polish != PolishMethod::none) {
      const Box b = flat_params_box(lo.layer_box, k);
      Objective full_obj([&](std::span<const double> x) { return lo.full(QaoaParams::from_flat(x)); }, b);
      const auto x0 = cand.flat();
      OptimizerReport pol = opts.polish == PolishMethod::bfgs ? bfgs_fd(full_obj, x0, opts.bfgs)
                                                              : nelder_mead(full_obj, x0, opts.nelder_mead);
      for (auto& t : pol.trajectory) t.evals += rep.evals;
      for (auto& t : pol.trajectory) t.best_f = std::min(t.best_f, rep.best_f);
      rep.trajectory.insert(rep.trajectory.end(), pol.trajectory.begin(), pol.trajectory.end());
      rep.evals += pol.evals;
      rep.reason = "de: " + rep.reason + "; polish: " + pol.reason;
      rep.converged = rep.converged && pol.converged;
      if (pol.best_f < rep.best_f) {
        cand = QaoaParams::from_flat(pol.best_x);
        rep.best_f = pol.best_f;
      }
    }
    rep.best_x = cand.flat();
    incumbent = cand;
    out.push_back({cand, std::move(rep)});
  }
  return out;
}

enum class InterpLocal { nelder_mead, de };

struct InterpOptions {
  InterpLocal local = InterpLocal::nelder_mead;
  NelderMeadOptions nelder_mead{.max_evals = 2000, .xtol = 1e-6};
  /// Depth-1 search for the nelder_mead variant starts here (flat gamma, beta);
  /// empty means the centre of the layer box.
  std::vector<double> first_start;
  DeOptions de_first = DeOptions::with(20, 40, 1e-3);
  DeOptions de = DeOptions::with(16, 40, 1e-3);
  /// Half-width of the DE window around the INTERP guess, as a fraction of the layer box.
  double de_window = 0.2;
};

/// Depth-by-depth optimisation over all 2p angles, each depth started from
/// the INTERP extension of the previous optimum.
inline std::vector<EggLayerReport> interp_optimize(const LayeredObjective& lo, int p_max, const InterpOptions& opts,
                                                   std::uint64_t seed) {
  if (p_max < 1) throw DomainError("p_max must be at least 1");
  if (lo.layer_box.size() != 2) throw DomainError("layer box must be two-dimensional");
  std::vector<EggLayerReport> out;
  QaoaParams incumbent;
  for (int k = 1; k <= p_max; ++k) {
    const Box full_box = flat_params_box(lo.layer_box, k);
    std::vector<double> x0;
    if (k == 1) {
      x0 = opts.first_start.empty()
               ? std::vector<double>{0.5 * (lo.layer_box.lower[0] + lo.layer_box.upper[0]),
                                     0.5 * (lo.layer_box.lower[1] + lo.layer_box.upper[1])}
               : opts.first_start;
    } else {
      x0 = full_box.clamp(interp_init(incumbent).flat());
    }
    OptimizerReport rep;
    if (opts.local == InterpLocal::nelder_mead) {
      Objective obj([&](std::span<const double> x) { return lo.full(QaoaParams::from_flat(x)); }, full_box);
      rep = nelder_mead(obj, x0, opts.nelder_mead);
    } else {
      Box window = full_box;
      if (k > 1) {
        for (std::size_t i = 0; i < window.size(); ++i) {
          const double half = opts.de_window * full_box.width(i);
          window.lower[i] = std::max(full_box.lower[i], x0[i] - half);
          window.upper[i] = std::min(full_box.upper[i], x0[i] + half);
        }
      }
      Objective obj([&](std::span<const double> x) { return lo.full(QaoaParams::from_flat(x)); }, window);
      DeOptions de = k == 1 ? opts.de_first : opts.de;
      if (k > 1) de.initial_points.insert(de.initial_points.begin(), x0);
      rep = diff_evolution(obj, de, derive_seed(seed, {0x1e7e, static_cast<std::uint64_t>(k)}));
    }
    incumbent = QaoaParams::from_flat(rep.best_x);
    out.push_back({incumbent, std::move(rep)});
  }
  return out;
}

/// values[row * resolution + col] = f(x = col coordinate, y = row coordinate).
struct Landscape {
  int resolution = 0;
  Box bounds;
  std::vector<double> values;
  double argmin_x = 0.0;
  double argmin_y = 0.0;
  double min_value = std::numeric_limits<double>::infinity();

  double coord(int axis, int j) const {
    if (j == resolution - 1) return bounds.upper[static_cast<std::size_t>(axis)];
    return bounds.lower[static_cast<std::size_t>(axis)] +
           bounds.width(static_cast<std::size_t>(axis)) * static_cast<double>(j) / static_cast<double>(resolution - 1);
  }
  double at(int row, int col) const { return values[static_cast<std::size_t>(row * resolution + col)]; }
};

/// Same lattice and visiting order as grid_search in two dimensions.
inline Landscape landscape_grid(const std::function<double(double, double)>& f, int resolution, const Box& bounds) {
  if (resolution < 2) throw DomainError("landscape resolution must be at least 2");
  if (bounds.size() != 2) throw DomainError("landscape bounds must be two-dimensional");
  bounds.validate();
  Landscape l;
  l.resolution = resolution;
  l.bounds = bounds;
  l.values.resize(static_cast<std::size_t>(resolution * resolution));
  for (int row = 0; row < resolution; ++row) {
    for (int col = 0; col < resolution; ++col) {
      const double x = l.coord(0, col);
      const double y = l.coord(1, row);
      const double v = f(x, y);
      l.values[static_cast<std::size_t>(row * resolution + col)] = v;
      if (v < l.min_value) l.min_value = v, l.argmin_x = x, l.argmin_y = y;
    }
  }
  return l;
}

/// Cells strictly below all of their (up to 8) lattice neighbours.
inline int count_strict_local_minima(const Landscape& l) {
  int count = 0;
  const int r = l.resolution;
  for (int row = 0; row < r; ++row) {
    for (int col = 0; col < r; ++col) {
      const double v = l.at(row, col);
      bool minimum = true;
      for (int dr = -1; dr <= 1 && minimum; ++dr)
        for (int dc = -1; dc <= 1 && minimum; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const int rr = row + dr, cc = col + dc;
          if (rr < 0 || cc < 0 || rr >= r || cc >= r) continue;
          if (!(v < l.at(rr, cc))) minimum = false;
        }
      count += minimum ? 1 : 0;
    }
  }
  return count;
}

inline Box default_qaoa_layer_box() { return {{0.0, 0.0}, {2.0 * 3.14159265358979323846, 3.14159265358979323846}}; }

}  // namespace evq
