#include "freqgate/design/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>

namespace freqgate::design {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct Probe {
  double alpha;
  double value;
  double slope;
};

// Minimizer of the cubic through two probes, or bisection when the cubic is
// not usable.
double interpolate(const Probe& lo, const Probe& hi) {
  const double d1 = lo.slope + hi.slope - 3.0 * (lo.value - hi.value) / (lo.alpha - hi.alpha);
  const double disc = d1 * d1 - lo.slope * hi.slope;
  const double mid = 0.5 * (lo.alpha + hi.alpha);
  if (disc < 0.0) return mid;
  const double d2 = std::copysign(std::sqrt(disc), hi.alpha - lo.alpha);
  const double a = hi.alpha - (hi.alpha - lo.alpha) * (hi.slope + d2 - d1) / (hi.slope - lo.slope + 2.0 * d2);
  const double left = std::min(lo.alpha, hi.alpha), right = std::max(lo.alpha, hi.alpha);
  const double margin = 0.1 * (right - left);
  if (!std::isfinite(a) || a < left + margin || a > right - margin) return mid;
  return a;
}

class LineSearch {
 public:
  LineSearch(const GradientFunction& f, std::span<const double> x0, std::span<const double> dir,
             int& evaluations)
      : f_(f), x0_(x0), dir_(dir), evals_(evaluations), x_(x0.size()), g_(x0.size()) {}

  Probe evaluate(double alpha) {
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] = x0_[i] + alpha * dir_[i];
    const double v = f_(x_, g_);
    ++evals_;
    return {alpha, v, dot(g_, dir_)};
  }

  // Returns the accepted probe; x() and g() hold the corresponding point.
  std::optional<Probe> run(const Probe& start, double alpha1) {
    constexpr double c1 = 1e-4, c2 = 0.9;
    constexpr int kMaxSteps = 40;
    Probe prev = start;
    double alpha = alpha1;
    for (int i = 0; i < kMaxSteps; ++i) {
      Probe cur = evaluate(alpha);
      if (!std::isfinite(cur.value) || cur.value > start.value + c1 * alpha * start.slope ||
          (i > 0 && cur.value >= prev.value)) {
        return zoom(start, prev, cur);
      }
      if (std::abs(cur.slope) <= -c2 * start.slope) return cur;
      if (cur.slope >= 0.0) return zoom(start, cur, prev);
      prev = cur;
      alpha *= 2.0;
    }
    return std::nullopt;
  }

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& g() const { return g_; }

 private:
  std::optional<Probe> zoom(const Probe& start, Probe lo, Probe hi) {
    constexpr double c1 = 1e-4, c2 = 0.9;
    std::optional<Probe> best;
    for (int i = 0; i < 40; ++i) {
      const double alpha = interpolate(lo, hi);
      Probe cur = evaluate(alpha);
      if (!std::isfinite(cur.value) || cur.value > start.value + c1 * alpha * start.slope ||
          cur.value >= lo.value) {
        hi = cur;
      } else {
        if (std::abs(cur.slope) <= -c2 * start.slope) return cur;
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = cur;
        best = cur;
      }
      if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, std::abs(lo.alpha))) break;
    }
    // Fall back to the best sufficient-decrease point seen, if any.
    if (lo.alpha > 0.0 && lo.value < start.value) {
      evaluate(lo.alpha);
      return lo;
    }
    return best;
  }

  const GradientFunction& f_;
  std::span<const double> x0_;
  std::span<const double> dir_;
  int& evals_;
  std::vector<double> x_;
  std::vector<double> g_;
};

}  // namespace

LbfgsReport minimize_lbfgs(const GradientFunction& f, std::vector<double>& x,
                           const LbfgsOptions& options) {
  const std::size_t n = x.size();
  LbfgsReport report;
  std::vector<double> g(n), dir(n);
  double value = f(x, g);
  report.evaluations = 1;

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> memory;
  std::vector<double> alpha_buf;
  int stall = 0;

  for (int it = 0; it < options.max_iterations; ++it) {
    report.iterations = it;
    if (max_abs(g) <= options.gradient_tolerance) {
      report.converged = true;
      report.stop_reason = "gradient tolerance";
      break;
    }
    // Two-loop recursion.
    for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
    alpha_buf.assign(memory.size(), 0.0);
    for (std::size_t k = memory.size(); k-- > 0;) {
      alpha_buf[k] = memory[k].rho * dot(memory[k].s, dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] -= alpha_buf[k] * memory[k].y[i];
    }
    if (!memory.empty()) {
      const auto& last = memory.back();
      const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (double& d : dir) d *= gamma;
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const double beta = memory[k].rho * dot(memory[k].y, dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] += (alpha_buf[k] - beta) * memory[k].s[i];
    }
    double slope = dot(g, dir);
    if (!(slope < 0.0)) {
      // Lost descent; restart from steepest descent.
      memory.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
      slope = dot(g, dir);
    }
    const double first_step = memory.empty() ? std::min(1.0, 1.0 / std::max(1e-12, max_abs(g))) : 1.0;

    LineSearch ls(f, x, dir, report.evaluations);
    const auto accepted = ls.run(Probe{0.0, value, slope}, first_step);
    if (!accepted) {
      if (!memory.empty()) {
        memory.clear();
        continue;
      }
      report.stop_reason = "no further decrease";
      break;
    }
    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = ls.x()[i] - x[i];
      p.y[i] = ls.g()[i] - g[i];
    }
    const double sy = dot(p.s, p.y);
    const double previous = value;
    x = ls.x();
    g = ls.g();
    value = accepted->value;
    if (sy > 1e-300) {
      p.rho = 1.0 / sy;
      memory.push_back(std::move(p));
      if (static_cast<int>(memory.size()) > options.history) memory.pop_front();
    }
    if (std::abs(previous - value) <= options.relative_tolerance * std::max(1.0, std::abs(value))) {
      if (++stall >= options.stall_iterations) {
        report.converged = true;
        report.stop_reason = "function tolerance";
        report.iterations = it + 1;
        break;
      }
    } else {
      stall = 0;
    }
    report.iterations = it + 1;
  }
  if (report.stop_reason.empty()) report.stop_reason = "iteration budget";
  report.value = value;
  return report;
}

}  // namespace freqgate::design
