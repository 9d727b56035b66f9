#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace freqgate::design {

/// f(x, grad) -> value; must fill grad with df/dx.
using GradientFunction = std::function<double(std::span<const double>, std::span<double>)>;

struct LbfgsOptions {
  int max_iterations = 2000;
  int history = 12;
  double gradient_tolerance = 1e-10;   // on max |g|
  double relative_tolerance = 1e-15;   // on |f_k - f_{k+1}| / max(1, |f|)
  int stall_iterations = 10;           // consecutive steps below relative_tolerance
};

struct LbfgsReport {
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string stop_reason;
};

/// Limited-memory BFGS with a strong-Wolfe line search. `x` is updated in
/// place with the best point found.
LbfgsReport minimize_lbfgs(const GradientFunction& f, std::vector<double>& x,
                           const LbfgsOptions& options = {});

}  // namespace freqgate::design
