#include "dfire/normalization_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dfire {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) {
    double& v = simplex[i + 1][i];
    v = v != 0.0 ? v * (1.0 + options.initial_step) : 0.00025;
  }
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = objective(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto point_along = [&](double t, std::vector<double>& out) {
    // centroid + t * (centroid - worst)
    const auto& worst = simplex[order[n]];
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (centroid[j] - worst[j]);
  };

  NelderMeadResult result;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });

    double x_spread = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        x_spread = std::max(x_spread, std::abs(simplex[order[i]][j] - simplex[order[0]][j]));
      }
    }
    const double f_spread = std::abs(values[order[n]] - values[order[0]]);
    if (x_spread <= options.x_tolerance && f_spread <= options.f_tolerance) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[order[i]][j] / static_cast<double>(n);
    }

    const double best = values[order[0]];
    const double second_worst = values[order[n - 1]];
    const double worst = values[order[n]];

    point_along(1.0, trial);
    const double reflected = objective(trial);
    if (reflected < best) {
      point_along(2.0, trial2);
      const double expanded = objective(trial2);
      if (expanded < reflected) {
        simplex[order[n]] = trial2;
        values[order[n]] = expanded;
      } else {
        simplex[order[n]] = trial;
        values[order[n]] = reflected;
      }
      continue;
    }
    if (reflected < second_worst) {
      simplex[order[n]] = trial;
      values[order[n]] = reflected;
      continue;
    }
    const bool outside = reflected < worst;
    point_along(outside ? 0.5 : -0.5, trial2);
    const double contracted = objective(trial2);
    if (contracted < (outside ? reflected : worst)) {
      simplex[order[n]] = trial2;
      values[order[n]] = contracted;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      auto& vertex = simplex[order[i]];
      for (std::size_t j = 0; j < n; ++j) {
        vertex[j] = simplex[order[0]][j] + 0.5 * (vertex[j] - simplex[order[0]][j]);
      }
      values[order[i]] = objective(vertex);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best_index = static_cast<std::size_t>(best_it - values.begin());
  result.x = simplex[best_index];
  result.value = *best_it;
  result.iterations = iter;
  return result;
}

const char* candidate_name(NormalizationCandidate candidate) {
  switch (candidate) {
    case NormalizationCandidate::kExpBase: return "exp_base";
    case NormalizationCandidate::kPower: return "power";
    case NormalizationCandidate::kTanh: return "tanh";
  }
  return "unknown";
}

double evaluate_candidate(NormalizationCandidate candidate, double c, double x) {
  switch (candidate) {
    case NormalizationCandidate::kExpBase: return 1.0 - std::pow(c, -x);
    case NormalizationCandidate::kPower: return 1.0 - std::pow(x + 1.0, -c);
    case NormalizationCandidate::kTanh: return std::tanh(c * x);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double candidate_sse(NormalizationCandidate candidate, double c,
                     const NormalizationFitOptions& options) {
  if (!(c > 0.0)) return std::numeric_limits<double>::infinity();
  const int n = std::max(options.grid_points, 2);
  const double step = (options.hi - options.lo) / (n - 1);
  double sse = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = options.lo + step * i;
    const double d = evaluate_candidate(candidate, c, x) - x;
    sse += d * d;
  }
  return sse;
}

NormalizationFit fit_normalization_constant(NormalizationCandidate candidate,
                                            const NormalizationFitOptions& options) {
  const auto objective = [&](std::span<const double> c) {
    return candidate_sse(candidate, c[0], options);
  };
  const NelderMeadResult nm = nelder_mead(objective, {options.start}, options.search);
  return {candidate, nm.x[0], nm.value, nm.iterations, nm.converged};
}

}  // namespace dfire
