#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dfire {

struct NelderMeadOptions {
  int max_iterations = 2000;
  double x_tolerance = 1e-12;
  double f_tolerance = 1e-15;
  double initial_step = 0.05;  // relative; absolute 0.00025 for zero coordinates
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Downhill simplex minimization (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5). On non-convergence returns the best vertex seen.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options = {});

/// Candidate squashing functions for the propagation probability.
enum class NormalizationCandidate {
  kExpBase,  // 1 - c^(-x)
  kPower,    // 1 - (x + 1)^(-c)
  kTanh,     // tanh(c x)
};

const char* candidate_name(NormalizationCandidate candidate);

double evaluate_candidate(NormalizationCandidate candidate, double c, double x);

struct NormalizationFitOptions {
  double lo = 0.2;
  double hi = 0.8;
  int grid_points = 61;
  double start = 1.0;
  NelderMeadOptions search;
};

/// Sum over a uniform grid on [lo, hi] of (f_c(x) - x)^2; +inf for c <= 0.
double candidate_sse(NormalizationCandidate candidate, double c,
                     const NormalizationFitOptions& options = {});

struct NormalizationFit {
  NormalizationCandidate candidate = NormalizationCandidate::kTanh;
  double c = 0.0;
  double sse = 0.0;
  int iterations = 0;
  bool converged = false;
};

NormalizationFit fit_normalization_constant(NormalizationCandidate candidate,
                                            const NormalizationFitOptions& options = {});

}  // namespace dfire
