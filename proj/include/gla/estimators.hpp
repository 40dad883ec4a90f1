#pragma once

// Monte Carlo estimates of the normalized greedy-animal statistics over
// independent replica fields, plus near-critical diagnostics.

#include <cstdint>
#include <string>
#include <vector>

#include "gla/animal.hpp"
#include "gla/series.hpp"

namespace gla {

struct EstimateOptions {
  std::size_t reps = 20;
  std::uint64_t master_seed = 0;
  SolverOptions solver;
  int jobs = 1;
  int dim = 2;
};

// floor(alpha n^dim), computed exactly.
std::size_t alpha_size(double alpha, int n, int dim);

// base shifted by eps, folding an existing shift.
DistributionSpec shift_by(const DistributionSpec& base, double eps);

// n^{-1} N_n per replica; a lower bound in heuristic mode.
EstimateSeries estimate_N(const DistributionSpec& dist, const std::vector<int>& n_list, const EstimateOptions& opt);

struct GLEstimate {
  EstimateSeries G;  // n^{-d} G_n
  EstimateSeries L;  // n^{-d} L_n
  // Largest c with every per-scale mean of n^{-d} G_n inside (c, 1/c); 0 if none.
  double band_c = 0;
};

GLEstimate estimate_G_L(const DistributionSpec& dist, const std::vector<int>& n_list, const EstimateOptions& opt);

struct GtildeCurve {
  int n = 0;
  int dim = 2;
  std::vector<double> alphas;
  std::vector<std::size_t> sizes;  // floor(alpha n^d)
  std::vector<std::uint64_t> seeds;
  // values[r][j] = n^{-d} Gtilde_n(alpha_j) for replica r; 0 when the size is 0.
  std::vector<std::vector<double>> values;
  bool lower_bound = false;

  std::vector<Summary> summaries() const;
  // Mean slope between the two smallest alphas.
  double small_alpha_slope() const;
  std::string to_csv() const;
};

GtildeCurve estimate_Gtilde_curve(const DistributionSpec& dist, int n, const std::vector<double>& alphas,
                                  const EstimateOptions& opt);

struct CriticalStep {
  double eps = 0;
  double mean = 0;
  double ci = 0;
  double lo = 0;
  double hi = 0;
};

struct CriticalPoint {
  double eps_star = 0;
  double lo = 0;
  double hi = 0;
  bool converged = false;  // the CI at eps_star contains 0 with half-width <= tol
  std::vector<CriticalStep> history;
};

// Bisection over additive shifts of base on n^{-1} N_n at the probe scale.
CriticalPoint locate_criticality(const DistributionSpec& base, double lo, double hi, int n_probe,
                                 const EstimateOptions& opt, double tol, int max_iter = 40);

struct ScalingDiagnostic {
  double c_exponent = 0;
  EstimateSeries series;  // raw G_n, normalized by n (log n)^c
  bool nonincreasing = false;         // pooled means
  bool nonincreasing_within_ci = false;  // each step up stays inside the combined CI
};

// (log n)^{-c} n^{-1} G_n along n_list; needs c > d/(d-1).
ScalingDiagnostic critical_scaling_diag(const DistributionSpec& dist, double c_exponent, const std::vector<int>& n_list,
                                        const EstimateOptions& opt);

}  // namespace gla
