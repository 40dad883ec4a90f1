#pragma once

// Claim checks returning verdicts with reproducible evidence.

#include <string>
#include <vector>

#include "gla/coarse_grain.hpp"
#include "gla/estimators.hpp"
#include "gla/io.hpp"

namespace gla {

enum class Status { HoldsExactly, HoldsWithinCI, Violated, Inconclusive };
const char* to_string(Status s);

struct Verdict {
  std::string claim;
  Status status = Status::Inconclusive;
  std::string note;  // one-line reason
  Json evidence;     // always carries the seed and the full instance
};

Json to_json(const Verdict& v);
// Fixed-width text table, one row per verdict.
std::string verdict_table(const std::vector<Verdict>& vs);

// n^{-d} (Gt(a1) - Gt(a2)) <= -mu (a2 - a1) + |mu| n^{-d}, in exact rational
// arithmetic on the witnesses; the empty animal counts as weight 0.
Verdict check_lipschitz(const WeightField& f, int n, double alpha1, double alpha2, const SolverOptions& opt = {});

// N_{L_n} >= G_n when the box optimum passes through the origin.
Verdict check_origin_consistency(const WeightField& f, int n, const SolverOptions& opt = {});

// G <= L N at each scale with first-order propagated CIs.
Verdict check_G_le_LN(const DistributionSpec& dist, const std::vector<int>& scales, const EstimateOptions& opt);

struct CoverageParams {
  Coord n = 64;
  Coord ell = 8;
  ConditionAParams condition;
  int margin = 1;
  double tolerance = 0.1;
  SolverOptions box_solver;  // per ell-box certification
};

// Fraction of ell-boxes of the largest active component met by the box optimum.
Verdict check_box_coverage(const WeightField& f, const CoverageParams& p, const SolverOptions& opt = {});

// Interior triples of the curve against paired-replica differences; slack
// absorbs the floor in the size (2M / n^d for scores bounded by M).
Verdict check_concavity(const GtildeCurve& curve, double slack);

// Nonincreasing pooled means of the scaling series at a bisected law; never
// Violated, since only a finite-n trend is testable.
Verdict check_critical_scaling(const CriticalPoint& cp, const ScalingDiagnostic& diag);

// Random instances in a window of side <= 6 (d = 2).
Verdict check_separation(std::size_t trials, const Box& window, std::uint64_t seed);

}  // namespace gla
