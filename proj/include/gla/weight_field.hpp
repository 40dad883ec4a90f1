#pragma once

// I.i.d. site scores generated lazily from (seed, site) and the closed-form
// distribution functions of the supported laws.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gla/lattice.hpp"

namespace gla {

enum class Family { TwoPointPenalty, TwoPointReward, Uniform, Shifted, HeavyTail, TruncatedAbove, Degenerate };

const char* to_string(Family f);

class DistributionSpec {
 public:
  // X = 1 with probability p, else -lambda.
  static DistributionSpec two_point_penalty(double p, double lambda);
  // X = -1 with probability p, else lambda.
  static DistributionSpec two_point_reward(double p, double lambda);
  static DistributionSpec uniform(double a, double b);
  static DistributionSpec shifted(const DistributionSpec& base, double eps);
  // Tail x^{-d} (log x)^{-d(1+alpha)} above x0; the missing mass sits at x0 - 1.
  static DistributionSpec heavy_tail(int d, double alpha, double x0);
  // Y = X 1{X > lambda}.
  static DistributionSpec truncated_above(const DistributionSpec& base, double lambda);
  static DistributionSpec degenerate(double c);

  Family family() const { return family_; }
  double p() const { return p_; }
  double lambda() const { return lambda_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double eps() const { return eps_; }
  double alpha() const { return alpha_; }
  double x0() const { return x0_; }
  double c() const { return c_; }
  int tail_dim() const { return d_; }
  const DistributionSpec& base() const { return *base_; }

  // Inverse-CDF style map from one uniform in [0,1) to a score.
  double transform(double u) const;
  // P(X <= t) and P(X > t).
  double cdf(double t) const;
  double survival(double t) const;

  // Essential infimum / supremum (may be infinite).
  double inf_support() const;
  double sup_support() const;
  bool bounded_below() const;
  // All mass on finitely many points (exact comparisons are meaningful).
  bool atomic() const;

  std::string describe() const;

  friend bool operator==(const DistributionSpec& x, const DistributionSpec& y);

 private:
  DistributionSpec() = default;
  double heavy_tail_tail(double x) const;

  Family family_ = Family::Degenerate;
  double p_ = 0, lambda_ = 0, a_ = 0, b_ = 0, eps_ = 0, alpha_ = 0, x0_ = 0, c_ = 0;
  int d_ = 2;
  std::shared_ptr<const DistributionSpec> base_;
};

enum class Condition { Satisfied, Violated, Unknown };
const char* to_string(Condition c);

// Tail integrability: integral over (0, inf) of (1 - F(x))^{1/dim} is finite.
Condition tail_integrability(const DistributionSpec& dist, int dim = 2);

// 1 - F(t)^{n^dim}.
double max_exceedance_prob(const DistributionSpec& dist, double n, double t, int dim = 2);

// Two-point penalty law with lambda = rho / (1 + rho).
DistributionSpec rho_percolation_penalty(double rho, double p);

class WeightField {
 public:
  WeightField(std::uint64_t seed, DistributionSpec dist, int dim = 2);

  std::uint64_t seed() const { return seed_; }
  const DistributionSpec& dist() const { return dist_; }
  int dim() const { return dim_; }

  // The uniform driving site s; scores are transform(uniform).
  double uniform(const Site& s) const;
  double score(const Site& s) const;
  // Scores of every window cell in index order.
  std::vector<double> scores(const Window& w) const;
  std::vector<double> uniforms(const Window& w) const;

  // Copy with the score at s replaced (mutation and locality tests).
  WeightField with_override(const Site& s, double value) const;

 private:
  std::uint64_t seed_;
  DistributionSpec dist_;
  int dim_;
  std::shared_ptr<const std::map<std::uint64_t, double>> overrides_;
};

double animal_weight(const WeightField& f, const Region& a);

}  // namespace gla
