#pragma once

// Box certification, the coarse active-site field built from it, and the
// constructions that stitch certified animals together with white paths.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gla/animal.hpp"
#include "gla/percolation.hpp"

namespace gla {

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConditionAParams {
  double c = 0.5;       // weight density demanded of the box optimum
  double lambda = 1.0;  // white threshold: score >= -lambda
  double rho = 5.0;     // size exponent and reach multiplier
};

// Size threshold (log m)^rho and reach limit floor(rho m) for box side m.
double size_threshold(const ConditionAParams& p, Coord m);
std::size_t reach_limit(const ConditionAParams& p, Coord m);

// Non-empty when the scale is below (lambda rho / c)^{1/(d-1)}.
std::optional<std::string> scale_warning(const ConditionAParams& p, Coord ell, int dim);

struct ReachReport {
  std::size_t limit = 0;
  // Largest nearest-neighbour component of B[2] sites farther than limit
  // from the optimum; the clause holds when it stays below the threshold.
  std::size_t max_far_component = 0;
  bool holds = false;
};

struct ConditionACertificate {
  Box box;
  double value = 0;
  Animal gamma_star;
  bool optimal = false;
  bool weight_ok = false;
  bool size_ok = false;
  ReachReport reach;
  // Sufficient-condition flags: every large white cluster in B[2] is close
  // to the optimum, and no black L-cluster meeting B[2] is large.
  std::optional<bool> white_clusters_close;
  std::optional<bool> black_clusters_small;
  std::vector<std::string> warnings;

  bool certified() const { return weight_ok && size_ok && reach.holds; }
};

// Depends only on scores within sup-distance floor(rho m) of the box.
ConditionACertificate check_condition_A(const WeightField& f, const Box& b, const ConditionAParams& p,
                                        const SolverOptions& opt = {}, bool with_flags = true);

struct ActiveSites {
  Coord ell = 1;
  SiteMask mask;  // over coarse coordinates
  std::vector<ConditionACertificate> certificates;  // indexed like mask.window()
};

// Certifies B_{ell a, ell} for every coarse site a of `coarse`.
ActiveSites active_sites(const WeightField& f, Coord ell, const Box& coarse, const ConditionAParams& p,
                         const SolverOptions& opt = {});

struct LagCorrelation {
  Site lag;
  double corr = 0;
  std::size_t pairs = 0;
  bool long_range = false;
  bool within_bound = true;  // |corr| < 4 / sqrt(pairs)
};

struct NearPercolationReport {
  double p_hat = 0;
  std::size_t sites = 0;
  std::vector<LagCorrelation> lags;
  bool long_range_ok = true;
};

// Pooled density and lag correlations of coarse indicator samples; lags with
// sup-norm above 2 range + 1 are flagged long-range. Needs at least 1e4 sites.
NearPercolationReport near_percolation_stats(const std::vector<SiteMask>& samples, double range, int max_lag);

struct Backbone {
  Animal psi;
  double gamma_sum = 0;
  std::size_t connectors = 0;
  std::size_t connector_sites = 0;
  // sum S(gamma_a) - lambda floor(rho ell) (#connectors)
  double lower_bound = 0;
  bool bound_holds = false;
};

// Union of the certified optima of a coarse component joined along coarse
// nearest-neighbour edges by shortest white paths.
Backbone build_backbone(const WeightField& f, const ActiveSites& active, const Region& component,
                        const ConditionAParams& p);

struct Chain {
  Animal kappa;
  std::vector<std::size_t> connector_sizes;
  double gamma_sum = 0;
  double lower_bound = 0;   // sum S(gamma_j) - lambda sum |tau_j|
  std::size_t size_bound = 0;  // sum |gamma_j| + sum |tau_j|
  bool bounds_hold = false;
};

// Joins consecutive animals by shortest white paths of at most max_gap sites.
Chain concatenate_chain(const WeightField& f, const std::vector<Animal>& animals, double lambda,
                        std::size_t max_gap);

struct EventD {
  bool holds = false;
  std::optional<Site> v;
  std::optional<Animal> witness;
  std::size_t candidates = 0;
};

// Some white v in b within floor(rho m) of every corner and an animal in b
// containing v with weight at least C m.
EventD check_event_D(const WeightField& f, const Box& b, double lambda, double rho, double C,
                     const SolverOptions& opt = {});

}  // namespace gla
