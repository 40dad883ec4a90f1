#pragma once

// White/black site masks, cluster labelings, chemical distance and the
// largest-component utilities.

#include <cstdint>
#include <optional>
#include <vector>

#include "gla/lattice.hpp"
#include "gla/series.hpp"
#include "gla/weight_field.hpp"

namespace gla {

class SiteMask {
 public:
  SiteMask() = default;
  SiteMask(Window w, std::vector<std::uint8_t> open);

  // White sites: score >= -lambda.
  static SiteMask white_sites(const WeightField& f, const Window& w, double lambda);
  // Independent site percolation: site open iff its uniform is below p.
  static SiteMask independent(std::uint64_t seed, double p, const Window& w);
  static SiteMask from_region(const Window& w, const Region& open);

  const Window& window() const { return window_; }
  bool open(const Site& s) const { return window_.contains(s) && open_[window_.index(s)]; }
  bool open_at(std::size_t idx) const { return open_[idx] != 0; }
  const std::vector<std::uint8_t>& cells() const { return open_; }
  Region open_region() const { return window_.region_of(open_); }
  std::size_t open_count() const;

 private:
  Window window_;
  std::vector<std::uint8_t> open_;
};

struct ClusterLabeling {
  Window window;
  Adjacency adjacency = Adjacency::NearestNeighbor;
  std::vector<std::int32_t> label;  // -1 on closed sites; ids in lexicographic order of first site
  std::vector<std::size_t> sizes;

  std::int32_t label_of(const Site& s) const { return window.contains(s) ? label[window.index(s)] : -1; }
  Region cluster(std::int32_t id) const;
  // Empty for closed sites.
  Region cluster_of(const Site& s) const;
};

ClusterLabeling label_clusters(const SiteMask& mask, Adjacency adj);

// Minimal number of sites on an open nearest-neighbour path from an open
// site of a to an open site of b, when at most cutoff.
std::optional<std::size_t> chemical_distance(const SiteMask& mask, const Region& a, const Region& b,
                                             std::size_t cutoff);
// A shortest such path, ordered from a to b.
std::optional<std::vector<Site>> chemical_path(const SiteMask& mask, const Region& a, const Region& b,
                                               std::size_t cutoff);

inline constexpr std::uint32_t kUnreached = 0xffffffffu;

// Per-cell site count of a shortest open path from an open site of sources,
// kUnreached beyond cutoff; indexed like mask.window().
std::vector<std::uint32_t> distance_field(const SiteMask& mask, const Region& sources, std::size_t cutoff);

// Largest open nearest-neighbour component inside box shrunk by `margin` on
// every side; ties go to the component with the lexicographically smallest site.
Region largest_component_in_box(const SiteMask& mask, const Box& box, int margin);

struct ThetaEstimate {
  double value = 0;
  double ci = 0;
  std::size_t reps = 0;
};

// Fraction of replicas whose origin cluster reaches the boundary of {-n..n}^d.
ThetaEstimate estimate_theta(double p, int n, std::size_t reps, std::uint64_t master_seed, int dim = 2);

// |P_{n,C}| / n^d per replica, boxes anchored at the origin.
EstimateSeries component_density_series(double p, int margin, const std::vector<int>& n_list, std::size_t reps,
                                        std::uint64_t master_seed, int dim = 2);

// A site in P_{n,C} for every n in [n0, n1] of one realization.
std::optional<Site> persistent_site(double p, int margin, int n0, int n1, std::uint64_t seed, int dim = 2);

}  // namespace gla
