#pragma once

// Maximal-weight lattice animals: the rooted fixed-size problem, the
// box-constrained free-size problem (value and minimal maximizer size) and the
// box-constrained fixed-size problem, solved exactly or heuristically.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gla/lattice.hpp"
#include "gla/weight_field.hpp"

namespace gla {

// Absolute tolerance used for every weight comparison in the solvers.
inline constexpr double kWeightTol = 1e-9;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Animal {
  Region sites;
  double weight = 0;

  std::size_t size() const { return sites.size(); }
};

// Validates connectivity and caches the weight.
Animal make_animal(const WeightField& f, Region sites);

struct SolveResult {
  double value = 0;
  Animal witness;
  bool optimal = false;
  std::uint64_t nodes_explored = 0;
  std::string method;

  std::size_t size() const { return witness.size(); }
};

// Sites of a box with scores and nearest-neighbour adjacency; vertex order
// is lexicographic so vertex index order equals site order.
class CellGraph {
 public:
  static CellGraph from_box(const WeightField& f, const Box& b);
  // Scores given in window index order of the box.
  static CellGraph from_scores(const Box& b, std::vector<double> scores);
  // L-infinity ball of radius n - 1 around root, rooted at root.
  static CellGraph rooted_ball(const WeightField& f, const Site& root, int n);

  std::size_t size() const { return score_.size(); }
  int dim() const { return box_.dim(); }
  const Box& box() const { return box_; }
  const Window& window() const { return window_; }
  double score(std::size_t v) const { return score_[v]; }
  const std::vector<double>& scores() const { return score_; }
  std::span<const std::uint32_t> adjacent(std::size_t v) const {
    return {adj_.data() + start_[v], adj_.data() + start_[v + 1]};
  }
  std::optional<std::uint32_t> root() const { return root_; }
  void set_root(std::optional<std::uint32_t> r) { root_ = r; }

  Region region_of(std::span<const std::uint32_t> verts) const;
  double weight_of(std::span<const std::uint32_t> verts) const;

 private:
  void build_adjacency();

  Box box_;
  Window window_;
  std::vector<double> score_;
  std::vector<std::uint32_t> start_;
  std::vector<std::uint32_t> adj_;
  std::optional<std::uint32_t> root_;
};

enum class ExactMethod { Auto, Enumeration, ProfileDP };

struct SolverOptions {
  bool heuristic = false;
  ExactMethod method = ExactMethod::Auto;
  std::size_t max_exact_size = 18;
  std::uint64_t max_nodes = 10'000'000;
  // Annealing schedule.
  int restarts = 32;
  int moves_per_restart = 10'000;
  double cooling = 0.995;
  std::uint64_t heuristic_seed = 0;
};

// Largest box side the profile dynamic program accepts (d = 2 only).
inline constexpr int kProfileMaxWidth = 16;

SolveResult solve_rooted_fixed_size(const WeightField& f, int n, const SolverOptions& opt = {},
                                    std::optional<Site> root = std::nullopt);
SolveResult solve_box(const WeightField& f, const Box& b, const SolverOptions& opt = {});
SolveResult solve_box_fixed_size(const WeightField& f, const Box& b, std::size_t k,
                                 const SolverOptions& opt = {});

// Exact maxima of every size 1..k_max in one pass (profile DP or
// enumeration); entry j-1 is the best weight of size j, -inf if infeasible.
std::vector<double> box_fixed_size_profile(const WeightField& f, const Box& b, std::size_t k_max,
                                           const SolverOptions& opt = {});

// Problem statement shared by the graph-level solvers.
struct Problem {
  std::optional<std::size_t> size;  // fixed size when set, free size otherwise
};

// Graph-level entry points (used by the facade and by tests that cross-check
// methods on explicit score grids).
SolveResult solve_exact(const CellGraph& g, const Problem& pb, const SolverOptions& opt = {});
SolveResult solve_heuristic(const CellGraph& g, const Problem& pb, const SolverOptions& opt = {});

// Same instance as solve_exact restricted to forced-in / forced-out cells;
// nullopt when infeasible. Profile DP only.
struct ProfileValue {
  double value;
  std::size_t size;
};
std::optional<ProfileValue> profile_free(const CellGraph& g, std::span<const std::int8_t> forced);
std::vector<double> profile_fixed(const CellGraph& g, std::size_t k_max, std::span<const std::int8_t> forced);
bool profile_supported(const CellGraph& g);

// Every connected vertex subset (optionally of size k, optionally containing
// the root) exactly once; fn receives sorted vertex indices. Throws
// BudgetExceeded beyond `cap` subsets.
std::uint64_t enumerate_subsets(const CellGraph& g, std::optional<std::size_t> k,
                                const std::function<void(std::span<const std::uint32_t>)>& fn,
                                std::uint64_t cap = 10'000'000);

// Animals of a box as site sets with weights.
std::vector<Animal> enumerate_animals(const WeightField& f, const Box& b, std::optional<std::size_t> k = std::nullopt,
                                      std::optional<Site> root = std::nullopt,
                                      std::uint64_t cap = 10'000'000);

// Union of a1, path and a2 with exact weight bookkeeping.
Animal concatenate(const Animal& a1, const Region& path, const Animal& a2, const WeightField& f);

// Orders candidate solutions: higher weight, then fewer sites (when
// prefer_small), then lexicographically smaller site set.
bool better_solution(double v1, std::span<const std::uint32_t> s1, double v2, std::span<const std::uint32_t> s2,
                     bool prefer_small);

}  // namespace gla
