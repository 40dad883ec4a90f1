#include <algorithm>
#include <cmath>
#include <limits>

#include "gla/animal.hpp"
#include "solver_internal.hpp"

namespace gla {

namespace {

bool use_profile(const CellGraph& g, const Problem& pb, const SolverOptions& opt) {
  switch (opt.method) {
    case ExactMethod::ProfileDP:
      if (!profile_supported(g)) throw PreconditionError("profile search needs a two-dimensional box of side <= 16");
      return true;
    case ExactMethod::Enumeration: return false;
    case ExactMethod::Auto: return profile_supported(g) && g.size() > 16 && !(g.root() && pb.size);
  }
  return false;
}

SolveResult dispatch(const CellGraph& g, const Problem& pb, const SolverOptions& opt) {
  return opt.heuristic ? solve_heuristic(g, pb, opt) : solve_exact(g, pb, opt);
}

}  // namespace

SolveResult solve_exact(const CellGraph& g, const Problem& pb, const SolverOptions& opt) {
  if (g.size() == 0) throw PreconditionError("empty instance");
  if (pb.size && (*pb.size == 0 || *pb.size > g.size())) throw PreconditionError("animal size out of range");
  if (use_profile(g, pb, opt)) return detail::profile_solve(g, pb, opt);
  if (pb.size && *pb.size > opt.max_exact_size)
    throw BudgetExceeded("animal size " + std::to_string(*pb.size) + " exceeds the exact budget of " +
                         std::to_string(opt.max_exact_size) + "; use heuristic mode");
  const auto start = detail::quick_incumbent(g, pb, opt.heuristic_seed);
  return detail::branch_and_bound(g, pb, opt, start);
}

SolveResult solve_rooted_fixed_size(const WeightField& f, int n, const SolverOptions& opt, std::optional<Site> root) {
  if (n < 1) throw PreconditionError("rooted animal size must be >= 1");
  const Site r = root.value_or(Site::origin(f.dim()));
  const CellGraph g = CellGraph::rooted_ball(f, r, n);
  return dispatch(g, Problem{static_cast<std::size_t>(n)}, opt);
}

SolveResult solve_box(const WeightField& f, const Box& b, const SolverOptions& opt) {
  return dispatch(CellGraph::from_box(f, b), Problem{}, opt);
}

SolveResult solve_box_fixed_size(const WeightField& f, const Box& b, std::size_t k, const SolverOptions& opt) {
  if (k == 0 || k > b.volume()) throw PreconditionError("animal size must lie in [1, side^d]");
  return dispatch(CellGraph::from_box(f, b), Problem{k}, opt);
}

std::vector<double> box_fixed_size_profile(const WeightField& f, const Box& b, std::size_t k_max,
                                           const SolverOptions& opt) {
  const CellGraph g = CellGraph::from_box(f, b);
  k_max = std::min(k_max, g.size());
  if (opt.method != ExactMethod::Enumeration && profile_supported(g)) return profile_fixed(g, k_max, {});
  std::vector<double> best(k_max, -std::numeric_limits<double>::infinity());
  enumerate_subsets(
      g, std::nullopt,
      [&](std::span<const std::uint32_t> s) {
        if (s.size() <= k_max) best[s.size() - 1] = std::max(best[s.size() - 1], g.weight_of(s));
      },
      opt.max_nodes);
  return best;
}

std::vector<Animal> enumerate_animals(const WeightField& f, const Box& b, std::optional<std::size_t> k,
                                      std::optional<Site> root, std::uint64_t cap) {
  CellGraph g = CellGraph::from_box(f, b);
  if (root) {
    if (!b.contains(*root)) throw PreconditionError("root outside the box");
    g.set_root(static_cast<std::uint32_t>(g.window().index(*root)));
  }
  std::vector<Animal> out;
  enumerate_subsets(
      g, k,
      [&](std::span<const std::uint32_t> s) {
        out.push_back(Animal{g.region_of(s), g.weight_of(s)});
      },
      cap);
  return out;
}

Animal concatenate(const Animal& a1, const Region& path, const Animal& a2, const WeightField& f) {
  Region all = a1.sites.unite(path).unite(a2.sites);
  if (!is_connected(all, Adjacency::NearestNeighbor)) throw PreconditionError("concatenation is not connected");
  Animal out;
  if (a1.sites.disjoint(a2.sites)) {
    out.weight = a1.weight + a2.weight + animal_weight(f, path.minus(a1.sites.unite(a2.sites)));
  } else {
    out.weight = animal_weight(f, all);
  }
  out.sites = std::move(all);
  return out;
}

}  // namespace gla
