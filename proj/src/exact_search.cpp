// Connected-subset enumeration by untried-set growth and the exact
// branch-and-bound built on it.

#include <algorithm>
#include <cmath>
#include <limits>

#include "gla/animal.hpp"
#include "solver_internal.hpp"

namespace gla {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class Grower {
 public:
  using Visit = std::function<bool(const std::vector<std::uint32_t>& cur, double w)>;

  Grower(const CellGraph& g, std::optional<std::size_t> k, std::uint64_t cap)
      : g_(g), k_(k), cap_(cap), seen_(g.size(), 0) {}

  // Runs every anchor; `visit` returns false to prune the subtree below.
  void run(const Visit& visit, const std::function<void(std::uint32_t)>& on_anchor = {}) {
    visit_ = &visit;
    if (g_.root()) {
      grow_from(*g_.root(), false, on_anchor);
    } else {
      for (std::uint32_t a = 0; a < g_.size(); ++a) grow_from(a, true, on_anchor);
    }
  }

  std::uint64_t nodes() const { return nodes_; }
  std::uint32_t anchor() const { return anchor_; }

 private:
  void grow_from(std::uint32_t a, bool ordered, const std::function<void(std::uint32_t)>& on_anchor) {
    anchor_ = a;
    ordered_ = ordered;
    if (on_anchor) on_anchor(a);
    std::fill(seen_.begin(), seen_.end(), 0);
    seen_[a] = 1;
    cur_.clear();
    std::vector<std::uint32_t> untried{a};
    rec(untried, 0.0);
  }

  bool allowed(std::uint32_t v) const { return !ordered_ || v > anchor_; }

  void rec(std::vector<std::uint32_t> untried, double w) {
    while (!untried.empty()) {
      const std::uint32_t v = untried.back();
      untried.pop_back();
      cur_.push_back(v);
      const double nw = w + g_.score(v);
      if (++nodes_ > cap_) throw BudgetExceeded("connected-subset search exceeded its node budget");
      const bool go_on = (*visit_)(cur_, nw);
      if (go_on && (!k_ || cur_.size() < *k_)) {
        std::vector<std::uint32_t> next = untried;
        const std::size_t mark = next.size();
        for (auto nb : g_.adjacent(v)) {
          if (allowed(nb) && !seen_[nb]) {
            seen_[nb] = 1;
            next.push_back(nb);
          }
        }
        rec(next, nw);
        for (std::size_t i = mark; i < next.size(); ++i) seen_[next[i]] = 0;
      }
      cur_.pop_back();
    }
  }

  const CellGraph& g_;
  std::optional<std::size_t> k_;
  std::uint64_t cap_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::uint32_t> cur_;
  std::uint64_t nodes_ = 0;
  std::uint32_t anchor_ = 0;
  bool ordered_ = true;
  const Visit* visit_ = nullptr;
};

}  // namespace

std::uint64_t enumerate_subsets(const CellGraph& g, std::optional<std::size_t> k,
                                const std::function<void(std::span<const std::uint32_t>)>& fn,
                                std::uint64_t cap) {
  if (k && *k == 0) return 0;
  Grower grower(g, k, cap);
  std::uint64_t count = 0;
  std::vector<std::uint32_t> sorted;
  Grower::Visit visit = [&](const std::vector<std::uint32_t>& cur, double) {
    if (!k || cur.size() == *k) {
      sorted.assign(cur.begin(), cur.end());
      std::sort(sorted.begin(), sorted.end());
      ++count;
      fn(sorted);
    }
    return true;
  };
  grower.run(visit);
  return count;
}

namespace detail {

SolveResult branch_and_bound(const CellGraph& g, const Problem& pb, const SolverOptions& opt,
                             const std::optional<Incumbent>& start) {
  const bool fixed = pb.size.has_value();
  const bool prefer_small = !fixed;
  double best = kNegInf;
  std::vector<std::uint32_t> best_set;
  if (start) {
    best = start->value;
    best_set = start->verts;
  }

  // Per-anchor bound tables over the vertices an anchor may still use.
  std::vector<double> top_prefix;
  double pos_allowed = 0;
  double pos_current = 0;
  std::vector<double> pos_stack;
  auto prepare = [&](std::uint32_t a) {
    std::vector<double> vals;
    for (std::uint32_t v = 0; v < g.size(); ++v)
      if (g.root() || v >= a) vals.push_back(g.score(v));
    std::sort(vals.begin(), vals.end(), std::greater<>());
    top_prefix.assign(vals.size() + 1, 0.0);
    pos_allowed = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      top_prefix[i + 1] = top_prefix[i] + vals[i];
      pos_allowed += std::max(0.0, vals[i]);
    }
  };

  Grower grower(g, pb.size, opt.max_nodes);
  std::vector<std::uint32_t> sorted;
  Grower::Visit visit = [&](const std::vector<std::uint32_t>& cur, double w) {
    const std::size_t s = cur.size();
    if (!fixed || s == *pb.size) {
      if (w >= best - 4 * kWeightTol) {
        sorted.assign(cur.begin(), cur.end());
        std::sort(sorted.begin(), sorted.end());
        const double value = g.weight_of(sorted);
        if (best_set.empty() || better_solution(value, sorted, best, best_set, prefer_small)) {
          best = value;
          best_set = sorted;
        }
      }
    }
    double bound;
    if (fixed) {
      const std::size_t r = *pb.size - s;
      if (r == 0) return false;
      if (r >= top_prefix.size()) return false;
      bound = w + top_prefix[r];
    } else {
      pos_current = 0;
      for (auto v : cur) pos_current += std::max(0.0, g.score(v));
      bound = w + (pos_allowed - pos_current);
    }
    return bound >= best - kWeightTol;
  };
  grower.run(visit, prepare);

  SolveResult res;
  if (best_set.empty()) throw PreconditionError("instance has no feasible animal");
  res.value = best;
  res.nodes_explored = grower.nodes();
  res.optimal = true;
  res.method = "branch_and_bound";
  res.witness.sites = g.region_of(best_set);
  res.witness.weight = best;
  return res;
}

}  // namespace detail

}  // namespace gla
