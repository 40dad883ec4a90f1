// Greedy accretion followed by simulated annealing over connected sets.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

#include "gla/animal.hpp"
#include "gla/hash.hpp"
#include "solver_internal.hpp"

namespace gla {

namespace {

constexpr std::size_t kFullCheckLimit = 256;

class ConnectedSet {
 public:
  explicit ConnectedSet(const CellGraph& g)
      : g_(g), in_(g.size(), 0), mpos_(g.size(), -1), cnt_(g.size(), 0), bpos_(g.size(), -1) {}

  void clear() {
    while (!members_.empty()) remove(members_.back());
    weight_ = 0;
  }

  void assign(std::span<const std::uint32_t> verts) {
    clear();
    for (auto v : verts) add(v);
    weight_ = g_.weight_of(verts);
  }

  bool contains(std::uint32_t v) const { return in_[v] != 0; }
  std::size_t size() const { return members_.size(); }
  const std::vector<std::uint32_t>& members() const { return members_; }
  const std::vector<std::uint32_t>& frontier() const { return bnd_; }
  std::uint32_t inside_neighbors(std::uint32_t v) const { return cnt_[v]; }
  double weight() const { return weight_; }

  void add(std::uint32_t v) {
    in_[v] = 1;
    mpos_[v] = static_cast<std::int32_t>(members_.size());
    members_.push_back(v);
    weight_ += g_.score(v);
    if (bpos_[v] >= 0) drop_frontier(v);
    for (auto nb : g_.adjacent(v)) {
      ++cnt_[nb];
      if (!in_[nb] && bpos_[nb] < 0) push_frontier(nb);
    }
  }

  void remove(std::uint32_t v) {
    in_[v] = 0;
    const auto pos = static_cast<std::size_t>(mpos_[v]);
    members_[pos] = members_.back();
    mpos_[members_[pos]] = static_cast<std::int32_t>(pos);
    members_.pop_back();
    mpos_[v] = -1;
    weight_ -= g_.score(v);
    for (auto nb : g_.adjacent(v)) {
      --cnt_[nb];
      if (!in_[nb] && cnt_[nb] == 0 && bpos_[nb] >= 0) drop_frontier(nb);
    }
    if (cnt_[v] > 0) push_frontier(v);
  }

  // Whether the set stays connected without v (conservative for large sets).
  bool removable(std::uint32_t v) {
    if (g_.root() && *g_.root() == v) return false;
    if (members_.size() <= 1) return false;
    scratch_nb_.clear();
    for (auto nb : g_.adjacent(v))
      if (in_[nb]) scratch_nb_.push_back(nb);
    if (scratch_nb_.size() <= 1) return scratch_nb_.size() == 1;
    // Members within graph distance two of v, excluding v.
    local_.clear();
    for (auto a : g_.adjacent(v)) {
      if (in_[a]) local_.push_back(a);
      for (auto b : g_.adjacent(a))
        if (b != v && in_[b]) local_.push_back(b);
    }
    std::sort(local_.begin(), local_.end());
    local_.erase(std::unique(local_.begin(), local_.end()), local_.end());
    if (reaches_all(scratch_nb_[0], v, [&](std::uint32_t u) { return std::binary_search(local_.begin(), local_.end(), u); }))
      return true;
    if (members_.size() > kFullCheckLimit) return false;
    return reaches_all(scratch_nb_[0], v, [&](std::uint32_t u) { return in_[u] != 0; }, true);
  }

 private:
  template <class Inside>
  bool reaches_all(std::uint32_t from, std::uint32_t skip, Inside inside, bool whole = false) {
    visited_.clear();
    queue_.clear();
    visited_.push_back(from);
    queue_.push_back(from);
    while (!queue_.empty()) {
      const auto cur = queue_.front();
      queue_.pop_front();
      for (auto nb : g_.adjacent(cur)) {
        if (nb == skip || !inside(nb)) continue;
        if (std::find(visited_.begin(), visited_.end(), nb) != visited_.end()) continue;
        visited_.push_back(nb);
        queue_.push_back(nb);
      }
    }
    if (whole) return visited_.size() == members_.size() - 1;
    for (auto nb : scratch_nb_)
      if (std::find(visited_.begin(), visited_.end(), nb) == visited_.end()) return false;
    return true;
  }

  void push_frontier(std::uint32_t v) {
    bpos_[v] = static_cast<std::int32_t>(bnd_.size());
    bnd_.push_back(v);
  }
  void drop_frontier(std::uint32_t v) {
    const auto pos = static_cast<std::size_t>(bpos_[v]);
    bnd_[pos] = bnd_.back();
    bpos_[bnd_[pos]] = static_cast<std::int32_t>(pos);
    bnd_.pop_back();
    bpos_[v] = -1;
  }

  const CellGraph& g_;
  std::vector<std::uint8_t> in_;
  std::vector<std::uint32_t> members_;
  std::vector<std::int32_t> mpos_;
  std::vector<std::uint32_t> cnt_;
  std::vector<std::uint32_t> bnd_;
  std::vector<std::int32_t> bpos_;
  double weight_ = 0;
  std::vector<std::uint32_t> scratch_nb_, local_, visited_;
  std::deque<std::uint32_t> queue_;
};

std::vector<std::uint32_t> sorted_copy(const std::vector<std::uint32_t>& v) {
  std::vector<std::uint32_t> s = v;
  std::sort(s.begin(), s.end());
  return s;
}

// Positive components joined to the current set along cheapest paths while
// the attachment pays for itself.
std::vector<std::uint32_t> greedy_free(const CellGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::int32_t> comp(n, -1);
  std::vector<std::vector<std::uint32_t>> comps;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (g.score(v) <= 0 || comp[v] >= 0) continue;
    const auto id = static_cast<std::int32_t>(comps.size());
    comps.emplace_back();
    std::deque<std::uint32_t> q{v};
    comp[v] = id;
    while (!q.empty()) {
      const auto cur = q.front();
      q.pop_front();
      comps.back().push_back(cur);
      for (auto nb : g.adjacent(cur))
        if (g.score(nb) > 0 && comp[nb] < 0) {
          comp[nb] = id;
          q.push_back(nb);
        }
    }
  }
  std::vector<std::uint8_t> in(n, 0);
  std::vector<std::uint32_t> set;
  auto take = [&](std::uint32_t v) {
    if (!in[v]) {
      in[v] = 1;
      set.push_back(v);
    }
  };
  if (g.root()) {
    take(*g.root());
    if (comp[*g.root()] >= 0)
      for (auto v : comps[static_cast<std::size_t>(comp[*g.root()])]) take(v);
  } else if (comps.empty()) {
    std::uint32_t arg = 0;
    for (std::uint32_t v = 1; v < n; ++v)
      if (g.score(v) > g.score(arg)) arg = v;
    take(arg);
    return set;
  } else {
    std::size_t best = 0;
    double best_sum = -1;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      double s = 0;
      for (auto v : comps[c]) s += g.score(v);
      if (s > best_sum + kWeightTol) {
        best_sum = s;
        best = c;
      }
    }
    for (auto v : comps[best]) take(v);
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n);
  std::vector<std::int64_t> parent(n);
  while (true) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(parent.begin(), parent.end(), -1);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (auto v : set) {
      dist[v] = 0;
      pq.push({0.0, v});
    }
    while (!pq.empty()) {
      auto [d, cur] = pq.top();
      pq.pop();
      if (d > dist[cur]) continue;
      for (auto nb : g.adjacent(cur)) {
        const double nd = d + std::max(0.0, -g.score(nb));
        if (nd < dist[nb]) {
          dist[nb] = nd;
          parent[nb] = cur;
          pq.push({nd, nb});
        }
      }
    }
    double best_profit = kWeightTol;
    std::int64_t best_comp = -1;
    std::uint32_t best_entry = 0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      double gain = 0;
      double entry_cost = inf;
      std::uint32_t entry = 0;
      for (auto v : comps[c]) {
        if (!in[v]) gain += g.score(v);
        if (dist[v] < entry_cost) {
          entry_cost = dist[v];
          entry = v;
        }
      }
      if (gain <= 0 || !std::isfinite(entry_cost)) continue;
      const double profit = gain - entry_cost;
      if (profit > best_profit) {
        best_profit = profit;
        best_comp = static_cast<std::int64_t>(c);
        best_entry = entry;
      }
    }
    if (best_comp < 0) break;
    for (std::int64_t v = best_entry; v >= 0 && !in[static_cast<std::size_t>(v)]; v = parent[static_cast<std::size_t>(v)])
      take(static_cast<std::uint32_t>(v));
    for (auto v : comps[static_cast<std::size_t>(best_comp)]) take(v);
  }
  return set;
}

// Drops non-positive vertices whose removal keeps the set connected.
void prune(ConnectedSet& s, const CellGraph& g) {
  bool changed = true;
  while (changed) {
    changed = false;
    auto members = sorted_copy(s.members());
    for (auto v : members) {
      if (g.score(v) <= 0 && s.size() > 1 && s.removable(v)) {
        s.remove(v);
        changed = true;
      }
    }
  }
}

// Leaves of a BFS spanning tree are always removable.
std::vector<std::uint32_t> tree_leaves(const ConnectedSet& s, const CellGraph& g) {
  const auto& mem = s.members();
  std::uint32_t start = g.root() ? *g.root() : *std::min_element(mem.begin(), mem.end());
  std::vector<std::uint32_t> order{start};
  std::vector<std::uint32_t> children_count;
  std::vector<std::uint8_t> seen(g.size(), 0);
  std::vector<std::int64_t> par(g.size(), -1);
  seen[start] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto nb : g.adjacent(order[i]))
      if (s.contains(nb) && !seen[nb]) {
        seen[nb] = 1;
        par[nb] = order[i];
        order.push_back(nb);
      }
  std::vector<std::uint8_t> has_child(g.size(), 0);
  for (auto v : order)
    if (par[v] >= 0) has_child[static_cast<std::size_t>(par[v])] = 1;
  std::vector<std::uint32_t> leaves;
  for (auto v : order)
    if (!has_child[v] && v != start) leaves.push_back(v);
  if (leaves.empty() && order.size() == 1 && !g.root()) leaves.push_back(start);
  return leaves;
}

void shrink_to(ConnectedSet& s, const CellGraph& g, std::size_t k) {
  while (s.size() > k) {
    auto leaves = tree_leaves(s, g);
    std::uint32_t worst = leaves.front();
    for (auto v : leaves)
      if (g.score(v) < g.score(worst) || (g.score(v) == g.score(worst) && v > worst)) worst = v;
    s.remove(worst);
  }
}

void grow_to(ConnectedSet& s, const CellGraph& g, std::size_t k) {
  while (s.size() < k && !s.frontier().empty()) {
    std::uint32_t best = s.frontier().front();
    for (auto v : s.frontier())
      if (g.score(v) > g.score(best) || (g.score(v) == g.score(best) && v < best)) best = v;
    s.add(best);
  }
}

struct Best {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> verts;

  void offer(const ConnectedSet& s, bool prefer_small) {
    const double w = s.weight();
    if (verts.empty() || w > value + kWeightTol ||
        (prefer_small && w >= value - kWeightTol && s.size() < verts.size())) {
      value = w;
      verts = s.members();
    }
  }
};

SolveResult finish(const CellGraph& g, std::vector<std::uint32_t> verts, std::uint64_t moves) {
  std::sort(verts.begin(), verts.end());
  SolveResult res;
  res.witness.sites = g.region_of(verts);
  res.witness.weight = g.weight_of(verts);
  res.value = res.witness.weight;
  res.optimal = false;
  res.nodes_explored = moves;
  res.method = "heuristic";
  return res;
}

SolveResult run_heuristic(const CellGraph& g, const Problem& pb, const SolverOptions& opt) {
  if (g.size() == 0) throw PreconditionError("empty instance");
  double max_abs = 0;
  for (double x : g.scores()) max_abs = std::max(max_abs, std::abs(x));
  const double t0 = max_abs > 0 ? 2 * max_abs : 1.0;
  ConnectedSet s(g);
  Best best;
  std::uint64_t moves = 0;

  if (!pb.size) {
    const auto start = greedy_free(g);
    s.assign(start);
    prune(s, g);
    const auto seed_set = s.members();
    best.offer(s, true);
    for (int r = 0; r < opt.restarts; ++r) {
      CounterRng rng(opt.heuristic_seed ^ mix64(static_cast<std::uint64_t>(r) + 1));
      s.assign(seed_set);
      double temp = t0;
      for (int m = 0; m < opt.moves_per_restart; ++m, temp *= opt.cooling) {
        ++moves;
        if (rng.uniform() < 0.5) {
          if (s.frontier().empty()) continue;
          const auto v = s.frontier()[rng.below(s.frontier().size())];
          const double delta = g.score(v);
          if (delta >= 0 || rng.uniform() < std::exp(delta / temp)) s.add(v);
        } else {
          const auto u = s.members()[rng.below(s.size())];
          const double delta = -g.score(u);
          if (!(delta >= 0 || rng.uniform() < std::exp(delta / temp))) continue;
          if (!s.removable(u)) continue;
          s.remove(u);
        }
        best.offer(s, true);
      }
    }
    s.assign(best.verts);
    prune(s, g);
    return finish(g, s.members(), moves);
  }

  const std::size_t k = *pb.size;
  if (k == 0 || k > g.size()) throw PreconditionError("animal size out of range");
  if (k == 1) {
    std::uint32_t arg = g.root() ? *g.root() : 0;
    if (!g.root())
      for (std::uint32_t v = 1; v < g.size(); ++v)
        if (g.score(v) > g.score(arg)) arg = v;
    return finish(g, {arg}, 0);
  }

  // Starting points: greedy growth from seeds and the resized free solution.
  std::vector<std::uint32_t> seeds;
  if (g.root()) {
    seeds.push_back(*g.root());
  } else {
    std::vector<std::uint32_t> order(g.size());
    for (std::uint32_t v = 0; v < g.size(); ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return g.score(a) > g.score(b); });
    seeds.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(8, order.size())));
  }
  for (auto seed : seeds) {
    s.assign(std::vector<std::uint32_t>{seed});
    grow_to(s, g, k);
    if (s.size() == k) best.offer(s, false);
  }
  {
    s.assign(greedy_free(g));
    if (s.size() > k) shrink_to(s, g, k);
    else grow_to(s, g, k);
    if (s.size() == k) best.offer(s, false);
  }
  if (best.verts.empty()) throw PreconditionError("no connected set of the requested size");
  const auto seed_set = best.verts;
  for (int r = 0; r < opt.restarts; ++r) {
    CounterRng rng(opt.heuristic_seed ^ mix64(static_cast<std::uint64_t>(r) + 1));
    s.assign(seed_set);
    double temp = t0;
    for (int m = 0; m < opt.moves_per_restart; ++m, temp *= opt.cooling) {
      ++moves;
      const auto u = s.members()[rng.below(s.size())];
      if (s.frontier().empty()) break;
      const auto w = s.frontier()[rng.below(s.frontier().size())];
      const double delta = g.score(w) - g.score(u);
      if (!(delta >= 0 || rng.uniform() < std::exp(delta / temp))) continue;
      // w must keep a neighbour inside once u leaves.
      bool touches_u = false;
      for (auto nb : g.adjacent(w)) touches_u = touches_u || nb == u;
      if (s.inside_neighbors(w) - (touches_u ? 1u : 0u) == 0) continue;
      if (!s.removable(u)) continue;
      s.remove(u);
      s.add(w);
      best.offer(s, false);
    }
  }
  return finish(g, best.verts, moves);
}

}  // namespace

SolveResult solve_heuristic(const CellGraph& g, const Problem& pb, const SolverOptions& opt) {
  return run_heuristic(g, pb, opt);
}

namespace detail {

Incumbent quick_incumbent(const CellGraph& g, const Problem& pb, std::uint64_t seed) {
  SolverOptions quick;
  quick.restarts = 2;
  quick.moves_per_restart = 2000;
  quick.heuristic_seed = seed;
  const auto r = run_heuristic(g, pb, quick);
  std::vector<std::uint32_t> verts;
  for (auto k : r.witness.sites.keys()) verts.push_back(static_cast<std::uint32_t>(g.window().index(unpack(k, g.dim()))));
  return {r.value, verts};
}

}  // namespace detail

}  // namespace gla
