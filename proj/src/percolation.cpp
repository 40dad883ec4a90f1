#include "gla/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "gla/hash.hpp"
#include "gla/simd.hpp"

namespace gla {

SiteMask::SiteMask(Window w, std::vector<std::uint8_t> open) : window_(std::move(w)), open_(std::move(open)) {
  if (open_.size() != window_.volume()) throw PreconditionError("mask size does not match window");
}

SiteMask SiteMask::white_sites(const WeightField& f, const Window& w, double lambda) {
  const auto scores = f.scores(w);
  std::vector<std::uint8_t> open(scores.size());
  simd::active().threshold_mask(scores.data(), scores.size(), -lambda, open.data());
  return {w, std::move(open)};
}

SiteMask SiteMask::independent(std::uint64_t seed, double p, const Window& w) {
  const WeightField f(seed, DistributionSpec::uniform(0, 1), w.dim());
  const auto u = f.uniforms(w);
  std::vector<std::uint8_t> open(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) open[i] = u[i] < p;
  return {w, std::move(open)};
}

SiteMask SiteMask::from_region(const Window& w, const Region& open) { return {w, w.mask_of(open)}; }

std::size_t SiteMask::open_count() const {
  return static_cast<std::size_t>(std::count(open_.begin(), open_.end(), std::uint8_t{1}));
}

Region ClusterLabeling::cluster(std::int32_t id) const {
  std::vector<std::uint8_t> m(label.size());
  for (std::size_t i = 0; i < label.size(); ++i) m[i] = label[i] == id;
  return window.region_of(m);
}

Region ClusterLabeling::cluster_of(const Site& s) const {
  const auto id = label_of(s);
  return id < 0 ? Region(window.dim()) : cluster(id);
}

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // the root is always the smallest index of its class
  }
};

}  // namespace

ClusterLabeling label_clusters(const SiteMask& mask, Adjacency adj) {
  const auto& w = mask.window();
  UnionFind uf(w.volume());
  for (std::size_t i = 0; i < w.volume(); ++i) {
    if (!mask.open_at(i)) continue;
    w.for_each_neighbor(i, adj, [&](std::size_t j) {
      if (j > i && mask.open_at(j)) uf.unite(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    });
  }
  ClusterLabeling out{w, adj, std::vector<std::int32_t>(w.volume(), -1), {}};
  std::vector<std::int32_t> id_of_root(w.volume(), -1);
  for (std::size_t i = 0; i < w.volume(); ++i) {
    if (!mask.open_at(i)) continue;
    const auto r = uf.find(static_cast<std::uint32_t>(i));
    if (id_of_root[r] < 0) {
      id_of_root[r] = static_cast<std::int32_t>(out.sizes.size());
      out.sizes.push_back(0);
    }
    out.label[i] = id_of_root[r];
    ++out.sizes[static_cast<std::size_t>(id_of_root[r])];
  }
  return out;
}

namespace {

constexpr std::uint32_t kUnseen = kUnreached;

// BFS from the open sites of a; returns the first open site of b reached and
// the parent array.
std::optional<std::size_t> bfs(const SiteMask& mask, const Region& a, const Region& b, std::size_t cutoff,
                               std::vector<std::uint32_t>& parent, std::vector<std::uint32_t>& dist) {
  const auto& w = mask.window();
  parent.assign(w.volume(), kUnseen);
  dist.assign(w.volume(), kUnseen);
  const auto target = w.mask_of(b);
  std::deque<std::size_t> q;
  for (const auto& s : a.sites()) {
    if (!mask.open(s)) continue;
    const auto i = w.index(s);
    if (dist[i] != kUnseen) continue;
    dist[i] = 1;
    parent[i] = static_cast<std::uint32_t>(i);
    q.push_back(i);
  }
  if (cutoff == 0) return std::nullopt;
  while (!q.empty()) {
    const auto i = q.front();
    q.pop_front();
    if (target[i]) return i;
    if (dist[i] >= cutoff) continue;
    w.for_each_neighbor(i, Adjacency::NearestNeighbor, [&](std::size_t j) {
      if (dist[j] != kUnseen || !mask.open_at(j)) return;
      dist[j] = dist[i] + 1;
      parent[j] = static_cast<std::uint32_t>(i);
      q.push_back(j);
    });
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::uint32_t> distance_field(const SiteMask& mask, const Region& sources, std::size_t cutoff) {
  std::vector<std::uint32_t> parent, dist;
  bfs(mask, sources, Region(sources.dim()), cutoff, parent, dist);
  for (auto& x : dist)
    if (x != kUnseen && x > cutoff) x = kUnseen;
  return dist;
}

std::optional<std::size_t> chemical_distance(const SiteMask& mask, const Region& a, const Region& b,
                                             std::size_t cutoff) {
  std::vector<std::uint32_t> parent, dist;
  const auto hit = bfs(mask, a, b, cutoff, parent, dist);
  if (!hit) return std::nullopt;
  return dist[*hit];
}

std::optional<std::vector<Site>> chemical_path(const SiteMask& mask, const Region& a, const Region& b,
                                               std::size_t cutoff) {
  std::vector<std::uint32_t> parent, dist;
  const auto hit = bfs(mask, a, b, cutoff, parent, dist);
  if (!hit) return std::nullopt;
  std::vector<Site> path;
  for (std::size_t i = *hit;; i = parent[i]) {
    path.push_back(mask.window().site(i));
    if (parent[i] == i) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Region largest_component_in_box(const SiteMask& mask, const Box& box, int margin) {
  if (margin < 0 || box.side <= 2 * margin)
    throw PreconditionError("box side must exceed twice the margin");
  Site lo = box.anchor;
  for (int i = 0; i < lo.dim; ++i) lo[i] += margin;
  const Box inner(lo, box.side - 2 * margin);
  Region open(box.dim());
  std::vector<std::uint64_t> keys;
  for (const auto& s : inner.sites())
    if (mask.open(s)) keys.push_back(pack(s));
  open = Region::from_keys(box.dim(), std::move(keys));
  Region best(box.dim());
  for (auto& c : components(open, Adjacency::NearestNeighbor))
    if (c.size() > best.size()) best = std::move(c);
  return best;
}

ThetaEstimate estimate_theta(double p, int n, std::size_t reps, std::uint64_t master_seed, int dim) {
  if (n < 1 || reps == 0) throw PreconditionError("theta needs n >= 1 and reps >= 1");
  const Site o = Site::origin(dim);
  Site lo = o;
  for (int i = 0; i < dim; ++i) lo[i] = -n;
  const Window w = Window::from_box(Box(lo, 2 * n + 1));
  std::vector<double> hits;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto mask = SiteMask::independent(replica_seed(master_seed, r), p, w);
    bool reached = false;
    if (mask.open(o)) {
      std::vector<std::uint8_t> seen(w.volume(), 0);
      std::vector<std::size_t> stack{w.index(o)};
      seen[stack.back()] = 1;
      while (!stack.empty() && !reached) {
        const auto i = stack.back();
        stack.pop_back();
        if (w.on_hull(i)) reached = true;
        w.for_each_neighbor(i, Adjacency::NearestNeighbor, [&](std::size_t j) {
          if (!seen[j] && mask.open_at(j)) {
            seen[j] = 1;
            stack.push_back(j);
          }
        });
      }
    }
    hits.push_back(reached ? 1.0 : 0.0);
  }
  const auto s = summarize(hits);
  return {s.mean, s.ci, reps};
}

EstimateSeries component_density_series(double p, int margin, const std::vector<int>& n_list, std::size_t reps,
                                        std::uint64_t master_seed, int dim) {
  EstimateSeries out("P_nC_density", dim);
  for (int n : n_list) {
    const Box b(Site::origin(dim), n);
    for (std::size_t r = 0; r < reps; ++r) {
      const auto seed = replica_seed(master_seed, r);
      const auto mask = SiteMask::independent(seed, p, Window::from_box(b));
      out.add(n, seed, static_cast<double>(largest_component_in_box(mask, b, margin).size()));
    }
  }
  out.sort();
  return out;
}

std::optional<Site> persistent_site(double p, int margin, int n0, int n1, std::uint64_t seed, int dim) {
  if (n0 > n1) throw PreconditionError("empty scale range");
  const auto mask = SiteMask::independent(seed, p, Window::from_box(Box(Site::origin(dim), n1)));
  std::optional<Region> common;
  for (int n = n0; n <= n1; ++n) {
    const auto comp = largest_component_in_box(mask, Box(Site::origin(dim), n), margin);
    common = common ? common->intersect(comp) : comp;
    if (common->empty()) return std::nullopt;
  }
  return common->at(0);
}

}  // namespace gla
