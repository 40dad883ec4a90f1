#include <algorithm>

#include "gla/animal.hpp"

namespace gla {

CellGraph CellGraph::from_box(const WeightField& f, const Box& b) {
  if (f.dim() != b.dim()) throw PreconditionError("field and box dimensions differ");
  return from_scores(b, f.scores(Window::from_box(b)));
}

CellGraph CellGraph::from_scores(const Box& b, std::vector<double> scores) {
  CellGraph g;
  g.box_ = b;
  g.window_ = Window::from_box(b);
  if (scores.size() != g.window_.volume()) throw PreconditionError("score grid does not match the box");
  g.score_ = std::move(scores);
  g.build_adjacency();
  return g;
}

CellGraph CellGraph::rooted_ball(const WeightField& f, const Site& root, int n) {
  if (n < 1) throw PreconditionError("rooted animal size must be >= 1");
  Site anchor = root;
  for (int i = 0; i < root.dim; ++i) anchor[i] -= n - 1;
  CellGraph g = from_box(f, Box(anchor, 2 * n - 1));
  g.root_ = static_cast<std::uint32_t>(g.window_.index(root));
  return g;
}

void CellGraph::build_adjacency() {
  start_.assign(score_.size() + 1, 0);
  adj_.clear();
  for (std::size_t v = 0; v < score_.size(); ++v) {
    window_.for_each_neighbor(v, Adjacency::NearestNeighbor,
                              [&](std::size_t nb) { adj_.push_back(static_cast<std::uint32_t>(nb)); });
    start_[v + 1] = static_cast<std::uint32_t>(adj_.size());
  }
}

Region CellGraph::region_of(std::span<const std::uint32_t> verts) const {
  std::vector<std::uint64_t> keys;
  keys.reserve(verts.size());
  for (auto v : verts) keys.push_back(pack(window_.site(v)));
  return Region::from_keys(dim(), std::move(keys));
}

double CellGraph::weight_of(std::span<const std::uint32_t> verts) const {
  std::vector<std::uint32_t> sorted(verts.begin(), verts.end());
  std::sort(sorted.begin(), sorted.end());
  double w = 0;
  for (auto v : sorted) w += score_[v];
  return w;
}

bool better_solution(double v1, std::span<const std::uint32_t> s1, double v2, std::span<const std::uint32_t> s2,
                     bool prefer_small) {
  if (v1 > v2 + kWeightTol) return true;
  if (v1 < v2 - kWeightTol) return false;
  if (prefer_small && s1.size() != s2.size()) return s1.size() < s2.size();
  return std::lexicographical_compare(s1.begin(), s1.end(), s2.begin(), s2.end());
}

Animal make_animal(const WeightField& f, Region sites) {
  if (!is_connected(sites, Adjacency::NearestNeighbor)) throw PreconditionError("animal sites are not connected");
  Animal a;
  a.weight = animal_weight(f, sites);
  a.sites = std::move(sites);
  return a;
}

}  // namespace gla
