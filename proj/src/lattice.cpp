#include "gla/lattice.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace gla {

namespace {

void check_dim(int d) {
  if (d < 2 || d > kMaxDim) throw PreconditionError("dimension must lie in [2, 4]");
}

// Breadth-first reachability over a window; `blocked` cells are never entered.
std::vector<std::uint8_t> flood(const Window& w, std::span<const std::uint8_t> blocked,
                                const std::vector<std::size_t>& sources, Adjacency adj) {
  std::vector<std::uint8_t> seen(w.volume(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t s : sources) {
    if (!blocked[s] && !seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    w.for_each_neighbor(cur, adj, [&](std::size_t nb) {
      if (!blocked[nb] && !seen[nb]) {
        seen[nb] = 1;
        queue.push_back(nb);
      }
    });
  }
  return seen;
}

bool l_adjacent_to(const Window& w, std::size_t idx, std::span<const std::uint8_t> mask) {
  bool hit = false;
  w.for_each_neighbor(idx, Adjacency::LGraph, [&](std::size_t nb) { hit = hit || mask[nb]; });
  return hit;
}

// Window covering every region passed in.
Window joint_window(std::initializer_list<const Region*> regions) {
  std::optional<std::pair<Site, Site>> acc;
  for (const Region* r : regions) {
    auto b = r->bounds();
    if (!b) continue;
    if (!acc) {
      acc = b;
      continue;
    }
    for (int i = 0; i < b->first.dim; ++i) {
      acc->first[i] = std::min(acc->first[i], b->first[i]);
      acc->second[i] = std::max(acc->second[i], b->second[i]);
    }
  }
  if (!acc) return {};
  std::array<Coord, kMaxDim> ext{};
  for (int i = 0; i < acc->first.dim; ++i)
    ext[static_cast<std::size_t>(i)] = acc->second[i] - acc->first[i] + 1;
  return Window(acc->first, ext);
}

}  // namespace

// ---------------------------------------------------------------------------
// Site

Site::Site(std::initializer_list<Coord> coords) {
  check_dim(static_cast<int>(coords.size()));
  dim = static_cast<int>(coords.size());
  std::copy(coords.begin(), coords.end(), x.begin());
}

Site Site::origin(int d) {
  check_dim(d);
  Site s;
  s.dim = d;
  return s;
}

std::string Site::str() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim; ++i) os << (i ? "," : "") << x[static_cast<std::size_t>(i)];
  os << ')';
  return os.str();
}

Site operator+(const Site& a, const Site& b) {
  Site r = a;
  for (int i = 0; i < a.dim; ++i) r[i] = a[i] + b[i];
  return r;
}

Site operator-(const Site& a, const Site& b) {
  Site r = a;
  for (int i = 0; i < a.dim; ++i) r[i] = a[i] - b[i];
  return r;
}

Coord linf_distance(const Site& a, const Site& b) {
  Coord m = 0;
  for (int i = 0; i < a.dim; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Coord l1_distance(const Site& a, const Site& b) {
  Coord m = 0;
  for (int i = 0; i < a.dim; ++i) m += std::abs(a[i] - b[i]);
  return m;
}

bool packable(const Site& s) {
  for (int i = 0; i < s.dim; ++i)
    if (s[i] < kCoordMin || s[i] > kCoordMax) return false;
  return true;
}

std::uint64_t pack(const Site& s) {
  std::uint64_t key = 0;
  for (int i = 0; i < s.dim; ++i) {
    const auto field = static_cast<std::uint64_t>(static_cast<std::int64_t>(s[i]) - kCoordMin);
    key |= (field & 0xFFFFu) << (16 * (3 - i));
  }
  return key;
}

Site unpack(std::uint64_t key, int dim) {
  Site s = Site::origin(dim);
  for (int i = 0; i < dim; ++i)
    s[i] = static_cast<Coord>(static_cast<std::int64_t>((key >> (16 * (3 - i))) & 0xFFFFu) +
                              kCoordMin);
  return s;
}

const char* to_string(Adjacency adj) {
  return adj == Adjacency::NearestNeighbor ? "nearest_neighbor" : "l_graph";
}

std::vector<Site> neighbor_offsets(int dim, Adjacency adj) {
  check_dim(dim);
  std::vector<Site> out;
  int total = 1;
  for (int i = 0; i < dim; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    Site off = Site::origin(dim);
    int rem = code;
    int nonzero = 0;
    for (int i = dim - 1; i >= 0; --i) {
      off[i] = rem % 3 - 1;
      rem /= 3;
      nonzero += off[i] != 0;
    }
    if (nonzero == 0) continue;
    if (adj == Adjacency::NearestNeighbor && nonzero != 1) continue;
    out.push_back(off);
  }
  return out;
}

std::vector<Site> neighbors(const Site& s, Adjacency adj) {
  std::vector<Site> out;
  for (const Site& off : neighbor_offsets(s.dim, adj)) {
    Site n = s;
    for (int i = 0; i < s.dim; ++i) {
      const std::int64_t v = static_cast<std::int64_t>(s[i]) + off[i];
      if (v < kCoordMin || v > kCoordMax) throw std::out_of_range("neighbour of " + s.str() + " leaves the coordinate range");
      n[i] = static_cast<Coord>(v);
    }
    out.push_back(n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Box

Box::Box(Site a, Coord m) : anchor(a), side(m) {
  if (m < 1) throw PreconditionError("box side must be positive");
}

std::size_t Box::volume() const {
  std::size_t v = 1;
  for (int i = 0; i < dim(); ++i) v *= static_cast<std::size_t>(side);
  return v;
}

bool Box::contains(const Site& s) const {
  for (int i = 0; i < dim(); ++i)
    if (s[i] < anchor[i] || s[i] >= anchor[i] + side) return false;
  return true;
}

std::vector<Site> Box::sites() const {
  const Window w = Window::from_box(*this);
  std::vector<Site> out;
  out.reserve(w.volume());
  for (std::size_t i = 0; i < w.volume(); ++i) out.push_back(w.site(i));
  return out;
}

Site Box::corner(unsigned mask) const {
  Site c = anchor;
  for (int i = 0; i < dim(); ++i)
    if (mask & (1u << i)) c[i] += side - 1;
  return c;
}

// ---------------------------------------------------------------------------
// Region

Region Region::from_sites(int dim, std::span<const Site> sites) {
  Region r(dim);
  r.keys_.reserve(sites.size());
  for (const Site& s : sites) {
    if (s.dim != dim) throw PreconditionError("site dimension mismatch");
    if (!packable(s)) throw std::out_of_range("site " + s.str() + " outside the coordinate range");
    r.keys_.push_back(pack(s));
  }
  std::sort(r.keys_.begin(), r.keys_.end());
  r.keys_.erase(std::unique(r.keys_.begin(), r.keys_.end()), r.keys_.end());
  return r;
}

Region Region::from_keys(int dim, std::vector<std::uint64_t> keys) {
  Region r(dim);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  r.keys_ = std::move(keys);
  return r;
}

Region Region::from_box(const Box& b) {
  const auto s = b.sites();
  return from_sites(b.dim(), s);
}

bool Region::contains(const Site& s) const {
  return packable(s) && contains_key(pack(s));
}

bool Region::contains_key(std::uint64_t key) const {
  return std::binary_search(keys_.begin(), keys_.end(), key);
}

std::vector<Site> Region::sites() const {
  std::vector<Site> out;
  out.reserve(keys_.size());
  for (auto k : keys_) out.push_back(unpack(k, dim_));
  return out;
}

void Region::insert(const Site& s) {
  const auto k = pack(s);
  auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
  if (it == keys_.end() || *it != k) keys_.insert(it, k);
}

void Region::erase(const Site& s) {
  const auto k = pack(s);
  auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
  if (it != keys_.end() && *it == k) keys_.erase(it);
}

Region Region::unite(const Region& other) const {
  Region r(dim_);
  std::set_union(keys_.begin(), keys_.end(), other.keys_.begin(), other.keys_.end(),
                 std::back_inserter(r.keys_));
  return r;
}

Region Region::minus(const Region& other) const {
  Region r(dim_);
  std::set_difference(keys_.begin(), keys_.end(), other.keys_.begin(), other.keys_.end(),
                      std::back_inserter(r.keys_));
  return r;
}

Region Region::intersect(const Region& other) const {
  Region r(dim_);
  std::set_intersection(keys_.begin(), keys_.end(), other.keys_.begin(), other.keys_.end(),
                        std::back_inserter(r.keys_));
  return r;
}

bool Region::disjoint(const Region& other) const { return intersect(other).empty(); }

bool Region::subset_of(const Region& other) const {
  return std::includes(other.keys_.begin(), other.keys_.end(), keys_.begin(), keys_.end());
}

std::optional<std::pair<Site, Site>> Region::bounds() const {
  if (keys_.empty()) return std::nullopt;
  Site lo = at(0);
  Site hi = lo;
  for (auto k : keys_) {
    const Site s = unpack(k, dim_);
    for (int i = 0; i < dim_; ++i) {
      lo[i] = std::min(lo[i], s[i]);
      hi[i] = std::max(hi[i], s[i]);
    }
  }
  return std::make_pair(lo, hi);
}

// ---------------------------------------------------------------------------
// Window

Window::Window(Site lo, std::array<Coord, kMaxDim> extent) : lo_(lo), extent_(extent) {
  const int d = lo.dim;
  check_dim(d);
  volume_ = 1;
  for (int i = d - 1; i >= 0; --i) {
    if (extent_[static_cast<std::size_t>(i)] < 1) throw PreconditionError("window extent must be positive");
    stride_[static_cast<std::size_t>(i)] = volume_;
    volume_ *= static_cast<std::size_t>(extent_[static_cast<std::size_t>(i)]);
  }
  nn_offsets_ = neighbor_offsets(d, Adjacency::NearestNeighbor);
  l_offsets_ = neighbor_offsets(d, Adjacency::LGraph);
  auto deltas = [&](const std::vector<Site>& offs) {
    std::vector<std::ptrdiff_t> out;
    for (const Site& o : offs) {
      std::ptrdiff_t delta = 0;
      for (int i = 0; i < d; ++i)
        delta += static_cast<std::ptrdiff_t>(o[i]) * static_cast<std::ptrdiff_t>(stride_[static_cast<std::size_t>(i)]);
      out.push_back(delta);
    }
    return out;
  };
  nn_delta_ = deltas(nn_offsets_);
  l_delta_ = deltas(l_offsets_);
}

Window Window::from_box(const Box& b) {
  std::array<Coord, kMaxDim> ext{};
  for (int i = 0; i < b.dim(); ++i) ext[static_cast<std::size_t>(i)] = b.side;
  return Window(b.anchor, ext);
}

Window Window::around(const Region& r, Coord pad) {
  auto b = r.bounds();
  if (!b) throw PreconditionError("window around an empty region");
  Site lo = b->first;
  std::array<Coord, kMaxDim> ext{};
  for (int i = 0; i < r.dim(); ++i) {
    lo[i] -= pad;
    ext[static_cast<std::size_t>(i)] = b->second[i] - b->first[i] + 1 + 2 * pad;
  }
  return Window(lo, ext);
}

Window Window::around(const Box& b, Coord pad) {
  Site lo = b.anchor;
  std::array<Coord, kMaxDim> ext{};
  for (int i = 0; i < b.dim(); ++i) {
    lo[i] -= pad;
    ext[static_cast<std::size_t>(i)] = b.side + 2 * pad;
  }
  return Window(lo, ext);
}

bool Window::contains(const Site& s) const {
  if (s.dim != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    const Coord v = s[i] - lo_[i];
    if (v < 0 || v >= extent_[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

std::size_t Window::index(const Site& s) const {
  std::size_t idx = 0;
  for (int i = 0; i < dim(); ++i)
    idx += static_cast<std::size_t>(s[i] - lo_[i]) * stride_[static_cast<std::size_t>(i)];
  return idx;
}

Site Window::site(std::size_t idx) const {
  Site s = lo_;
  for (int i = 0; i < dim(); ++i) {
    s[i] += static_cast<Coord>(idx / stride_[static_cast<std::size_t>(i)]);
    idx %= stride_[static_cast<std::size_t>(i)];
  }
  return s;
}

bool Window::on_hull(std::size_t idx) const {
  for (int i = 0; i < dim(); ++i) {
    const auto c = static_cast<Coord>(idx / stride_[static_cast<std::size_t>(i)]);
    idx %= stride_[static_cast<std::size_t>(i)];
    if (c == 0 || c == extent_[static_cast<std::size_t>(i)] - 1) return true;
  }
  return false;
}

std::vector<std::uint8_t> Window::mask_of(const Region& r) const {
  std::vector<std::uint8_t> m(volume_, 0);
  for (auto k : r.keys()) {
    const Site s = unpack(k, r.dim());
    if (contains(s)) m[index(s)] = 1;
  }
  return m;
}

Region Window::region_of(std::span<const std::uint8_t> mask) const {
  std::vector<std::uint64_t> keys;
  for (std::size_t i = 0; i < volume_; ++i)
    if (mask[i]) keys.push_back(pack(site(i)));
  // Window order is lexicographic, so keys are already sorted.
  return Region::from_keys(dim(), std::move(keys));
}

// ---------------------------------------------------------------------------
// Operations

Box dilated_box(const Box& b, Coord q) {
  if (q < 0) throw PreconditionError("dilation must be non-negative");
  Site a = b.anchor;
  for (int i = 0; i < b.dim(); ++i) a[i] -= q * b.side;
  return Box(a, (2 * q + 1) * b.side);
}

Region box_dilate(const Box& b, Coord q) { return Region::from_box(dilated_box(b, q)); }

std::vector<Region> components(const Region& r, Adjacency adj) {
  std::vector<Region> out;
  if (r.empty()) return out;
  const Window w = Window::around(r, 0);
  const auto member = w.mask_of(r);
  std::vector<std::uint8_t> seen(w.volume(), 0);
  for (std::size_t i = 0; i < w.volume(); ++i) {
    if (!member[i] || seen[i]) continue;
    std::vector<std::uint64_t> keys;
    std::deque<std::size_t> queue{i};
    seen[i] = 1;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      keys.push_back(pack(w.site(cur)));
      w.for_each_neighbor(cur, adj, [&](std::size_t nb) {
        if (member[nb] && !seen[nb]) {
          seen[nb] = 1;
          queue.push_back(nb);
        }
      });
    }
    out.push_back(Region::from_keys(r.dim(), std::move(keys)));
  }
  return out;
}

bool is_connected(const Region& r, Adjacency adj) {
  if (r.size() <= 1) return true;
  const Window w = Window::around(r, 0);
  const auto member = w.mask_of(r);
  std::vector<std::uint8_t> blocked(member.size());
  for (std::size_t i = 0; i < member.size(); ++i) blocked[i] = !member[i];
  const auto seen = flood(w, blocked, {w.index(r.at(0))}, adj);
  std::size_t reached = 0;
  for (auto s : seen) reached += s;
  return reached == r.size();
}

Region boundary(const Region& a, const std::optional<Region>& within) {
  std::vector<std::uint64_t> keys;
  for (const Site& s : a.sites()) {
    for (const Site& n : neighbors(s, Adjacency::NearestNeighbor)) {
      if (a.contains(n)) continue;
      if (within && !within->contains(n)) continue;
      keys.push_back(pack(n));
    }
  }
  return Region::from_keys(a.dim(), std::move(keys));
}

Region exterior_boundary(const Region& c) {
  if (c.empty()) return Region(c.dim());
  const Window w = Window::around(c, 2);
  const auto blocked = w.mask_of(c);
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < w.volume(); ++i)
    if (w.on_hull(i)) sources.push_back(i);
  const auto outside = flood(w, blocked, sources, Adjacency::NearestNeighbor);
  std::vector<std::uint8_t> result(w.volume(), 0);
  for (std::size_t i = 0; i < w.volume(); ++i)
    result[i] = outside[i] && l_adjacent_to(w, i, blocked);
  return w.region_of(result);
}

Region visible_boundary(const Region& c, const Site& x, const Box& box) {
  if (!box.contains(x)) throw PreconditionError("visible_boundary: x lies outside the box");
  if (c.contains(x)) throw PreconditionError("visible_boundary: x lies in c");
  const Window w = Window::from_box(box);
  for (auto k : c.keys())
    if (!box.contains(unpack(k, c.dim()))) throw PreconditionError("visible_boundary: c not inside the box");
  const auto blocked = w.mask_of(c);
  const auto seen = flood(w, blocked, {w.index(x)}, Adjacency::NearestNeighbor);
  std::vector<std::uint8_t> result(w.volume(), 0);
  for (std::size_t i = 0; i < w.volume(); ++i) result[i] = seen[i] && l_adjacent_to(w, i, blocked);
  return w.region_of(result);
}

bool separates(const Region& e, const Region& c, const Region& d_set, const Region& domain,
               bool proper) {
  if (c.empty() || d_set.empty() || domain.empty()) return true;
  const Window w = joint_window({&domain, &c, &d_set});
  const auto in_domain = w.mask_of(domain);
  const auto in_c = w.mask_of(c);
  const auto in_d = w.mask_of(d_set);
  const auto in_e = w.mask_of(e);
  std::vector<std::uint8_t> blocked(w.volume());
  for (std::size_t i = 0; i < w.volume(); ++i) {
    const bool cut = proper ? (in_e[i] && !in_c[i] && !in_d[i]) : in_e[i];
    blocked[i] = !in_domain[i] || cut;
  }
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < w.volume(); ++i)
    if (in_c[i] && !blocked[i]) sources.push_back(i);
  const auto seen = flood(w, blocked, sources, Adjacency::NearestNeighbor);
  for (std::size_t i = 0; i < w.volume(); ++i)
    if (seen[i] && in_d[i]) return false;
  return true;
}

std::optional<Region> connected_separating_subset(const Region& e, const Region& c,
                                                  const Region& d_set, const Region& domain) {
  if (!is_connected(c, Adjacency::NearestNeighbor) || !is_connected(d_set, Adjacency::NearestNeighbor))
    throw PreconditionError("connected_separating_subset: c and d_set must be connected");
  if (!c.disjoint(d_set)) throw PreconditionError("connected_separating_subset: c and d_set intersect");
  if (!e.disjoint(d_set)) throw PreconditionError("connected_separating_subset: e meets d_set");
  if (!separates(e, c, d_set, domain, false)) return std::nullopt;

  // First-hit set: the part of e met first by paths leaving c.
  Region hit = c.intersect(e);
  const Region c_free = c.minus(e).intersect(domain);
  if (!c_free.empty()) {
    const Window w = joint_window({&domain, &c});
    const auto in_domain = w.mask_of(domain);
    const auto in_e = w.mask_of(e);
    std::vector<std::uint8_t> blocked(w.volume());
    for (std::size_t i = 0; i < w.volume(); ++i) blocked[i] = !in_domain[i] || in_e[i];
    std::vector<std::size_t> sources;
    for (auto k : c_free.keys()) sources.push_back(w.index(unpack(k, c.dim())));
    const auto reach = flood(w, blocked, sources, Adjacency::NearestNeighbor);
    hit = hit.unite(boundary(w.region_of(reach), domain));
  }
  for (const Region& comp : components(hit, Adjacency::LGraph))
    if (separates(comp, c, d_set, domain, false)) return comp;
  for (const Region& comp : components(e, Adjacency::LGraph))
    if (separates(comp, c, d_set, domain, false)) return comp;
  throw std::logic_error("connected_separating_subset: no L-connected separating component found");
}

Region enclosed_by(const Region& a) {
  if (a.empty()) return Region(a.dim());
  const Window w = Window::around(a, 1);
  const auto blocked = w.mask_of(a);
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < w.volume(); ++i)
    if (w.on_hull(i)) sources.push_back(i);
  const auto outside = flood(w, blocked, sources, Adjacency::NearestNeighbor);
  std::vector<std::uint8_t> inner(w.volume());
  for (std::size_t i = 0; i < w.volume(); ++i) inner[i] = !outside[i] && !blocked[i];
  return w.region_of(inner);
}

}  // namespace gla
