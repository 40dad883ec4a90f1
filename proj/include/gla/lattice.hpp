#pragma once

// Integer lattice geometry: sites, boxes, finite regions, dense windows and
// the connectivity / boundary / separation predicates built on them.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gla {

inline constexpr int kMaxDim = 4;
using Coord = std::int32_t;

// Coordinates must stay inside this range so that sites pack into 64 bits.
inline constexpr Coord kCoordMin = -32768;
inline constexpr Coord kCoordMax = 32767;

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Site {
  int dim = 2;
  std::array<Coord, kMaxDim> x{};

  Site() = default;
  Site(std::initializer_list<Coord> coords);
  static Site origin(int dim);

  Coord operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
  Coord& operator[](int i) { return x[static_cast<std::size_t>(i)]; }

  friend bool operator==(const Site&, const Site&) = default;
  friend std::strong_ordering operator<=>(const Site&, const Site&) = default;

  std::string str() const;
};

Site operator+(const Site& a, const Site& b);
Site operator-(const Site& a, const Site& b);

// Sup-norm and l1 distances.
Coord linf_distance(const Site& a, const Site& b);
Coord l1_distance(const Site& a, const Site& b);

// Packs coordinates into 16-bit fields, first coordinate most significant, so
// that key order equals lexicographic site order.
std::uint64_t pack(const Site& s);
Site unpack(std::uint64_t key, int dim);
bool packable(const Site& s);

enum class Adjacency { NearestNeighbor, LGraph };

const char* to_string(Adjacency adj);

// Offsets of the neighbours of the origin, in lexicographic order.
std::vector<Site> neighbor_offsets(int dim, Adjacency adj);

// Throws std::out_of_range when a neighbour would leave the packable range.
std::vector<Site> neighbors(const Site& s, Adjacency adj);

// B_{anchor,side} = anchor + {0,...,side-1}^d.
struct Box {
  Site anchor;
  Coord side = 1;

  Box() = default;
  Box(Site a, Coord m);

  int dim() const { return anchor.dim; }
  std::size_t volume() const;
  bool contains(const Site& s) const;
  std::vector<Site> sites() const;
  Site corner(unsigned mask) const;

  friend bool operator==(const Box&, const Box&) = default;
};

// Finite site set, stored as sorted packed keys; iteration is lexicographic.
class Region {
 public:
  Region() = default;
  explicit Region(int dim) : dim_(dim) {}

  static Region from_sites(int dim, std::span<const Site> sites);
  static Region from_keys(int dim, std::vector<std::uint64_t> keys);
  static Region from_box(const Box& b);

  int dim() const { return dim_; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  bool contains(const Site& s) const;
  bool contains_key(std::uint64_t key) const;

  Site at(std::size_t i) const { return unpack(keys_[i], dim_); }
  std::vector<Site> sites() const;
  const std::vector<std::uint64_t>& keys() const { return keys_; }

  void insert(const Site& s);
  void erase(const Site& s);

  Region unite(const Region& other) const;
  Region minus(const Region& other) const;
  Region intersect(const Region& other) const;
  bool disjoint(const Region& other) const;
  bool subset_of(const Region& other) const;

  // Smallest box-shaped hull as per-axis [lo, hi] bounds; empty on empty region.
  std::optional<std::pair<Site, Site>> bounds() const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  int dim_ = 2;
  std::vector<std::uint64_t> keys_;
};

// Dense axis-aligned window with lexicographic (first coordinate slowest)
// cell indexing. All flood fills run on these.
class Window {
 public:
  Window() = default;
  Window(Site lo, std::array<Coord, kMaxDim> extent);
  static Window from_box(const Box& b);
  // Bounding box of a nonempty region padded by `pad` on every side.
  static Window around(const Region& r, Coord pad);
  // Box dilated by `pad` sites on every side.
  static Window around(const Box& b, Coord pad);

  int dim() const { return lo_.dim; }
  std::size_t volume() const { return volume_; }
  const Site& lo() const { return lo_; }
  Coord extent(int i) const { return extent_[static_cast<std::size_t>(i)]; }

  bool contains(const Site& s) const;
  std::size_t index(const Site& s) const;
  Site site(std::size_t idx) const;
  bool on_hull(std::size_t idx) const;

  // Calls fn(neighbour_index) for each in-window neighbour, in offset order.
  template <class Fn>
  void for_each_neighbor(std::size_t idx, Adjacency adj, Fn&& fn) const;

  std::vector<std::uint8_t> mask_of(const Region& r) const;
  Region region_of(std::span<const std::uint8_t> mask) const;

 private:
  Site lo_;
  std::array<Coord, kMaxDim> extent_{};
  std::array<std::size_t, kMaxDim> stride_{};
  std::size_t volume_ = 0;
  std::vector<Site> nn_offsets_;
  std::vector<Site> l_offsets_;
  std::vector<std::ptrdiff_t> nn_delta_;
  std::vector<std::ptrdiff_t> l_delta_;
};

template <class Fn>
void Window::for_each_neighbor(std::size_t idx, Adjacency adj, Fn&& fn) const {
  const int d = dim();
  std::array<Coord, kMaxDim> c{};
  std::size_t rem = idx;
  for (int i = 0; i < d; ++i) {
    c[static_cast<std::size_t>(i)] = static_cast<Coord>(rem / stride_[static_cast<std::size_t>(i)]);
    rem %= stride_[static_cast<std::size_t>(i)];
  }
  const auto& offs = adj == Adjacency::NearestNeighbor ? nn_offsets_ : l_offsets_;
  const auto& delta = adj == Adjacency::NearestNeighbor ? nn_delta_ : l_delta_;
  for (std::size_t k = 0; k < offs.size(); ++k) {
    bool inside = true;
    for (int i = 0; i < d && inside; ++i) {
      const Coord v = c[static_cast<std::size_t>(i)] + offs[k][i];
      inside = v >= 0 && v < extent_[static_cast<std::size_t>(i)];
    }
    if (inside) fn(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + delta[k]));
  }
}

// ---------------------------------------------------------------------------
// Operations

// B[q]: union of the (2q+1)^d translated copies of b around b.
Region box_dilate(const Box& b, Coord q);
Box dilated_box(const Box& b, Coord q);

bool is_connected(const Region& r, Adjacency adj);

// Connected components in lexicographic order of their smallest site.
std::vector<Region> components(const Region& r, Adjacency adj);

// Sites outside `a` that are nearest-neighbour adjacent to `a`, optionally
// restricted to `within`.
Region boundary(const Region& a, const std::optional<Region>& within = std::nullopt);

// Sites L-adjacent to c that can be reached from infinity avoiding c.
Region exterior_boundary(const Region& c);

// Sites of box L-adjacent to c reachable from x inside box avoiding c.
Region visible_boundary(const Region& c, const Site& x, const Box& box);

// Every nearest-neighbour path in domain from c to d_set meets e (outside
// c ∪ d_set when proper is set).
bool separates(const Region& e, const Region& c, const Region& d_set, const Region& domain,
               bool proper);

// An L-connected subset of e still separating c and d_set in domain, or
// nullopt when e does not separate them. Throws PreconditionError when c,
// d_set are not connected and disjoint or e meets d_set.
std::optional<Region> connected_separating_subset(const Region& e, const Region& c,
                                                  const Region& d_set, const Region& domain);

// Sites outside a that a separates from infinity.
Region enclosed_by(const Region& a);

}  // namespace gla

template <>
struct std::hash<gla::Site> {
  std::size_t operator()(const gla::Site& s) const noexcept {
    return std::hash<std::uint64_t>{}(gla::pack(s));
  }
};
