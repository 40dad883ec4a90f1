#include "doctest.h"
#include "gla/lattice.hpp"
#include "oracles.hpp"

using namespace gla;
using oracle::P2;
using oracle::Set2;

namespace {

Region reg(std::initializer_list<std::pair<int, int>> pts) {
  std::vector<Site> v;
  for (auto [a, b] : pts) v.push_back(Site{a, b});
  return Region::from_sites(2, v);
}

}  // namespace

TEST_CASE("packing preserves lexicographic order and round-trips") {
  std::mt19937_64 rng(7);
  std::vector<Site> sites;
  for (int i = 0; i < 500; ++i) {
    const int d = 2 + static_cast<int>(rng() % 3);
    Site s = Site::origin(d);
    for (int j = 0; j < d; ++j) s[j] = static_cast<Coord>(static_cast<int>(rng() % 65536) - 32768);
    CHECK(unpack(pack(s), d) == s);
    sites.push_back(s);
  }
  for (std::size_t i = 0; i + 1 < sites.size(); ++i) {
    if (sites[i].dim != sites[i + 1].dim) continue;
    CHECK((sites[i] < sites[i + 1]) == (pack(sites[i]) < pack(sites[i + 1])));
  }
  CHECK_FALSE(packable(Site{40000, 0}));
  CHECK_THROWS_AS(Site{1}, PreconditionError);
}

TEST_CASE("neighbour counts") {
  const auto nn = neighbors(Site{0, 0}, Adjacency::NearestNeighbor);
  CHECK(Region::from_sites(2, nn) == reg({{-1, 0}, {1, 0}, {0, -1}, {0, 1}}));
  CHECK(neighbors(Site{0, 0}, Adjacency::LGraph).size() == 8);
  CHECK(neighbors(Site{0, 0, 0}, Adjacency::LGraph).size() == 26);
  CHECK(neighbors(Site{0, 0, 0, 0}, Adjacency::NearestNeighbor).size() == 8);
  for (const Site& s : neighbors(Site{3, -2, 5}, Adjacency::LGraph)) CHECK(linf_distance(s, Site{3, -2, 5}) == 1);
  CHECK_THROWS_AS(neighbors(Site{kCoordMax, 0}, Adjacency::NearestNeighbor), std::out_of_range);
}

TEST_CASE("box dilation sizes") {
  const Box b(Site{0, 0}, 2);
  CHECK(box_dilate(b, 0) == Region::from_box(b));
  CHECK(box_dilate(b, 1).size() == 36);
  for (int d = 2; d <= 3; ++d)
    for (int m = 1; m <= 3; ++m)
      for (int q = 1; q <= 2; ++q) {
        const Box bb(Site::origin(d), m);
        CHECK(box_dilate(bb, q - 1).size() ==
              static_cast<std::size_t>(std::pow((2 * q - 1) * m, d)));
      }
  CHECK_THROWS_AS(box_dilate(b, -1), PreconditionError);
}

TEST_CASE("connectivity matches a flood-fill oracle") {
  CHECK(is_connected(reg({{0, 0}, {0, 1}}), Adjacency::NearestNeighbor));
  CHECK_FALSE(is_connected(reg({{0, 0}, {1, 1}}), Adjacency::NearestNeighbor));
  CHECK(is_connected(reg({{0, 0}, {1, 1}}), Adjacency::LGraph));
  CHECK(is_connected(Region(2), Adjacency::NearestNeighbor));
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    Set2 s;
    while (s.size() < 5) s.insert({static_cast<int>(rng() % 4), static_cast<int>(rng() % 4)});
    const Region r = oracle::to_region(s);
    CHECK(is_connected(r, Adjacency::NearestNeighbor) == oracle::connected(s, oracle::nn_steps()));
    CHECK(is_connected(r, Adjacency::LGraph) == oracle::connected(s, oracle::l_steps()));
    std::size_t total = 0;
    for (const Region& comp : components(r, Adjacency::NearestNeighbor)) {
      CHECK(is_connected(comp, Adjacency::NearestNeighbor));
      total += comp.size();
    }
    CHECK(total == r.size());
  }
}

TEST_CASE("boundary") {
  CHECK(boundary(reg({{0, 0}})) == Region::from_sites(2, neighbors(Site{0, 0}, Adjacency::NearestNeighbor)));
  const Region box = Region::from_box(Box(Site{0, 0}, 4));
  CHECK(boundary(box, box).empty());
  // Isoperimetric bound inside B_n for |A| <= n^d / 2.
  std::mt19937_64 rng(5);
  for (int t = 0; t < 400; ++t) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const Region bn = Region::from_box(Box(Site{0, 0}, n));
    const std::size_t target = 1 + rng() % (n * n / 2);
    Set2 a;
    while (a.size() < target) a.insert({static_cast<int>(rng() % n), static_cast<int>(rng() % n)});
    const Region ar = oracle::to_region(a);
    const double lhs = static_cast<double>(boundary(ar, bn).size());
    CHECK(lhs >= 0.25 * std::pow(static_cast<double>(a.size()), 0.5) - 1e-12);
  }
}

TEST_CASE("exterior boundary") {
  CHECK(exterior_boundary(reg({{0, 0}})) == Region::from_sites(2, neighbors(Site{0, 0}, Adjacency::LGraph)));
  const Region sq = Region::from_box(Box(Site{0, 0}, 3));
  const Region ring = Region::from_box(Box(Site{-1, -1}, 5)).minus(sq);
  CHECK(exterior_boundary(sq) == ring);
  CHECK(exterior_boundary(sq).size() == 16);
  // A hollow ring: the hole is not part of the exterior boundary.
  const Region hollow = Region::from_box(Box(Site{0, 0}, 3)).minus(reg({{1, 1}}));
  CHECK_FALSE(exterior_boundary(hollow).contains(Site{1, 1}));
  CHECK(exterior_boundary(Region(2)).empty());
  // Connectivity for every L-connected shape of size <= 5.
  for (const Set2& s : oracle::fixed_shapes(5, oracle::l_steps()))
    CHECK(is_connected(exterior_boundary(oracle::to_region(s)), Adjacency::NearestNeighbor));
}

TEST_CASE("exterior boundary is connected in three dimensions") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 60; ++t) {
    std::vector<Site> pts{Site{0, 0, 0}};
    Region c = Region::from_sites(3, pts);
    while (c.size() < 6) {
      const Site base = c.at(rng() % c.size());
      const auto nb = neighbors(base, Adjacency::LGraph);
      c.insert(nb[rng() % nb.size()]);
    }
    CHECK(is_connected(c, Adjacency::LGraph));
    CHECK(is_connected(exterior_boundary(c), Adjacency::NearestNeighbor));
  }
}

TEST_CASE("visible boundary") {
  const Box box(Site{0, 0}, 5);
  const Region centre = reg({{2, 2}});
  CHECK(visible_boundary(centre, Site{0, 0}, box) == exterior_boundary(centre));
  // A wall along x1 = 2 splits the box; only the x1 = 1 face is visible from the left.
  const Region wall = reg({{0, 2}, {1, 2}, {2, 2}, {3, 2}, {4, 2}});
  const Region face = reg({{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}});
  CHECK(visible_boundary(wall, Site{0, 0}, box) == face);
  CHECK_THROWS_AS(visible_boundary(wall, Site{0, 2}, box), PreconditionError);
  CHECK_THROWS_AS(visible_boundary(wall, Site{9, 9}, box), PreconditionError);

  std::mt19937_64 rng(17);
  const Set2 dom = oracle::box_set(0, 0, 6);
  for (int t = 0; t < 200; ++t) {
    const Set2 c = oracle::random_connected(dom, 1 + rng() % 10, rng, oracle::l_steps());
    P2 x;
    do x = {static_cast<int>(rng() % 6), static_cast<int>(rng() % 6)};
    while (c.count(x));
    const Region vb = visible_boundary(oracle::to_region(c), Site{x[0], x[1]}, Box(Site{0, 0}, 6));
    CHECK(is_connected(vb, Adjacency::NearestNeighbor));
  }
}

TEST_CASE("separation agrees with a path-enumeration oracle on 4x4 boxes") {
  const Set2 dom = oracle::box_set(0, 0, 4);
  const Region domain = oracle::to_region(dom);
  // The boundary of c separates it from a far corner.
  const Region c0 = reg({{0, 0}});
  CHECK(separates(boundary(c0, domain), c0, reg({{3, 3}}), domain, false));
  CHECK_FALSE(separates(Region(2), c0, reg({{3, 3}}), domain, false));
  std::mt19937_64 rng(23);
  for (int t = 0; t < 600; ++t) {
    Set2 e, c, d;
    for (auto p : dom) {
      const auto r = rng() % 10;
      if (r < 3) e.insert(p);
      else if (r < 4) c.insert(p);
      else if (r < 5) d.insert(p);
    }
    if (c.empty() || d.empty()) continue;
    const bool plain = !oracle::path_exists(dom, c, d, e);
    Set2 proper_block;
    for (auto p : e)
      if (!c.count(p) && !d.count(p)) proper_block.insert(p);
    const bool proper = !oracle::path_exists(dom, c, d, proper_block);
    const auto er = oracle::to_region(e), cr = oracle::to_region(c), dr = oracle::to_region(d);
    CHECK(separates(er, cr, dr, domain, false) == plain);
    CHECK(separates(er, cr, dr, domain, true) == proper);
  }
}

TEST_CASE("connected separating subsets") {
  const Region domain = Region::from_box(Box(Site{0, 0}, 5));
  const Region wall = reg({{0, 2}, {1, 2}, {2, 2}, {3, 2}, {4, 2}});
  const Region c = reg({{2, 0}});
  const Region d = reg({{2, 4}});
  CHECK(connected_separating_subset(wall, c, d, domain) == wall);
  const Region noisy = wall.unite(reg({{0, 4}}));
  CHECK(connected_separating_subset(noisy, c, d, domain) == wall);
  CHECK_FALSE(connected_separating_subset(reg({{0, 4}}), c, d, domain).has_value());
  // Preconditions are reported as errors rather than as absence.
  CHECK_THROWS_AS(connected_separating_subset(wall, reg({{0, 0}, {1, 1}}), d, domain), PreconditionError);
  CHECK_THROWS_AS(connected_separating_subset(wall, c, c, domain), PreconditionError);
  CHECK_THROWS_AS(connected_separating_subset(wall.unite(d), c, d, domain), PreconditionError);
}

TEST_CASE("connected separating subsets on random 5x5 instances") {
  std::mt19937_64 rng(29);
  const Set2 dom = oracle::box_set(0, 0, 5);
  const Region domain = oracle::to_region(dom);
  int separating = 0;
  for (int t = 0; t < 400; ++t) {
    const Set2 c = oracle::random_connected(dom, 1 + rng() % 4, rng, oracle::nn_steps());
    Set2 rest;
    for (auto p : dom)
      if (!c.count(p)) rest.insert(p);
    const Set2 d = oracle::random_connected(rest, 1 + rng() % 4, rng, oracle::nn_steps());
    if (!oracle::connected(d, oracle::nn_steps())) continue;
    Set2 e;
    for (auto p : dom)
      if (!d.count(p) && rng() % 3 == 0) e.insert(p);
    const auto er = oracle::to_region(e), cr = oracle::to_region(c), dr = oracle::to_region(d);
    const auto out = connected_separating_subset(er, cr, dr, domain);
    const bool seps = !oracle::path_exists(dom, c, d, e);
    CHECK(out.has_value() == seps);
    if (out) {
      ++separating;
      CHECK(out->subset_of(er));
      CHECK(is_connected(*out, Adjacency::LGraph));
      CHECK(separates(*out, cr, dr, domain, false));
    }
  }
  CHECK(separating > 20);
}

TEST_CASE("enclosed sets") {
  const Region ring = Region::from_sites(2, neighbors(Site{0, 0}, Adjacency::LGraph));
  CHECK(enclosed_by(ring) == reg({{0, 0}}));
  CHECK(enclosed_by(Region(2)).empty());
  std::mt19937_64 rng(31);
  for (int t = 0; t < 300; ++t) {
    // Random rectangle outlines in a 7x7 window, plus noise.
    const int a0 = static_cast<int>(rng() % 4), a1 = static_cast<int>(rng() % 4);
    const int h = 2 + static_cast<int>(rng() % (6 - a0)), w = 2 + static_cast<int>(rng() % (6 - a1));
    Set2 a;
    for (int i = a0; i <= std::min(6, a0 + h); ++i)
      for (int j = a1; j <= std::min(6, a1 + w); ++j)
        if (i == a0 || i == std::min(6, a0 + h) || j == a1 || j == std::min(6, a1 + w)) a.insert({i, j});
    for (int k = 0; k < 4; ++k) a.insert({static_cast<int>(rng() % 7), static_cast<int>(rng() % 7)});
    const Region ar = oracle::to_region(a);
    const Region inner = enclosed_by(ar);
    CHECK(inner.disjoint(ar));
    CHECK(static_cast<double>(ar.size()) >= std::pow(static_cast<double>(inner.size()), 0.5) - 1e-12);
  }
}
