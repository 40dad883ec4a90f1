#pragma once

// Brute-force reference implementations used only by the tests. They work on
// plain coordinate sets and deliberately share no code with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "gla/lattice.hpp"

namespace oracle {

using P2 = std::array<int, 2>;
using Set2 = std::set<P2>;

inline std::vector<P2> nn_steps() { return {P2{-1, 0}, P2{1, 0}, P2{0, -1}, P2{0, 1}}; }
inline std::vector<P2> l_steps() {
  std::vector<P2> out;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      if (a || b) out.push_back({a, b});
  return out;
}

inline P2 add(P2 a, P2 b) { return {a[0] + b[0], a[1] + b[1]}; }

// Reachable members of `allowed` from `from` (members of allowed only).
inline Set2 reach(const Set2& allowed, const Set2& from, const std::vector<P2>& steps) {
  Set2 seen;
  std::vector<P2> stack;
  for (auto p : from)
    if (allowed.count(p) && seen.insert(p).second) stack.push_back(p);
  while (!stack.empty()) {
    auto p = stack.back();
    stack.pop_back();
    for (auto s : steps) {
      auto q = add(p, s);
      if (allowed.count(q) && seen.insert(q).second) stack.push_back(q);
    }
  }
  return seen;
}

inline bool connected(const Set2& s, const std::vector<P2>& steps) {
  if (s.size() <= 1) return true;
  return reach(s, {*s.begin()}, steps).size() == s.size();
}

// Depth-first search over self-avoiding paths: does some path inside
// `domain` leave c, end in d, and avoid `blocked`?
inline bool path_exists(const Set2& domain, const Set2& c, const Set2& d, const Set2& blocked) {
  Set2 on_path;
  std::function<bool(P2)> dfs = [&](P2 p) -> bool {
    if (d.count(p)) return true;
    on_path.insert(p);
    for (auto s : nn_steps()) {
      auto q = add(p, s);
      if (!domain.count(q) || blocked.count(q) || on_path.count(q)) continue;
      if (dfs(q)) return true;
    }
    on_path.erase(p);
    return false;
  };
  for (auto p : c)
    if (domain.count(p) && !blocked.count(p) && dfs(p)) return true;
  return false;
}

inline Set2 box_set(int lo0, int lo1, int side) {
  Set2 s;
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b) s.insert({lo0 + a, lo1 + b});
  return s;
}

// All translation classes of connected sets of size <= n containing the
// origin as their lexicographically smallest point, grown by set BFS.
inline std::vector<Set2> fixed_shapes(int n, const std::vector<P2>& steps) {
  std::vector<Set2> out;
  std::set<Set2> layer{{P2{0, 0}}};
  for (int size = 1; size <= n; ++size) {
    for (const auto& s : layer) out.push_back(s);
    std::set<Set2> next;
    for (const auto& s : layer) {
      for (auto p : s) {
        for (auto st : steps) {
          auto q = add(p, st);
          if (s.count(q)) continue;
          Set2 t = s;
          t.insert(q);
          // Normalize so the smallest point is the origin.
          P2 m = *t.begin();
          Set2 u;
          for (auto r : t) u.insert({r[0] - m[0], r[1] - m[1]});
          next.insert(u);
        }
      }
    }
    layer = std::move(next);
  }
  return out;
}

inline gla::Region to_region(const Set2& s) {
  std::vector<gla::Site> v;
  for (auto p : s) v.push_back(gla::Site{p[0], p[1]});
  return gla::Region::from_sites(2, v);
}

inline Set2 from_region(const gla::Region& r) {
  Set2 s;
  for (auto site : r.sites()) s.insert({site[0], site[1]});
  return s;
}

// Random connected set grown from a seed inside `domain`.
template <class Rng>
Set2 random_connected(const Set2& domain, std::size_t size, Rng& rng, const std::vector<P2>& steps) {
  std::vector<P2> dom(domain.begin(), domain.end());
  Set2 s{dom[rng() % dom.size()]};
  for (int guard = 0; s.size() < size && guard < 10000; ++guard) {
    std::vector<P2> cand;
    for (auto p : s)
      for (auto st : steps) {
        auto q = add(p, st);
        if (domain.count(q) && !s.count(q)) cand.push_back(q);
      }
    if (cand.empty()) break;
    s.insert(cand[rng() % cand.size()]);
  }
  return s;
}

// Site count of a shortest nearest-neighbour path inside `open` from a to b;
// -1 when none exists.
inline int chem_dist(const Set2& open, const Set2& a, const Set2& b) {
  std::map<P2, int> dist;
  std::vector<P2> frontier;
  for (auto p : a)
    if (open.count(p) && !dist.count(p)) {
      dist[p] = 1;
      frontier.push_back(p);
    }
  for (int level = 1; !frontier.empty(); ++level) {
    for (auto p : frontier)
      if (b.count(p)) return level;
    std::vector<P2> next;
    for (auto p : frontier)
      for (auto s : nn_steps()) {
        auto q = add(p, s);
        if (open.count(q) && !dist.count(q)) {
          dist[q] = level + 1;
          next.push_back(q);
        }
      }
    frontier = std::move(next);
  }
  return -1;
}

}  // namespace oracle
