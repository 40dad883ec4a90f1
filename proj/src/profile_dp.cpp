// Row-by-row transfer-matrix search over connectivity profiles of the last
// `width` cells (two-dimensional boxes only). Exact for both the free-size
// and the fixed-size problems.

#include <algorithm>
#include <cmath>
#include <limits>

#include "gla/animal.hpp"
#include "gla/hash.hpp"
#include "gla/simd.hpp"
#include "solver_internal.hpp"

namespace gla {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kEmpty = ~0ULL;

inline unsigned slot(std::uint64_t key, int c) { return static_cast<unsigned>((key >> (4 * c)) & 15u); }

inline std::uint64_t with_slot(std::uint64_t key, int c, unsigned v) {
  return (key & ~(15ULL << (4 * c))) | (static_cast<std::uint64_t>(v) << (4 * c));
}

// Relabels components in order of first appearance.
std::uint64_t normalize(std::uint64_t key, int width) {
  unsigned map[16] = {};
  unsigned next = 1;
  std::uint64_t out = 0;
  for (int c = 0; c < width; ++c) {
    const unsigned l = slot(key, c);
    if (!l) continue;
    if (!map[l]) map[l] = next++;
    out |= static_cast<std::uint64_t>(map[l]) << (4 * c);
  }
  return out;
}

bool label_elsewhere(std::uint64_t key, int width, int c, unsigned label) {
  for (int j = 0; j < width; ++j)
    if (j != c && slot(key, j) == label) return true;
  return false;
}

unsigned distinct_labels(std::uint64_t key, int width) {
  unsigned mx = 0;
  for (int j = 0; j < width; ++j) mx = std::max(mx, slot(key, j));
  return mx;  // labels are normalized to 1..mx
}

class StateMap {
 public:
  void reset(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < 2 * expected) cap <<= 1;
    keys_.assign(cap, kEmpty);
    idx_.assign(cap, 0);
    mask_ = cap - 1;
    order_.clear();
  }

  // Index of key, inserting with the next free index when absent.
  std::uint32_t find_or_insert(std::uint64_t key, bool& inserted) {
    if (2 * (order_.size() + 1) > keys_.size()) grow();
    std::size_t h = mix64(key) & mask_;
    while (keys_[h] != kEmpty) {
      if (keys_[h] == key) {
        inserted = false;
        return idx_[h];
      }
      h = (h + 1) & mask_;
    }
    keys_[h] = key;
    idx_[h] = static_cast<std::uint32_t>(order_.size());
    order_.push_back(key);
    inserted = true;
    return idx_[h];
  }

  const std::vector<std::uint64_t>& order() const { return order_; }

 private:
  void grow() {
    std::vector<std::uint64_t> keep = order_;
    reset(keep.size() * 2 + 8);
    bool ins = false;
    for (auto k : keep) find_or_insert(k, ins);
  }

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> idx_;
  std::vector<std::uint64_t> order_;
  std::size_t mask_ = 0;
};

struct Layout {
  int height;
  int width;
  std::ptrdiff_t last_forced;
};

Layout layout_of(const CellGraph& g, std::span<const std::int8_t> forced) {
  if (!profile_supported(g)) throw PreconditionError("profile search needs a two-dimensional box of side <= 16");
  if (!forced.empty() && forced.size() != g.size()) throw PreconditionError("forced mask has the wrong size");
  Layout l{g.window().extent(0), g.window().extent(1), -1};
  for (std::size_t i = 0; i < forced.size(); ++i)
    if (forced[i] > 0) l.last_forced = static_cast<std::ptrdiff_t>(i);
  if (g.root()) l.last_forced = std::max<std::ptrdiff_t>(l.last_forced, *g.root());
  return l;
}

inline std::int8_t forced_at(const CellGraph& g, std::span<const std::int8_t> forced, std::size_t i) {
  if (g.root() && *g.root() == i) {
    if (!forced.empty() && forced[i] < 0) return -2;  // contradictory
    return 1;
  }
  return forced.empty() ? 0 : forced[i];
}

// Key after placing the current cell inside the animal.
inline std::uint64_t place_in(std::uint64_t key, int c, int width) {
  const unsigned up = slot(key, c);
  const unsigned left = c > 0 ? slot(key, c - 1) : 0;
  std::uint64_t nk;
  if (!up && !left) {
    nk = with_slot(key, c, 15);
  } else if (up && left && up != left) {
    nk = key;
    for (int j = 0; j < width; ++j)
      if (slot(nk, j) == left) nk = with_slot(nk, j, up);
    nk = with_slot(nk, c, up);
  } else {
    nk = with_slot(key, c, up ? up : left);
  }
  return normalize(nk, width);
}

enum class OutKind { Continue, Complete, Dead };

inline OutKind place_out(std::uint64_t key, int c, int width, std::uint64_t& nk) {
  const unsigned up = slot(key, c);
  nk = with_slot(key, c, 0);
  if (up && !label_elsewhere(key, width, c, up)) return nk == 0 ? OutKind::Complete : OutKind::Dead;
  nk = normalize(nk, width);
  return OutKind::Continue;
}

struct FreeVal {
  double value;
  std::uint32_t size;
};

inline bool free_better(const FreeVal& a, const FreeVal& b) {
  if (a.value > b.value + kWeightTol) return true;
  if (a.value < b.value - kWeightTol) return false;
  return a.size < b.size;
}

}  // namespace

bool profile_supported(const CellGraph& g) {
  return g.dim() == 2 && g.window().extent(1) <= kProfileMaxWidth;
}

namespace {

// Layers are kept in rank order: states sorted by the indicator string of
// their chosen past, with "cell taken" ranked first. Ties between equal
// (value, size) candidates then resolve to the lexicographically smallest
// site set.
struct FreeTrace {
  std::vector<std::vector<std::uint32_t>> pred;  // per layer; top bit = cell taken
  struct End {
    std::size_t layer;
    std::uint32_t state;
  };
  std::vector<End> ties;
};

constexpr std::uint32_t kTaken = 1u << 31;

// Memory guards: states in one layer, traced states over the whole pass, and
// per-size slots of the fixed-size tables.
constexpr std::size_t kMaxLayerStates = 4'000'000;
constexpr std::size_t kMaxTracedStates = 60'000'000;
constexpr std::size_t kMaxFixedSlots = 60'000'000;

[[noreturn]] void state_budget() {
  throw BudgetExceeded("profile state space exceeds the memory budget; use heuristic mode");
}

std::optional<FreeVal> free_pass(const CellGraph& g, std::span<const std::int8_t> forced, FreeTrace* trace) {
  const Layout lay = layout_of(g, forced);
  std::vector<std::uint64_t> cur_keys{0};
  std::vector<FreeVal> cur_val{{0.0, 0}};
  StateMap map;
  std::vector<FreeVal> next_val;
  std::vector<std::uint32_t> next_seq, next_pred;
  std::optional<FreeVal> best;
  std::size_t traced = 0;
  if (trace) trace->pred.assign(1, std::vector<std::uint32_t>{0});

  auto record = [&](const FreeVal& v, std::size_t layer, std::uint32_t state) {
    if (!best || free_better(v, *best)) {
      best = v;
      if (trace) trace->ties.clear();
    } else if (free_better(*best, v)) {
      return;
    }
    if (trace) trace->ties.push_back({layer, state});
  };

  for (std::size_t i = 0; i < g.size(); ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(lay.width));
    const std::int8_t fz = forced_at(g, forced, i);
    if (fz == -2) return std::nullopt;
    map.reset(cur_keys.size() * 2);
    next_val.clear();
    next_seq.clear();
    next_pred.clear();
    const double s = g.score(i);
    bool ins = false;
    std::uint32_t seq = 0;
    auto merge = [&](std::uint64_t key, FreeVal v, std::uint32_t pred) {
      const auto idx = map.find_or_insert(key, ins);
      if (ins) {
        next_val.push_back(v);
        next_seq.push_back(seq);
        next_pred.push_back(pred);
      } else if (free_better(v, next_val[idx])) {
        next_val[idx] = v;
        next_seq[idx] = seq;
        next_pred[idx] = pred;
      }
    };
    for (std::size_t j = 0; j < cur_keys.size(); ++j, seq += 2) {
      const std::uint64_t key = cur_keys[j];
      const FreeVal v = cur_val[j];
      const auto jj = static_cast<std::uint32_t>(j);
      if (fz >= 0) merge(place_in(key, c, lay.width), FreeVal{v.value + s, v.size + 1}, jj | kTaken);
      if (fz <= 0) {
        ++seq;
        std::uint64_t nk;
        switch (place_out(key, c, lay.width, nk)) {
          case OutKind::Continue: merge(nk, v, jj); break;
          case OutKind::Complete:
            if (static_cast<std::ptrdiff_t>(i) > lay.last_forced) record(v, i, jj);
            break;
          case OutKind::Dead: break;
        }
        --seq;
      }
    }
    // Reorder the new layer by the sequence number of each chosen candidate.
    const auto& order = map.order();
    std::vector<std::int32_t> slot_of(2 * cur_keys.size() + 2, -1);
    for (std::size_t idx = 0; idx < order.size(); ++idx) slot_of[next_seq[idx]] = static_cast<std::int32_t>(idx);
    std::vector<std::uint64_t> keys;
    std::vector<FreeVal> vals;
    std::vector<std::uint32_t> preds;
    keys.reserve(order.size());
    vals.reserve(order.size());
    preds.reserve(order.size());
    for (auto idx : slot_of) {
      if (idx < 0) continue;
      keys.push_back(order[static_cast<std::size_t>(idx)]);
      vals.push_back(next_val[static_cast<std::size_t>(idx)]);
      preds.push_back(next_pred[static_cast<std::size_t>(idx)]);
    }
    cur_keys = std::move(keys);
    cur_val = std::move(vals);
    if (cur_keys.size() > kMaxLayerStates) state_budget();
    if (trace) {
      traced += preds.size();
      if (traced > kMaxTracedStates) state_budget();
      trace->pred.push_back(std::move(preds));
    }
  }
  for (std::size_t j = 0; j < cur_keys.size(); ++j)
    if (distinct_labels(cur_keys[j], lay.width) == 1) record(cur_val[j], g.size(), static_cast<std::uint32_t>(j));
  return best;
}

std::vector<std::uint32_t> trace_back(const FreeTrace& t, FreeTrace::End end) {
  std::vector<std::uint32_t> verts;
  std::uint32_t j = end.state;
  for (std::size_t layer = end.layer; layer > 0; --layer) {
    const std::uint32_t p = t.pred[layer][j];
    if (p & kTaken) verts.push_back(static_cast<std::uint32_t>(layer - 1));
    j = p & ~kTaken;
  }
  std::reverse(verts.begin(), verts.end());
  return verts;
}

}  // namespace

std::optional<ProfileValue> profile_free(const CellGraph& g, std::span<const std::int8_t> forced) {
  const auto best = free_pass(g, forced, nullptr);
  if (!best) return std::nullopt;
  return ProfileValue{best->value, best->size};
}

std::vector<double> profile_fixed(const CellGraph& g, std::size_t k_max, std::span<const std::int8_t> forced) {
  const Layout lay = layout_of(g, forced);
  k_max = std::min(k_max, g.size());
  const std::size_t stride = k_max + 1;
  const auto& kern = simd::active();
  StateMap cur_map, next_map;
  std::vector<double> cur_val(stride, kNegInf), next_val;
  cur_val[0] = 0.0;
  cur_map.reset(1);
  bool ins = false;
  cur_map.find_or_insert(0, ins);
  std::vector<double> best(stride, kNegInf);

  auto slot_for = [&](std::uint64_t key) -> double* {
    const auto idx = next_map.find_or_insert(key, ins);
    if (ins) next_val.resize(next_val.size() + stride, kNegInf);
    return next_val.data() + static_cast<std::size_t>(idx) * stride;
  };

  for (std::size_t i = 0; i < g.size(); ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(lay.width));
    const std::int8_t fz = forced_at(g, forced, i);
    if (fz == -2) return std::vector<double>(k_max, kNegInf);
    next_map.reset(cur_map.order().size() * 2);
    next_val.clear();
    const double s = g.score(i);
    const auto& keys = cur_map.order();
    for (std::size_t j = 0; j < keys.size(); ++j) {
      const std::uint64_t key = keys[j];
      if (fz <= 0) {
        std::uint64_t nk;
        switch (place_out(key, c, lay.width, nk)) {
          case OutKind::Continue: {
            double* dst = slot_for(nk);
            kern.max_into(dst, cur_val.data() + j * stride, stride);
            break;
          }
          case OutKind::Complete:
            if (static_cast<std::ptrdiff_t>(i) > lay.last_forced)
              kern.max_into(best.data(), cur_val.data() + j * stride, stride);
            break;
          case OutKind::Dead: break;
        }
      }
      if (fz >= 0) {
        const std::uint64_t nk = place_in(key, c, lay.width);
        double* dst = slot_for(nk);
        kern.max_plus_shift(dst, cur_val.data() + j * stride, k_max, s);
      }
    }
    std::swap(cur_map, next_map);
    std::swap(cur_val, next_val);
    if (cur_val.size() > kMaxFixedSlots) state_budget();
  }
  const auto& keys = cur_map.order();
  for (std::size_t j = 0; j < keys.size(); ++j)
    if (distinct_labels(keys[j], lay.width) == 1) kern.max_into(best.data(), cur_val.data() + j * stride, stride);
  return std::vector<double>(best.begin() + 1, best.end());
}

namespace detail {

SolveResult profile_solve(const CellGraph& g, const Problem& pb, const SolverOptions&) {
  SolveResult res;
  res.method = "profile_dp";
  res.optimal = true;
  std::vector<std::uint32_t> verts;
  if (!pb.size) {
    FreeTrace trace;
    if (!free_pass(g, {}, &trace)) throw PreconditionError("instance has no feasible animal");
    verts = trace_back(trace, trace.ties.front());
    for (std::size_t t = 1; t < trace.ties.size(); ++t) {
      auto other = trace_back(trace, trace.ties[t]);
      if (other < verts) verts = std::move(other);
    }
    res.nodes_explored = g.size();
  } else {
    const std::size_t k = *pb.size;
    std::vector<std::int8_t> forced(g.size(), 0);
    const auto prof = profile_fixed(g, k, forced);
    if (k > prof.size() || !std::isfinite(prof[k - 1])) throw PreconditionError("instance has no feasible animal");
    const double target = prof[k - 1];
    if (g.root()) forced[*g.root()] = 1;
    std::size_t placed = g.root() ? 1 : 0;
    std::uint64_t runs = 1;
    // Self-reduction: admit cells in lexicographic order while an optimum survives.
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (forced[i] != 0) continue;
      if (placed == k) {
        forced[i] = -1;
        continue;
      }
      forced[i] = 1;
      ++runs;
      const auto p = profile_fixed(g, k, forced);
      if (std::isfinite(p[k - 1]) && p[k - 1] >= target - kWeightTol) ++placed;
      else forced[i] = -1;
    }
    for (std::size_t i = 0; i < g.size(); ++i)
      if (forced[i] > 0) verts.push_back(static_cast<std::uint32_t>(i));
    res.nodes_explored = runs * g.size();
  }
  res.witness.sites = g.region_of(verts);
  res.witness.weight = g.weight_of(verts);
  res.value = res.witness.weight;
  return res;
}

}  // namespace detail

}  // namespace gla
