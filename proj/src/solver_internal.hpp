#pragma once

#include <optional>
#include <vector>

#include "gla/animal.hpp"

namespace gla::detail {

struct Incumbent {
  double value;
  std::vector<std::uint32_t> verts;  // sorted
};

SolveResult branch_and_bound(const CellGraph& g, const Problem& pb, const SolverOptions& opt,
                             const std::optional<Incumbent>& start);

SolveResult profile_solve(const CellGraph& g, const Problem& pb, const SolverOptions& opt);

// Quick single-restart heuristic used to seed the exact search.
Incumbent quick_incumbent(const CellGraph& g, const Problem& pb, std::uint64_t seed);

}  // namespace gla::detail
