#include <doctest.h>

#include <cmath>

#include "gla/estimators.hpp"
#include "gla/hash.hpp"

using namespace gla;

namespace {

EstimateOptions small(std::size_t reps, std::uint64_t seed = 7) {
  EstimateOptions o;
  o.reps = reps;
  o.master_seed = seed;
  return o;
}

}  // namespace

TEST_CASE("exact floor of alpha n^d") {
  CHECK(alpha_size(0.5, 12, 2) == 72);
  CHECK(alpha_size(0.1, 10, 2) == 10);
  CHECK(alpha_size(1.0, 5, 3) == 125);
  // 0.3 is stored below 3/10, so its product with 100 floors to 29.
  CHECK(alpha_size(0.3, 10, 2) == 29);
  CHECK(alpha_size(0.0, 10, 2) == 0);
  CHECK_THROWS_AS(alpha_size(-0.1, 10, 2), PreconditionError);
}

TEST_CASE("shifts fold into one level") {
  const auto base = DistributionSpec::uniform(-1, 1);
  const auto s = shift_by(shift_by(base, 0.25), 0.5);
  CHECK(s.family() == Family::Shifted);
  CHECK(s.eps() == 0.75);
  CHECK(s.base() == base);
}

TEST_CASE("constant laws give exact statistics") {
  const auto n = estimate_N(DistributionSpec::degenerate(0.5), {3, 5}, small(3));
  CHECK(n.records().size() == 6);
  for (const auto& r : n.records()) CHECK(r.normalized == 0.5);
  const auto gl = estimate_G_L(DistributionSpec::degenerate(1.0), {4, 6}, small(2));
  for (const auto& r : gl.G.records()) CHECK(r.normalized == 1.0);
  for (const auto& r : gl.L.records()) CHECK(r.normalized == 1.0);
  CHECK(gl.band_c == 1.0);
  const auto neg = estimate_G_L(DistributionSpec::degenerate(-1.0), {4}, small(2));
  for (const auto& r : neg.L.records()) CHECK(r.raw == 1.0);
  CHECK(neg.band_c == 0.0);
}

TEST_CASE("rooted maxima shift exactly with the law") {
  const auto base = DistributionSpec::two_point_penalty(0.6, 0.5);
  for (double eps : {0.25, -0.75, 1.5}) {
    const auto a = estimate_N(base, {4, 7}, small(5, 3));
    const auto b = estimate_N(shift_by(base, eps), {4, 7}, small(5, 3));
    for (std::size_t i = 0; i < a.records().size(); ++i) {
      const auto& ra = a.records()[i];
      CHECK(b.records()[i].raw == ra.raw + ra.n * eps);
    }
  }
}

TEST_CASE("parallel replicas merge deterministically") {
  auto o1 = small(6, 11);
  auto o3 = o1;
  o3.jobs = 3;
  const auto dist = DistributionSpec::two_point_penalty(0.7, 1.0);
  CHECK(estimate_N(dist, {5, 6}, o1).to_csv() == estimate_N(dist, {5, 6}, o3).to_csv());
  CHECK(estimate_G_L(dist, {5}, o1).L.to_csv() == estimate_G_L(dist, {5}, o3).L.to_csv());
  CHECK(estimate_Gtilde_curve(dist, 5, {0.2, 0.6}, o1).to_csv() ==
        estimate_Gtilde_curve(dist, 5, {0.2, 0.6}, o3).to_csv());
}

TEST_CASE("heuristic estimates are lower bounds") {
  const auto dist = DistributionSpec::uniform(-1, 1);
  auto h = small(8, 2);
  h.solver.heuristic = true;
  const auto exact = estimate_N(dist, {8}, small(8, 2));
  const auto heur = estimate_N(dist, {8}, h);
  CHECK(heur.lower_bound());
  for (std::size_t i = 0; i < exact.records().size(); ++i)
    CHECK(heur.records()[i].raw <= exact.records()[i].raw + kWeightTol);
}

TEST_CASE("fixed-size curve agrees with per-size solves") {
  const auto dist = DistributionSpec::two_point_penalty(0.6, 1.0);
  const std::vector<double> alphas{0.125, 0.25, 0.5, 0.75, 1.0};
  const auto curve = estimate_Gtilde_curve(dist, 4, alphas, small(4, 5));
  CHECK(curve.sizes == std::vector<std::size_t>{2, 4, 8, 12, 16});
  for (std::size_t r = 0; r < curve.values.size(); ++r) {
    const WeightField f(curve.seeds[r], dist);
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      SolverOptions o;
      o.method = ExactMethod::Enumeration;
      o.max_exact_size = 16;
      const auto want = solve_box_fixed_size(f, Box(Site{0, 0}, 4), curve.sizes[j], o).value / 16;
      CHECK(curve.values[r][j] == doctest::Approx(want).epsilon(1e-12));
    }
  }
  CHECK(curve.summaries().size() == alphas.size());
  CHECK_THROWS_AS(estimate_Gtilde_curve(dist, 4, {0.5, 0.25}, small(1)), PreconditionError);
}

TEST_CASE("bisection finds the shift of a constant law") {
  const auto cp = locate_criticality(DistributionSpec::degenerate(-1.0), 0.0, 2.0, 5, small(3), 1e-6);
  CHECK(cp.converged);
  CHECK(cp.eps_star == 1.0);
  CHECK(cp.history.size() == 1);
  CHECK_THROWS_AS(locate_criticality(DistributionSpec::degenerate(-1.0), 2.0, 3.0, 5, small(3), 1e-6),
                  PreconditionError);
  // Away from a dyadic root, bisection narrows the bracket around it.
  const auto cp2 = locate_criticality(DistributionSpec::degenerate(-0.3), 0.0, 1.0, 3, small(2), 1e-6, 30);
  CHECK(cp2.eps_star == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("critical scaling diagnostic") {
  CHECK_THROWS_AS(critical_scaling_diag(DistributionSpec::degenerate(1), 2.0, {4, 8}, small(1)), PreconditionError);
  // n / (log n)^2.5 falls until n = e^2.5 and rises after.
  const auto down = critical_scaling_diag(DistributionSpec::degenerate(1), 2.5, {4, 8}, small(2));
  CHECK(down.nonincreasing);
  CHECK(down.series.at(8).mean == doctest::Approx(64.0 / (8 * std::pow(std::log(8.0), 2.5))));
  auto h = small(1);
  h.solver.heuristic = true;
  const auto up = critical_scaling_diag(DistributionSpec::degenerate(1), 2.5, {16, 48}, h);
  CHECK_FALSE(up.nonincreasing);
  CHECK_FALSE(up.nonincreasing_within_ci);
}
