#include <doctest.h>

#include <cmath>

#include "gla/hash.hpp"
#include "gla/verify.hpp"

using namespace gla;

namespace {

WeightField replay(const Json& ev) {
  return WeightField(ev["seed"].get<std::uint64_t>(), distribution_from_json(ev["distribution"]), ev["dim"].get<int>());
}

}  // namespace

TEST_CASE("lipschitz bound on a constant law is tight up to the floor") {
  const WeightField f(1, DistributionSpec::degenerate(-0.5));
  const auto v = check_lipschitz(f, 4, 0.25, 0.75, {});
  CHECK(v.status == Status::HoldsExactly);
  // lhs = -mu (k2 - k1) / n^d = 0.5 * 8 / 16.
  CHECK(v.evidence["lhs"] == "1/4");
  CHECK(v.evidence["rhs"] == "9/32");
}

TEST_CASE("lipschitz bound on seeded fields") {
  const auto dist = DistributionSpec::two_point_penalty(0.6, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const WeightField f(seed, dist);
    CHECK(check_lipschitz(f, 3, 4.0 / 9, 5.0 / 9).status == Status::HoldsExactly);
    CounterRng rng(seed);
    double a = rng.uniform(), b = rng.uniform();
    if (a > b) std::swap(a, b);
    if (a == b || a == 0) continue;
    const auto v = check_lipschitz(f, 3, a, b);
    CHECK(v.status == Status::HoldsExactly);
    CHECK(to_json(check_lipschitz(replay(v.evidence), 3, a, b)) == to_json(v));
  }
  // Continuous laws are judged up to the solver tolerance.
  CHECK(check_lipschitz(WeightField(1, DistributionSpec::heavy_tail(2, 1, 3)), 3, 0.2, 0.5).status ==
        Status::HoldsWithinCI);
  CHECK_THROWS_AS(check_lipschitz(WeightField(1, dist), 3, 0.5, 0.2), PreconditionError);
}

TEST_CASE("origin consistency") {
  const WeightField one(1, DistributionSpec::degenerate(1.0));
  const auto v = check_origin_consistency(one, 3);
  CHECK(v.status == Status::HoldsExactly);
  CHECK(v.evidence["N_L"] == 9.0);
  // A hole at the origin pushes the optimum elsewhere.
  const auto hole = check_origin_consistency(one.with_override(Site{0, 0}, -5.0), 3);
  CHECK(hole.status == Status::Inconclusive);
  int applicable = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const WeightField f(seed, DistributionSpec::two_point_penalty(0.6, 1.0));
    const auto r = check_origin_consistency(f, 3);
    CHECK(r.status != Status::Violated);
    applicable += r.status == Status::HoldsExactly;
    CHECK(to_json(check_origin_consistency(replay(r.evidence), 3)) == to_json(r));
  }
  CHECK(applicable > 5);
}

TEST_CASE("G <= L N") {
  EstimateOptions o;
  o.reps = 3;
  const auto one = check_G_le_LN(DistributionSpec::degenerate(1.0), {3, 4}, o);
  CHECK(one.status == Status::HoldsExactly);
  const auto p1 = check_G_le_LN(DistributionSpec::two_point_penalty(1.0, 0.5), {3, 4}, o);
  CHECK(p1.status == Status::HoldsExactly);
  // Negative drift: the guard refuses to judge.
  CHECK(check_G_le_LN(DistributionSpec::degenerate(-1.0), {3}, o).status == Status::Inconclusive);
  o.reps = 10;
  const auto mc = check_G_le_LN(DistributionSpec::two_point_penalty(0.85, 0.5), {4, 5}, o);
  CHECK(mc.status == Status::HoldsWithinCI);
}

TEST_CASE("box coverage") {
  CoverageParams p;
  p.n = 16;
  p.ell = 4;
  p.condition = {0.5, 1.0, 5.0};
  SolverOptions h;
  h.heuristic = true;
  const auto full = check_box_coverage(WeightField(1, DistributionSpec::degenerate(1.0)), p, h);
  CHECK(full.status == Status::HoldsWithinCI);
  CHECK(full.evidence["fraction"] == 1.0);
  const auto neg = check_box_coverage(WeightField(1, DistributionSpec::degenerate(-1.0)), p, h);
  CHECK(neg.status == Status::Inconclusive);
  p.n = 15;
  CHECK_THROWS_AS(check_box_coverage(WeightField(1, DistributionSpec::degenerate(1.0)), p, h), PreconditionError);
}

TEST_CASE("concavity verdicts on constructed curves") {
  GtildeCurve c;
  c.n = 4;
  c.alphas = {0.25, 0.5, 0.75};
  c.sizes = {4, 8, 12};
  c.seeds = {1, 2};
  c.values = {{0.25, 0.5, 0.75}, {0.5, 0.75, 1.0}};
  CHECK(check_concavity(c, 0).status == Status::HoldsWithinCI);
  c.values = {{0.5, 0.25, 0.5}, {0.5, 0.25, 0.5}};
  CHECK(check_concavity(c, 0).status == Status::Violated);
  CHECK(check_concavity(c, 0.3).status == Status::HoldsWithinCI);
  c.alphas.pop_back();
  CHECK_THROWS_AS(check_concavity(c, 0), PreconditionError);
}

TEST_CASE("concavity of an estimated curve") {
  EstimateOptions o;
  o.reps = 10;
  const auto curve = estimate_Gtilde_curve(DistributionSpec::two_point_penalty(0.6, 1.0), 6,
                                           {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}, o);
  CHECK(check_concavity(curve, 2.0 / 36).status == Status::HoldsWithinCI);
}

TEST_CASE("random separation instances") {
  const auto v = check_separation(200, Box(Site{0, 0}, 6), 3);
  CHECK(v.status == Status::HoldsExactly);
  CHECK(v.evidence["separating"].get<std::size_t>() > 20);
  CHECK(v.evidence["separating"].get<std::size_t>() < 190);
  CHECK_THROWS_AS(check_separation(1, Box(Site{0, 0}, 7), 3), PreconditionError);
  CHECK(to_json(check_separation(50, Box(Site{0, 0}, 5), 9)) ==
        to_json(check_separation(50, Box(Site{0, 0}, 5), 9)));
}

TEST_CASE("verdict table") {
  const std::vector<Verdict> vs{{"a", Status::HoldsExactly, "ok", {}}, {"b", Status::Violated, "bad", {}}};
  const auto t = verdict_table(vs);
  CHECK(t.find("HoldsExactly") != std::string::npos);
  CHECK(t.find("Violated") != std::string::npos);
  CHECK(std::count(t.begin(), t.end(), '\n') == 3);
}
