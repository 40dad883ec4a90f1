#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "gla/weight_field.hpp"

using namespace gla;

TEST_CASE("scores are pure functions of seed and site") {
  const WeightField f(42, DistributionSpec::uniform(-1, 2));
  const WeightField g(42, DistributionSpec::uniform(-1, 2));
  for (int i = -20; i < 20; ++i) {
    const Site s{i, 3 * i + 1};
    CHECK(f.score(s) == f.score(s));
    CHECK(f.score(s) == g.score(s));
  }
  CHECK(WeightField(1, DistributionSpec::degenerate(1)).score(Site{5, 5}) == 1.0);
  const Window w = Window::from_box(Box(Site{-3, 4}, 9));
  const auto batch = f.scores(w);
  for (std::size_t i = 0; i < w.volume(); ++i) CHECK(batch[i] == f.score(w.site(i)));
}

TEST_CASE("two-point frequency within three standard deviations") {
  const double p = 0.37;
  const WeightField f(9, DistributionSpec::two_point_penalty(p, 0.5));
  const int n = 1000;
  const Window w = Window::from_box(Box(Site{0, 0}, n));
  const auto s = f.scores(w);
  const double ones = static_cast<double>(std::count(s.begin(), s.end(), 1.0));
  const double sd = std::sqrt(p * (1 - p) * n * n);
  CHECK(std::abs(ones - p * n * n) < 3 * sd);
  CHECK(std::all_of(s.begin(), s.end(), [](double x) { return x == 1.0 || x == -0.5; }));
}

TEST_CASE("empirical distribution matches the closed-form CDF") {
  // Kolmogorov-Smirnov statistic against the 0.1% critical value 1.95 / sqrt(N).
  const std::vector<DistributionSpec> laws{
      DistributionSpec::uniform(-2, 3), DistributionSpec::heavy_tail(2, 0.5, 2.0),
      DistributionSpec::shifted(DistributionSpec::uniform(0, 1), -0.25),
      DistributionSpec::truncated_above(DistributionSpec::uniform(-1, 1), 0.2)};
  for (const auto& law : laws) {
    const WeightField f(77, law);
    const auto s = f.scores(Window::from_box(Box(Site{0, 0}, 1000)));
    std::vector<double> xs(s.begin(), s.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double ks = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i + 1 < xs.size() && xs[i + 1] == xs[i]) continue;  // evaluate at the top of atoms
      const double emp = static_cast<double>(i + 1) / n;
      const double below = static_cast<double>(std::lower_bound(xs.begin(), xs.end(), xs[i]) - xs.begin()) / n;
      const double fx = law.cdf(xs[i]);
      const double fminus = law.cdf(std::nextafter(xs[i], -INFINITY));
      ks = std::max({ks, std::abs(emp - fx), std::abs(below - fminus)});
    }
    INFO(law.describe());
    CHECK(ks < 1.95 / std::sqrt(n));
  }
}

TEST_CASE("scores at nearby lags are uncorrelated") {
  const WeightField f(1234, DistributionSpec::uniform(0, 1));
  const int n = 1000;
  const Window w = Window::from_box(Box(Site{0, 0}, n + 4));
  const auto s = f.scores(w);
  for (int a = 0; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b) {
      if (a == 0 && b <= 0) continue;
      if (std::max(std::abs(a), std::abs(b)) > 4) continue;
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      const double count = static_cast<double>(n) * n;
      for (int i = 0; i < n; ++i)
        for (int j = 4; j < n; ++j) {
          const double x = s[w.index(Site{i, j})];
          const double y = s[w.index(Site{i + a, j + b})];
          sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
        }
      const double m = count - 4.0 * n;
      const double cov = sxy / m - (sx / m) * (sy / m);
      const double corr = cov / std::sqrt((sxx / m - sx * sx / m / m) * (syy / m - sy * sy / m / m));
      CHECK(std::abs(corr) < 4 / std::sqrt(m));
    }
}

TEST_CASE("shifted scores equal base scores plus epsilon") {
  const auto base = DistributionSpec::two_point_reward(0.3, 0.75);
  const WeightField f(5, base), g(5, DistributionSpec::shifted(base, 0.125));
  for (int i = 0; i < 200; ++i) CHECK(g.score(Site{i, -i}) == f.score(Site{i, -i}) + 0.125);
  CHECK_THROWS_AS(DistributionSpec::shifted(DistributionSpec::shifted(base, 1), 1), PreconditionError);
}

TEST_CASE("animal weight is additive") {
  const WeightField f(3, DistributionSpec::degenerate(2.5));
  const Region a = Region::from_box(Box(Site{0, 0}, 3));
  CHECK(animal_weight(f, a) == 22.5);
  const WeightField g(8, DistributionSpec::uniform(-1, 1));
  const Region b = Region::from_box(Box(Site{5, 5}, 2));
  CHECK(animal_weight(g, a.unite(b)) == doctest::Approx(animal_weight(g, a) + animal_weight(g, b)));
  double hand = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) hand += g.score(Site{i, j});
  CHECK(animal_weight(g, a) == doctest::Approx(hand));
}

TEST_CASE("tail integrability verdicts") {
  CHECK(tail_integrability(DistributionSpec::uniform(0, 1)) == Condition::Satisfied);
  CHECK(tail_integrability(DistributionSpec::two_point_penalty(0.5, 1)) == Condition::Satisfied);
  CHECK(tail_integrability(DistributionSpec::heavy_tail(2, 0.5, 2)) == Condition::Satisfied);
  CHECK(tail_integrability(DistributionSpec::heavy_tail(2, -1, 2)) == Condition::Violated);
  CHECK(tail_integrability(DistributionSpec::heavy_tail(2, 0, 3)) == Condition::Violated);
  CHECK(tail_integrability(DistributionSpec::shifted(DistributionSpec::heavy_tail(3, 1, 3), -1), 3) ==
        Condition::Satisfied);
  CHECK(tail_integrability(DistributionSpec::heavy_tail(3, -1, 2), 2) == Condition::Satisfied);
}

TEST_CASE("maximum exceedance probability") {
  const auto law = DistributionSpec::uniform(-1, 1);
  CHECK(max_exceedance_prob(law, 10, -2) == 1.0);
  CHECK(max_exceedance_prob(law, 10, 2) == 0.0);
  CHECK(max_exceedance_prob(law, 2, 0) == doctest::Approx(1 - std::pow(0.5, 4)));
  const auto heavy = DistributionSpec::heavy_tail(2, 0.5, 2);
  const double t = 100.0;
  CHECK(max_exceedance_prob(heavy, 3, t) == doctest::Approx(1 - std::pow(1 - heavy.survival(t), 9)));
}

TEST_CASE("heavy tail law") {
  const auto law = DistributionSpec::heavy_tail(2, 0.5, 2);
  const double atom = law.cdf(1.0);
  CHECK(atom == doctest::Approx(1 - std::pow(2.0, -2) * std::pow(std::log(2.0), -3)));
  CHECK(law.transform(0.0) == 1.0);
  for (double u : {0.9, 0.99, 0.999999}) {
    const double x = law.transform(u);
    CHECK(law.cdf(x) == doctest::Approx(u).epsilon(1e-9));
  }
  CHECK_THROWS_AS(DistributionSpec::heavy_tail(2, 0.5, 1.0), PreconditionError);
  CHECK_THROWS_AS(DistributionSpec::heavy_tail(2, 0.5, 1.1), PreconditionError);
}

TEST_CASE("supports and atomicity") {
  const auto pen = DistributionSpec::two_point_penalty(0.4, 0.5);
  CHECK(pen.inf_support() == -0.5);
  CHECK(pen.sup_support() == 1.0);
  CHECK(pen.atomic());
  CHECK(DistributionSpec::two_point_penalty(1, 0.5).inf_support() == 1.0);
  CHECK(DistributionSpec::shifted(pen, 1).inf_support() == 0.5);
  CHECK_FALSE(DistributionSpec::heavy_tail(2, 1, 3).atomic());
  CHECK(DistributionSpec::truncated_above(DistributionSpec::uniform(1, 2), 0).inf_support() == 1.0);
  const auto tr = DistributionSpec::truncated_above(DistributionSpec::uniform(-1, 1), 0.5);
  CHECK(tr.cdf(-0.1) == 0.0);
  CHECK(tr.cdf(0.0) == doctest::Approx(0.75));
  CHECK(tr.cdf(0.75) == doctest::Approx(0.875));
}

TEST_CASE("penalty parametrised by rho") {
  CHECK(rho_percolation_penalty(1, 0.5).lambda() == 0.5);
  CHECK(rho_percolation_penalty(3, 0.5).lambda() == 0.75);
  CHECK(rho_percolation_penalty(1e-9, 0.5).lambda() < 1e-8);
  CHECK_THROWS_AS(rho_percolation_penalty(0, 0.5), PreconditionError);
}

TEST_CASE("overrides replace single scores") {
  const WeightField f(3, DistributionSpec::uniform(0, 1));
  const WeightField g = f.with_override(Site{1, 1}, -7);
  CHECK(g.score(Site{1, 1}) == -7);
  CHECK(g.score(Site{1, 2}) == f.score(Site{1, 2}));
  CHECK(g.scores(Window::from_box(Box(Site{0, 0}, 3)))[4] == -7);
}
