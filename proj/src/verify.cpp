#include "gla/verify.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gla/hash.hpp"

namespace gla {

namespace {

using Rational = boost::multiprecision::cpp_rational;

Json field_json(const WeightField& f) {
  return Json{{"seed", f.seed()}, {"dim", f.dim()}, {"distribution", to_json(f.dist())}};
}

Rational exact_weight(const WeightField& f, const Region& r) {
  Rational s = 0;
  for (const auto& site : r.sites()) s += Rational(f.score(site));
  return s;
}

Verdict make(const char* claim, Status st, std::string note, Json ev) {
  return Verdict{claim, st, std::move(note), std::move(ev)};
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::HoldsExactly: return "HoldsExactly";
    case Status::HoldsWithinCI: return "HoldsWithinCI";
    case Status::Violated: return "Violated";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

Json to_json(const Verdict& v) {
  return Json{{"claim", v.claim}, {"status", to_string(v.status)}, {"note", v.note}, {"evidence", v.evidence}};
}

std::string verdict_table(const std::vector<Verdict>& vs) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %-14s %s\n", "claim", "status", "note");
  os << line;
  for (const auto& v : vs) {
    std::snprintf(line, sizeof line, "%-22s %-14s %s\n", v.claim.c_str(), to_string(v.status), v.note.c_str());
    os << line;
  }
  return os.str();
}

Verdict check_lipschitz(const WeightField& f, int n, double alpha1, double alpha2, const SolverOptions& opt) {
  const auto& dist = f.dist();
  if (!dist.bounded_below()) throw PreconditionError("the Lipschitz bound needs a law bounded below");
  if (!(0 < alpha1 && alpha1 < alpha2 && alpha2 < 1)) throw PreconditionError("need 0 < alpha1 < alpha2 < 1");
  if (opt.heuristic) throw PreconditionError("the Lipschitz bound needs exact maxima");
  const int d = f.dim();
  const Box box(Site::origin(d), n);
  const std::size_t k1 = alpha_size(alpha1, n, d), k2 = alpha_size(alpha2, n, d);
  auto best = [&](std::size_t k) -> std::pair<Rational, SolveResult> {
    if (k == 0) return {Rational(0), SolveResult{}};
    auto r = solve_box_fixed_size(f, box, k, opt);
    return {exact_weight(f, r.witness.sites), r};
  };
  const auto [g1, r1] = best(k1);
  const auto [g2, r2] = best(k2);
  Rational vol = 1;
  for (int i = 0; i < d; ++i) vol *= n;
  const Rational mu(dist.inf_support());
  const Rational lhs = (g1 - g2) / vol;
  const Rational rhs = -mu * (Rational(alpha2) - Rational(alpha1)) + abs(mu) / vol;
  Json ev = field_json(f);
  ev["n"] = n;
  ev["alpha1"] = alpha1;
  ev["alpha2"] = alpha2;
  ev["k1"] = k1;
  ev["k2"] = k2;
  ev["gtilde1"] = g1.convert_to<double>();
  ev["gtilde2"] = g2.convert_to<double>();
  ev["lhs"] = lhs.str();
  ev["rhs"] = rhs.str();
  ev["exact"] = dist.atomic();
  const bool optimal = (k1 == 0 || r1.optimal) && (k2 == 0 || r2.optimal);
  if (!optimal) return make("lipschitz", Status::Inconclusive, "solver did not prove optimality", ev);
  if (dist.atomic())
    return lhs <= rhs ? make("lipschitz", Status::HoldsExactly, "exact rational comparison", ev)
                      : make("lipschitz", Status::Violated, "lhs exceeds rhs", ev);
  // Continuous laws: optimality is only known up to the solver tolerance.
  const Rational slack = Rational(2 * kWeightTol) / vol;
  return lhs <= rhs + slack ? make("lipschitz", Status::HoldsWithinCI, "holds up to solver tolerance", ev)
                            : make("lipschitz", Status::Violated, "lhs exceeds rhs beyond solver tolerance", ev);
}

Verdict check_origin_consistency(const WeightField& f, int n, const SolverOptions& opt) {
  const auto box = solve_box(f, Box(Site::origin(f.dim()), n), opt);
  Json ev = field_json(f);
  ev["n"] = n;
  ev["G_n"] = box.value;
  ev["L_n"] = box.size();
  ev["witness"] = to_json(box.witness.sites);
  if (!box.witness.sites.contains(Site::origin(f.dim())))
    return make("origin_consistency", Status::Inconclusive, "box optimum avoids the origin", ev);
  const auto rooted = solve_rooted_fixed_size(f, static_cast<int>(box.size()), opt);
  ev["N_L"] = rooted.value;
  if (rooted.value >= box.value - kWeightTol)
    return make("origin_consistency", Status::HoldsExactly, "N_L >= G_n", ev);
  return make("origin_consistency", Status::Violated, "rooted maximum below the box maximum", ev);
}

Verdict check_G_le_LN(const DistributionSpec& dist, const std::vector<int>& scales, const EstimateOptions& opt) {
  const auto gl = estimate_G_L(dist, scales, opt);
  const auto nn = estimate_N(dist, scales, opt);
  Json ev{{"master_seed", opt.master_seed},
          {"reps", opt.reps},
          {"dim", opt.dim},
          {"heuristic", opt.solver.heuristic},
          {"distribution", to_json(dist)},
          {"surrogate", "per-scale means of n^-d G_n, n^-d L_n, n^-1 N_n; delta-method CI for the product"}};
  Json rows = Json::array();
  bool all_hold = true, all_exact = true, guard = true;
  for (int n : scales) {
    const auto g = gl.G.at(n), l = gl.L.at(n), q = nn.at(n);
    const double seg = g.ci / 1.96, sel = l.ci / 1.96, sen = q.ci / 1.96;
    const double combined = 1.96 * std::sqrt(seg * seg + q.mean * q.mean * sel * sel + l.mean * l.mean * sen * sen);
    const double prod = l.mean * q.mean;
    const bool super = q.mean - q.ci > 0;
    const bool holds = g.mean <= prod + combined + kWeightTol;
    guard = guard && super;
    all_hold = all_hold && holds;
    all_exact = all_exact && combined == 0 && g.mean <= prod + kWeightTol;
    rows.push_back({{"n", n},
                    {"G", to_json(g)},
                    {"L", to_json(l)},
                    {"N", to_json(q)},
                    {"LN", prod},
                    {"combined_ci", combined},
                    {"supercritical", super},
                    {"holds", holds}});
  }
  ev["scales"] = rows;
  if (!guard) return make("G_le_LN", Status::Inconclusive, "N estimate not positive beyond its CI", ev);
  if (!all_hold) return make("G_le_LN", Status::Violated, "G exceeds L N beyond the combined CI", ev);
  return all_exact ? make("G_le_LN", Status::HoldsExactly, "G <= L N with zero variance", ev)
                   : make("G_le_LN", Status::HoldsWithinCI, "G <= L N + combined CI at every scale", ev);
}

Verdict check_box_coverage(const WeightField& f, const CoverageParams& p, const SolverOptions& opt) {
  if (p.ell < 1 || p.n % p.ell != 0) throw PreconditionError("box side must be a multiple of the coarse scale");
  const int d = f.dim();
  const Coord cells = p.n / p.ell;
  Json ev = field_json(f);
  ev["n"] = p.n;
  ev["ell"] = p.ell;
  ev["c"] = p.condition.c;
  ev["lambda"] = p.condition.lambda;
  ev["rho"] = p.condition.rho;
  ev["margin"] = p.margin;
  ev["tolerance"] = p.tolerance;
  ev["heuristic"] = opt.heuristic;
  ev["surrogate"] = "coverage fraction >= 1 - tolerance at finite n";
  const auto greedy = solve_box(f, Box(Site::origin(d), p.n), opt);
  ev["greedy_weight"] = greedy.value;
  ev["greedy_size"] = greedy.size();
  const auto active = active_sites(f, p.ell, Box(Site::origin(d), cells), p.condition, p.box_solver);
  ev["active"] = active.mask.open_count();
  const auto comp = largest_component_in_box(active.mask, Box(Site::origin(d), cells), p.margin);
  ev["component"] = comp.size();
  if (comp.empty()) return make("box_coverage", Status::Inconclusive, "largest active component is empty", ev);
  if (greedy.value < p.condition.c * std::pow(static_cast<double>(p.n), d))
    return make("box_coverage", Status::Inconclusive, "greedy animal too light for the supercritical regime", ev);
  std::size_t met = 0;
  for (const auto& a : comp.sites()) {
    Site lo = a;
    for (int i = 0; i < d; ++i) lo[i] *= p.ell;
    const Box b(lo, p.ell);
    for (const auto& s : greedy.witness.sites.sites())
      if (b.contains(s)) {
        ++met;
        break;
      }
  }
  const double frac = static_cast<double>(met) / static_cast<double>(comp.size());
  ev["covered"] = met;
  ev["fraction"] = frac;
  if (frac >= 1 - p.tolerance) return make("box_coverage", Status::HoldsWithinCI, "coverage within tolerance", ev);
  return make("box_coverage", Status::Violated, "coverage below 1 - tolerance", ev);
}

Verdict check_concavity(const GtildeCurve& curve, double slack) {
  const auto m = curve.alphas.size();
  if (m < 3) throw PreconditionError("concavity needs at least three grid points");
  Json ev{{"n", curve.n}, {"dim", curve.dim}, {"alphas", curve.alphas}, {"sizes", curve.sizes},
          {"seeds", curve.seeds}, {"values", curve.values}, {"slack", slack}, {"lower_bound", curve.lower_bound}};
  Json rows = Json::array();
  bool ok = true;
  for (std::size_t j = 1; j + 1 < m; ++j) {
    const double a0 = curve.alphas[j - 1], a1 = curve.alphas[j], a2 = curve.alphas[j + 1];
    const double w = (a2 - a1) / (a2 - a0);
    std::vector<double> diff;
    for (const auto& row : curve.values) diff.push_back(row[j] - w * row[j - 1] - (1 - w) * row[j + 1]);
    const auto s = summarize(diff);
    const bool holds = s.mean + s.ci + slack >= -1e-12;
    ok = ok && holds;
    rows.push_back({{"alpha", a1}, {"gap", to_json(s)}, {"holds", holds}});
  }
  ev["triples"] = rows;
  return ok ? make("concavity", Status::HoldsWithinCI, "every interior triple within CI and slack", ev)
            : make("concavity", Status::Violated, "a triple falls below the chord", ev);
}

Verdict check_critical_scaling(const CriticalPoint& cp, const ScalingDiagnostic& diag) {
  Json rows = Json::array();
  for (int n : diag.series.scales()) rows.push_back({{"n", n}, {"value", to_json(diag.series.at(n))}});
  Json ev{{"eps_star", cp.eps_star}, {"converged", cp.converged}, {"c", diag.c_exponent},
          {"series", rows}, {"lower_bound", diag.series.lower_bound()},
          {"surrogate", "pooled means of (log n)^-c n^-1 G_n nonincreasing along the scales"}};
  if (!cp.converged) return make("critical_scaling", Status::Inconclusive, "bisection did not reach |N| < CI", ev);
  if (diag.nonincreasing) return make("critical_scaling", Status::HoldsWithinCI, "nonincreasing pooled means", ev);
  return make("critical_scaling", Status::Inconclusive,
              diag.nonincreasing_within_ci ? "increase within CI" : "series increases at these scales", ev);
}

Verdict check_separation(std::size_t trials, const Box& window, std::uint64_t seed) {
  if (window.dim() != 2 || window.side > 6) throw PreconditionError("separation checks need a 2D window of side <= 6");
  const Region domain = Region::from_box(window);
  const auto all = domain.sites();
  Json ev{{"seed", seed}, {"trials", trials}, {"window", to_json(window)}};
  std::size_t separating = 0, failures = 0;
  Json first_failure;
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng rng(site_hash(seed, t));
    auto grow = [&](Region within, std::size_t size) {
      auto pool = within.sites();
      Region r(2);
      r.insert(pool[rng.below(pool.size())]);
      for (std::size_t guard = 0; r.size() < size && guard < 200; ++guard) {
        const auto cand = boundary(r, within).sites();
        if (cand.empty()) break;
        r.insert(cand[rng.below(cand.size())]);
      }
      return r;
    };
    const Region c = grow(domain, 1 + rng.below(4));
    const Region rest = domain.minus(c).minus(boundary(c, domain));
    if (rest.empty()) continue;
    const Region d = grow(rest, 1 + rng.below(3));
    Region e(2);
    if (rng.below(2)) {
      // A wall: the boundary of a blob around c, thinned and padded with noise.
      Region blob = c;
      for (std::size_t k = rng.below(3); k > 0; --k) blob = blob.unite(boundary(blob, domain));
      for (const auto& s : boundary(blob, domain).sites())
        if (rng.uniform() < 0.9) e.insert(s);
    }
    const double q = 0.1 + 0.3 * rng.uniform();
    for (const auto& s : all)
      if (rng.uniform() < q) e.insert(s);
    e = e.minus(c).minus(d);
    const bool truth = separates(e, c, d, domain, false);
    const auto sub = connected_separating_subset(e, c, d, domain);
    bool pass = truth ? sub && sub->subset_of(e) && is_connected(*sub, Adjacency::LGraph) &&
                            separates(*sub, c, d, domain, false)
                      : !sub.has_value();
    separating += truth;
    if (!pass) {
      if (failures == 0)
        first_failure = {{"trial", t}, {"c", to_json(c)}, {"d", to_json(d)}, {"e", to_json(e)}, {"separates", truth}};
      ++failures;
    }
  }
  ev["separating"] = separating;
  ev["failures"] = failures;
  if (failures) {
    ev["first_failure"] = first_failure;
    return make("separation", Status::Violated, "separating subset check failed", ev);
  }
  return make("separation", Status::HoldsExactly, std::to_string(separating) + " separating instances passed", ev);
}

}  // namespace gla
