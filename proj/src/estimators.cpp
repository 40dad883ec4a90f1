#include "gla/estimators.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "gla/hash.hpp"
#include "gla/parallel.hpp"

namespace gla {

namespace {

using Rational = boost::multiprecision::cpp_rational;

void check_common(const std::vector<int>& n_list, const EstimateOptions& opt) {
  if (n_list.empty()) throw PreconditionError("empty scale list");
  for (int n : n_list)
    if (n < 1) throw PreconditionError("scales must be >= 1");
  if (opt.reps == 0) throw PreconditionError("reps must be >= 1");
}

SolverOptions replica_solver(const EstimateOptions& opt, std::uint64_t seed) {
  SolverOptions s = opt.solver;
  s.heuristic_seed = site_hash(opt.solver.heuristic_seed, seed);
  return s;
}

double pow_n(int n, int d) { return std::pow(static_cast<double>(n), d); }

}  // namespace

std::size_t alpha_size(double alpha, int n, int dim) {
  if (!(alpha >= 0) || !std::isfinite(alpha)) throw PreconditionError("alpha must be finite and >= 0");
  Rational v(alpha);
  for (int i = 0; i < dim; ++i) v *= n;
  const auto q = boost::multiprecision::numerator(v) / boost::multiprecision::denominator(v);
  return q.convert_to<std::size_t>();
}

DistributionSpec shift_by(const DistributionSpec& base, double eps) {
  if (base.family() == Family::Shifted) return DistributionSpec::shifted(base.base(), base.eps() + eps);
  return DistributionSpec::shifted(base, eps);
}

EstimateSeries estimate_N(const DistributionSpec& dist, const std::vector<int>& n_list, const EstimateOptions& opt) {
  check_common(n_list, opt);
  EstimateSeries out("N_n/n", 1);
  out.set_lower_bound(opt.solver.heuristic);
  std::vector<double> raw(n_list.size() * opt.reps);
  parallel_for(raw.size(), opt.jobs, [&](std::size_t i) {
    const int n = n_list[i / opt.reps];
    const auto seed = replica_seed(opt.master_seed, i % opt.reps);
    const WeightField f(seed, dist, opt.dim);
    raw[i] = solve_rooted_fixed_size(f, n, replica_solver(opt, seed)).value;
  });
  for (std::size_t i = 0; i < raw.size(); ++i)
    out.add(n_list[i / opt.reps], replica_seed(opt.master_seed, i % opt.reps), raw[i]);
  out.sort();
  return out;
}

GLEstimate estimate_G_L(const DistributionSpec& dist, const std::vector<int>& n_list, const EstimateOptions& opt) {
  check_common(n_list, opt);
  GLEstimate out{EstimateSeries("G_n/n^d", opt.dim), EstimateSeries("L_n/n^d", opt.dim), 0};
  out.G.set_lower_bound(opt.solver.heuristic);
  std::vector<SolveResult> res(n_list.size() * opt.reps);
  parallel_for(res.size(), opt.jobs, [&](std::size_t i) {
    const int n = n_list[i / opt.reps];
    const auto seed = replica_seed(opt.master_seed, i % opt.reps);
    const WeightField f(seed, dist, opt.dim);
    res[i] = solve_box(f, Box(Site::origin(opt.dim), n), replica_solver(opt, seed));
  });
  for (std::size_t i = 0; i < res.size(); ++i) {
    const int n = n_list[i / opt.reps];
    const auto seed = replica_seed(opt.master_seed, i % opt.reps);
    out.G.add(n, seed, res[i].value);
    out.L.add(n, seed, static_cast<double>(res[i].size()));
  }
  out.G.sort();
  out.L.sort();
  double c = std::numeric_limits<double>::infinity();
  for (int n : out.G.scales()) {
    const double m = out.G.at(n).mean;
    c = m > 0 ? std::min({c, m, 1 / m}) : 0;
  }
  out.band_c = std::isfinite(c) ? c : 0;
  return out;
}

std::vector<Summary> GtildeCurve::summaries() const {
  std::vector<Summary> out;
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    std::vector<double> xs;
    for (const auto& row : values) xs.push_back(row[j]);
    out.push_back(summarize(xs));
  }
  return out;
}

double GtildeCurve::small_alpha_slope() const {
  if (alphas.size() < 2) return 0;
  const auto s = summaries();
  return (s[1].mean - s[0].mean) / (alphas[1] - alphas[0]);
}

std::string GtildeCurve::to_csv() const {
  std::ostringstream os;
  os << "statistic,n,alpha,k,seed,normalized\n";
  for (std::size_t r = 0; r < values.size(); ++r)
    for (std::size_t j = 0; j < alphas.size(); ++j)
      os << "Gtilde_n/n^d," << n << ',' << format_number(alphas[j]) << ',' << sizes[j] << ',' << seeds[r] << ','
         << format_number(values[r][j]) << '\n';
  return os.str();
}

GtildeCurve estimate_Gtilde_curve(const DistributionSpec& dist, int n, const std::vector<double>& alphas,
                                  const EstimateOptions& opt) {
  check_common({n}, opt);
  if (alphas.empty()) throw PreconditionError("empty alpha grid");
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    if (!(alphas[j] > 0 && alphas[j] <= 1)) throw PreconditionError("alpha must lie in (0, 1]");
    if (j && !(alphas[j] > alphas[j - 1])) throw PreconditionError("alpha grid must be increasing");
  }
  GtildeCurve out;
  out.n = n;
  out.dim = opt.dim;
  out.alphas = alphas;
  out.lower_bound = opt.solver.heuristic;
  for (double a : alphas) out.sizes.push_back(alpha_size(a, n, opt.dim));
  const Box box(Site::origin(opt.dim), n);
  const double norm = pow_n(n, opt.dim);
  out.values.assign(opt.reps, std::vector<double>(alphas.size(), 0.0));
  for (std::size_t r = 0; r < opt.reps; ++r) out.seeds.push_back(replica_seed(opt.master_seed, r));
  parallel_for(opt.reps, opt.jobs, [&](std::size_t r) {
    const WeightField f(out.seeds[r], dist, opt.dim);
    const auto sopt = replica_solver(opt, out.seeds[r]);
    const bool all_k = !sopt.heuristic && opt.dim == 2 && n <= kProfileMaxWidth;
    std::vector<double> table;
    if (all_k) table = box_fixed_size_profile(f, box, out.sizes.back(), sopt);
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      const auto k = out.sizes[j];
      if (k == 0) continue;
      const double g = all_k ? table[k - 1] : solve_box_fixed_size(f, box, k, sopt).value;
      out.values[r][j] = g / norm;
    }
  });
  return out;
}

CriticalPoint locate_criticality(const DistributionSpec& base, double lo, double hi, int n_probe,
                                 const EstimateOptions& opt, double tol, int max_iter) {
  if (!(lo < hi)) throw PreconditionError("bracket must satisfy lo < hi");
  auto probe = [&](double eps) { return estimate_N(shift_by(base, eps), {n_probe}, opt).at(n_probe); };
  const auto at_lo = probe(lo);
  const auto at_hi = probe(hi);
  if (!(at_lo.mean <= 0 && at_hi.mean >= 0) || (at_lo.mean == 0 && at_hi.mean == 0))
    throw PreconditionError("bracket does not straddle a sign change of the N estimate");
  CriticalPoint cp;
  cp.lo = lo;
  cp.hi = hi;
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (cp.lo + cp.hi);
    const auto s = probe(mid);
    cp.history.push_back({mid, s.mean, s.ci, cp.lo, cp.hi});
    cp.eps_star = mid;
    if (std::abs(s.mean) <= s.ci && s.ci <= tol) {
      cp.converged = true;
      break;
    }
    if (s.mean > 0) {
      cp.hi = mid;
    } else {
      cp.lo = mid;
    }
    if (cp.hi - cp.lo <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) break;
  }
  return cp;
}

ScalingDiagnostic critical_scaling_diag(const DistributionSpec& dist, double c_exponent, const std::vector<int>& n_list,
                                        const EstimateOptions& opt) {
  check_common(n_list, opt);
  const double need = static_cast<double>(opt.dim) / (opt.dim - 1);
  if (!(c_exponent > need)) throw PreconditionError("scaling exponent must exceed d/(d-1)");
  for (int n : n_list)
    if (n < 2) throw PreconditionError("scaling diagnostic needs n >= 2");
  ScalingDiagnostic out;
  out.c_exponent = c_exponent;
  const auto gl = estimate_G_L(dist, n_list, opt);
  out.series = EstimateSeries("G_n/(n (log n)^c)", 1);
  out.series.set_lower_bound(opt.solver.heuristic);
  for (const auto& r : gl.G.records()) {
    const double g = r.raw;
    out.series.add(r.n, r.seed, g, g / (r.n * std::pow(std::log(static_cast<double>(r.n)), c_exponent)));
  }
  out.series.sort();
  out.nonincreasing = true;
  out.nonincreasing_within_ci = true;
  const auto ns = out.series.scales();
  for (std::size_t i = 1; i < ns.size(); ++i) {
    const auto a = out.series.at(ns[i - 1]);
    const auto b = out.series.at(ns[i]);
    if (b.mean > a.mean) out.nonincreasing = false;
    if (b.mean > a.mean + std::hypot(a.ci, b.ci)) out.nonincreasing_within_ci = false;
  }
  return out;
}

}  // namespace gla
