#include "gla/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "gla/coarse_grain.hpp"
#include "gla/estimators.hpp"
#include "gla/hash.hpp"
#include "gla/percolation.hpp"
#include "gla/verify.hpp"

#ifndef GLA_VERSION
#define GLA_VERSION "0.0.0"
#endif

namespace gla::cli {

namespace fs = std::filesystem;

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"sample", "solve", "estimate", "scan", "critical", "verify", "oracle"};
  return c;
}

namespace {

const std::vector<std::string> kChecks{"lipschitz", "origin", "g_le_ln", "coverage", "concavity", "separation"};

Json penalty(double p, double lambda) { return to_json(DistributionSpec::two_point_penalty(p, lambda)); }

Json grid(double lo, double step, int count) {
  Json a = Json::array();
  for (int i = 0; i < count; ++i) a.push_back(std::round((lo + step * i) * 1e12) / 1e12);
  return a;
}

Json defaults(const std::string& cmd) {
  Json d{{"seed", 1},
         {"mode", "exact"},
         {"dim", 2},
         {"out", "out"},
         {"budget", {{"max_exact_size", 18}, {"max_nodes", 10'000'000}}},
         {"anneal", {{"restarts", 32}, {"moves", 10'000}, {"cooling", 0.995}}}};
  const Json origin_box{{"anchor", {0, 0}}, {"side", 4}};
  if (cmd == "sample") {
    d["distribution"] = penalty(0.7, 1.0);
    d["box"] = {{"anchor", {0, 0}}, {"side", 8}};
  } else if (cmd == "solve") {
    d["distribution"] = penalty(0.7, 1.0);
    d["problem"] = "box";
    d["size"] = 6;
    d["root"] = nullptr;
    d["box"] = origin_box;
    d["k"] = 4;
  } else if (cmd == "estimate") {
    d["distribution"] = penalty(0.7, 1.0);
    d["statistic"] = "N";
    d["n_list"] = {4, 6, 8};
    d["reps"] = 20;
    d["n"] = 6;
    d["alphas"] = grid(0.1, 0.1, 9);
  } else if (cmd == "scan") {
    d["distribution"] = penalty(0.5, 1.0);
    d["parameter"] = "p";
    d["values"] = grid(0.2, 0.1, 8);
    d["n"] = 6;
    d["reps"] = 20;
  } else if (cmd == "critical") {
    d["distribution"] = to_json(DistributionSpec::uniform(-1, 1));
    d["bracket"] = {-1.0, 1.0};
    d["n_probe"] = 6;
    d["reps"] = 20;
    d["tol"] = 0.05;
    d["max_iter"] = 20;
    d["c_exponent"] = 2.5;
    d["n_list"] = {8, 16, 24};
    d["scaling_mode"] = "heuristic";
  } else if (cmd == "verify") {
    d["lipschitz"] = {{"distribution", penalty(0.6, 1.0)}, {"n", 3}, {"instances", 100}};
    d["origin"] = {{"distribution", penalty(0.6, 1.0)}, {"n", 3}, {"instances", 50}};
    d["g_le_ln"] = {{"distribution", penalty(0.85, 0.5)}, {"scales", {6, 8}}, {"reps", 20}};
    d["coverage"] = {{"distribution", penalty(0.9, 1.0)}, {"n", 32}, {"ell", 8}, {"c", 0.5}, {"lambda", 1.0},
                     {"rho", 5.0}, {"margin", 1}, {"tolerance", 0.1}, {"seeds", 4}, {"greedy_mode", "heuristic"}};
    d["concavity"] = {{"distribution", penalty(0.6, 1.0)}, {"n", 6}, {"alphas", grid(0.1, 0.1, 9)}, {"reps", 20}};
    d["separation"] = {{"trials", 500}, {"side", 6}};
  } else if (cmd == "oracle") {
    d["distribution"] = penalty(0.7, 1.0);
    d["box"] = {{"anchor", {0, 0}}, {"side", 3}};
    d["k"] = 0;
    d["root"] = nullptr;
    d["cap"] = 1'000'000;
  } else {
    throw SchemaError("unknown command '" + cmd + "'");
  }
  return d;
}

void merge_into(Json& base, const Json& user, const std::string& path) {
  if (!user.is_object()) throw SchemaError(path + ": expected an object");
  for (const auto& [k, v] : user.items()) {
    const std::string where = path.empty() ? k : path + "." + k;
    if (!base.contains(k)) throw SchemaError(where + ": unknown key");
    auto& slot = base[k];
    if (slot.is_object() && k != "distribution") {
      merge_into(slot, v, where);
    } else {
      slot = v;
    }
  }
}

bool is_manifest(const Json& j) {
  return j.is_object() && j.contains("command") && j.contains("config") && j.contains("config_hash");
}

// ---------------------------------------------------------------------------
// Typed access

std::uint64_t get_u64(const Json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_number_integer() || (j[key].is_number_integer() && j[key].get<long long>() < 0 &&
                                                          !j[key].is_number_unsigned()))
    throw SchemaError(std::string(what) + ": '" + key + "' must be a non-negative integer");
  return j[key].get<std::uint64_t>();
}

long long get_int_in(const Json& j, const char* key, const char* what, long long lo, long long hi) {
  const auto v = get_integer(j, key, what);
  if (v < lo || v > hi)
    throw SchemaError(std::string(what) + ": '" + key + "' must lie in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return v;
}

std::string get_string(const Json& j, const char* key, const char* what, std::initializer_list<const char*> allowed) {
  if (!j.contains(key) || !j[key].is_string()) throw SchemaError(std::string(what) + ": '" + key + "' must be a string");
  const auto s = j[key].get<std::string>();
  for (const char* a : allowed)
    if (s == a) return s;
  throw SchemaError(std::string(what) + ": invalid value '" + s + "' for '" + key + "'");
}

std::vector<int> get_int_list(const Json& j, const char* key, const char* what, int lo, int hi) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty())
    throw SchemaError(std::string(what) + ": '" + key + "' must be a non-empty array");
  std::vector<int> out;
  for (const auto& e : j[key]) {
    if (!e.is_number_integer() || e.get<long long>() < lo || e.get<long long>() > hi)
      throw SchemaError(std::string(what) + ": '" + key + "' entries must be integers in [" + std::to_string(lo) +
                        ", " + std::to_string(hi) + "]");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<double> get_number_list(const Json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty())
    throw SchemaError(std::string(what) + ": '" + key + "' must be a non-empty array");
  std::vector<double> out;
  for (const auto& e : j[key]) {
    if (!e.is_number()) throw SchemaError(std::string(what) + ": '" + key + "' entries must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

DistributionSpec get_distribution(const Json& j, const char* what) {
  if (!j.contains("distribution")) throw SchemaError(std::string(what) + ": missing 'distribution'");
  return distribution_from_json(j["distribution"]);
}

struct Common {
  std::uint64_t seed = 0;
  int dim = 2;
  SolverOptions solver;
};

SolverOptions with_mode(SolverOptions s, const std::string& mode) {
  s.heuristic = mode == "heuristic";
  return s;
}

Common parse_common(const Json& c) {
  Common out;
  out.seed = get_u64(c, "seed", "config");
  out.dim = static_cast<int>(get_int_in(c, "dim", "config", 2, kMaxDim));
  const auto mode = get_string(c, "mode", "config", {"exact", "heuristic"});
  if (!c["out"].is_string()) throw SchemaError("config: 'out' must be a string");
  const auto& b = c["budget"];
  out.solver.max_exact_size = static_cast<std::size_t>(get_int_in(b, "max_exact_size", "budget", 1, 64));
  out.solver.max_nodes = static_cast<std::uint64_t>(get_int_in(b, "max_nodes", "budget", 1, 1LL << 40));
  const auto& a = c["anneal"];
  out.solver.restarts = static_cast<int>(get_int_in(a, "restarts", "anneal", 1, 1 << 20));
  out.solver.moves_per_restart = static_cast<int>(get_int_in(a, "moves", "anneal", 1, 1 << 30));
  out.solver.cooling = get_number(a, "cooling", "anneal");
  if (!(out.solver.cooling > 0 && out.solver.cooling < 1)) throw SchemaError("anneal: 'cooling' must lie in (0, 1)");
  out.solver = with_mode(out.solver, mode);
  out.solver.heuristic_seed = out.seed;
  return out;
}

EstimateOptions estimate_options(const Common& c, std::size_t reps, int jobs) {
  EstimateOptions o;
  o.reps = reps;
  o.master_seed = c.seed;
  o.solver = c.solver;
  o.jobs = jobs;
  o.dim = c.dim;
  return o;
}

Box get_box(const Json& j, const char* key, int dim) {
  const Box b = box_from_json(j[key]);
  if (b.dim() != dim) throw SchemaError(std::string(key) + ": anchor dimension differs from 'dim'");
  return b;
}

std::optional<Site> get_root(const Json& j, int dim) {
  if (j["root"].is_null()) return std::nullopt;
  const Site s = site_from_json(j["root"]);
  if (s.dim != dim) throw SchemaError("root: dimension differs from 'dim'");
  return s;
}

// ---------------------------------------------------------------------------
// Output

// Creates the run directory on first use, so a config rejected during
// validation leaves nothing behind. The manifest always comes first.
class Writer {
 public:
  Writer(fs::path dir, std::string manifest) : dir_(std::move(dir)), manifest_(std::move(manifest)) {}
  void write(const std::string& name, const std::string& content) {
    if (files_.empty()) {
      fs::create_directories(dir_);
      put("manifest.json", manifest_);
    }
    put(name, content);
  }
  void finish() {
    if (files_.empty()) write("manifest.json", manifest_);
  }
  const std::vector<std::string>& files() const { return files_; }

 private:
  void put(const std::string& name, const std::string& content) {
    std::ofstream os(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + (dir_ / name).string());
    os << content;
    if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
  }

  fs::path dir_;
  std::string manifest_;
  std::vector<std::string> files_;
};

std::string plot_rows(const std::vector<std::pair<double, Summary>>& pts) {
  std::ostringstream os;
  os << "x,y,ci\n";
  for (const auto& [x, s] : pts) os << format_number(x) << ',' << format_number(s.mean) << ',' << format_number(s.ci) << '\n';
  return os.str();
}

Json series_summary(const EstimateSeries& s) {
  Json rows = Json::array();
  for (int n : s.scales()) rows.push_back({{"n", n}, {"summary", to_json(s.at(n))}});
  return Json{{"statistic", s.statistic()}, {"lower_bound", s.lower_bound()}, {"scales", rows}};
}

std::vector<std::pair<double, Summary>> by_scale(const EstimateSeries& s) {
  std::vector<std::pair<double, Summary>> pts;
  for (int n : s.scales()) pts.emplace_back(n, s.at(n));
  return pts;
}

// ---------------------------------------------------------------------------
// Commands. Each validates its whole config before computing anything.

struct Env {
  const Json& cfg;
  const Common& common;
  const Invocation& inv;
  Writer& out;
  std::ostream& log;
};

int cmd_sample(Env& e) {
  const auto dist = get_distribution(e.cfg, "sample");
  const Box box = get_box(e.cfg, "box", e.common.dim);
  const WeightField f(e.common.seed, dist, e.common.dim);
  const Window w = Window::from_box(box);
  const auto u = f.uniforms(w);
  const auto s = f.scores(w);
  std::ostringstream os;
  for (int i = 0; i < e.common.dim; ++i) os << 'x' << i << ',';
  os << "uniform,score\n";
  double sum = 0, lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < w.volume(); ++i) {
    const Site site = w.site(i);
    for (int k = 0; k < e.common.dim; ++k) os << site[k] << ',';
    os << format_number(u[i]) << ',' << format_number(s[i]) << '\n';
    sum += s[i];
    lo = std::min(lo, s[i]);
    hi = std::max(hi, s[i]);
  }
  e.out.write("field.csv", os.str());
  e.out.write("summary.json", dump(Json{{"distribution", to_json(dist)},
                                        {"box", to_json(box)},
                                        {"sites", w.volume()},
                                        {"mean", sum / static_cast<double>(w.volume())},
                                        {"min", lo},
                                        {"max", hi},
                                        {"tail_integrability", to_string(tail_integrability(dist, e.common.dim))}}));
  e.log << "sampled " << w.volume() << " sites\n";
  return kOk;
}

int cmd_solve(Env& e) {
  const auto dist = get_distribution(e.cfg, "solve");
  const auto problem = get_string(e.cfg, "problem", "solve", {"rooted", "box", "box_fixed"});
  const int size = static_cast<int>(get_int_in(e.cfg, "size", "solve", 1, 1 << 20));
  const Box box = get_box(e.cfg, "box", e.common.dim);
  const auto k = static_cast<std::size_t>(get_int_in(e.cfg, "k", "solve", 1, 1 << 30));
  const auto root = get_root(e.cfg, e.common.dim);
  const WeightField f(e.common.seed, dist, e.common.dim);
  SolveResult r;
  if (problem == "rooted") {
    r = solve_rooted_fixed_size(f, size, e.common.solver, root);
  } else if (problem == "box") {
    r = solve_box(f, box, e.common.solver);
  } else {
    r = solve_box_fixed_size(f, box, k, e.common.solver);
  }
  e.out.write("result.json", dump(to_json(r)));
  e.log << problem << ": value " << format_number(r.value) << ", size " << r.size()
        << (r.optimal ? "" : " (lower bound)") << '\n';
  return kOk;
}

int cmd_estimate(Env& e) {
  const auto dist = get_distribution(e.cfg, "estimate");
  const auto stat = get_string(e.cfg, "statistic", "estimate", {"N", "G_L", "Gtilde"});
  const auto n_list = get_int_list(e.cfg, "n_list", "estimate", 1, 4096);
  const auto reps = static_cast<std::size_t>(get_int_in(e.cfg, "reps", "estimate", 1, 1 << 20));
  const int n = static_cast<int>(get_int_in(e.cfg, "n", "estimate", 1, 4096));
  const auto alphas = get_number_list(e.cfg, "alphas", "estimate");
  const auto opt = estimate_options(e.common, reps, e.inv.jobs);
  std::vector<std::pair<double, Summary>> plot;
  if (stat == "N") {
    const auto s = estimate_N(dist, n_list, opt);
    e.out.write("series.csv", s.to_csv());
    e.out.write("summary.json", dump(series_summary(s)));
    plot = by_scale(s);
  } else if (stat == "G_L") {
    const auto gl = estimate_G_L(dist, n_list, opt);
    e.out.write("series.csv", gl.G.to_csv() + gl.L.to_csv(false));
    e.out.write("summary.json",
                dump(Json{{"G", series_summary(gl.G)}, {"L", series_summary(gl.L)}, {"band_c", gl.band_c}}));
    plot = by_scale(gl.G);
  } else {
    const auto curve = estimate_Gtilde_curve(dist, n, alphas, opt);
    e.out.write("curve.csv", curve.to_csv());
    Json rows = Json::array();
    const auto sums = curve.summaries();
    for (std::size_t j = 0; j < sums.size(); ++j) {
      rows.push_back({{"alpha", curve.alphas[j]}, {"k", curve.sizes[j]}, {"summary", to_json(sums[j])}});
      plot.emplace_back(curve.alphas[j], sums[j]);
    }
    e.out.write("summary.json", dump(Json{{"n", n},
                                          {"lower_bound", curve.lower_bound},
                                          {"alphas", rows},
                                          {"small_alpha_slope", curve.small_alpha_slope()}}));
  }
  if (e.inv.plot_data) e.out.write("plot.csv", plot_rows(plot));
  e.log << "estimated " << stat << '\n';
  return kOk;
}

int cmd_scan(Env& e) {
  const auto base = get_distribution(e.cfg, "scan");
  const auto param = get_string(e.cfg, "parameter", "scan", {"p", "lambda", "a", "b", "eps", "c", "alpha", "x0"});
  const auto values = get_number_list(e.cfg, "values", "scan");
  const int n = static_cast<int>(get_int_in(e.cfg, "n", "scan", 1, 4096));
  const auto reps = static_cast<std::size_t>(get_int_in(e.cfg, "reps", "scan", 1, 1 << 20));
  if (!e.cfg["distribution"].contains(param))
    throw SchemaError("scan: distribution has no parameter '" + param + "'");
  std::vector<DistributionSpec> laws;
  for (double v : values) {
    Json j = e.cfg["distribution"];
    j[param] = v;
    laws.push_back(distribution_from_json(j));
  }
  (void)base;
  const auto opt = estimate_options(e.common, reps, e.inv.jobs);
  std::ostringstream table, records;
  table << "parameter,value,N_mean,N_ci,G_mean,G_ci,L_mean,L_ci\n";
  records << "parameter,value,seed,N_n,G_n,L_n\n";
  std::vector<std::pair<double, Summary>> plot;
  std::vector<std::vector<double>> per_seed;
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const auto nn = estimate_N(laws[i], {n}, opt);
    const auto gl = estimate_G_L(laws[i], {n}, opt);
    const auto sn = nn.at(n), sg = gl.G.at(n), sl = gl.L.at(n);
    table << param << ',' << format_number(values[i]) << ',' << format_number(sn.mean) << ',' << format_number(sn.ci)
          << ',' << format_number(sg.mean) << ',' << format_number(sg.ci) << ',' << format_number(sl.mean) << ','
          << format_number(sl.ci) << '\n';
    std::vector<double> raw;
    for (std::size_t r = 0; r < nn.records().size(); ++r) {
      records << param << ',' << format_number(values[i]) << ',' << nn.records()[r].seed << ','
              << format_number(nn.records()[r].raw) << ',' << format_number(gl.G.records()[r].raw) << ','
              << format_number(gl.L.records()[r].raw) << '\n';
      raw.push_back(nn.records()[r].raw);
    }
    per_seed.push_back(std::move(raw));
    plot.emplace_back(values[i], sn);
  }
  // Shared seeds couple the laws; for two-point families ordered by p the
  // per-seed maxima must be monotone.
  bool monotone = true;
  for (std::size_t i = 1; i < per_seed.size(); ++i)
    for (std::size_t r = 0; r < per_seed[i].size(); ++r)
      if ((values[i] - values[i - 1]) * (per_seed[i][r] - per_seed[i - 1][r]) < -kWeightTol) monotone = false;
  e.out.write("scan.csv", table.str());
  e.out.write("records.csv", records.str());
  e.out.write("summary.json", dump(Json{{"parameter", param}, {"n", n}, {"per_seed_monotone", monotone}}));
  if (e.inv.plot_data) e.out.write("plot.csv", plot_rows(plot));
  e.log << "scanned " << values.size() << " values of " << param << '\n';
  return kOk;
}

int cmd_critical(Env& e) {
  const auto base = get_distribution(e.cfg, "critical");
  const auto bracket = get_number_list(e.cfg, "bracket", "critical");
  if (bracket.size() != 2) throw SchemaError("critical: 'bracket' must have two entries");
  const int n_probe = static_cast<int>(get_int_in(e.cfg, "n_probe", "critical", 1, 64));
  const auto reps = static_cast<std::size_t>(get_int_in(e.cfg, "reps", "critical", 1, 1 << 20));
  const double tol = get_number(e.cfg, "tol", "critical");
  const int max_iter = static_cast<int>(get_int_in(e.cfg, "max_iter", "critical", 1, 200));
  const double c = get_number(e.cfg, "c_exponent", "critical");
  const auto n_list = get_int_list(e.cfg, "n_list", "critical", 2, 4096);
  const auto smode = get_string(e.cfg, "scaling_mode", "critical", {"exact", "heuristic"});
  const auto opt = estimate_options(e.common, reps, e.inv.jobs);
  const auto cp = locate_criticality(base, bracket[0], bracket[1], n_probe, opt, tol, max_iter);
  auto sopt = opt;
  sopt.solver = with_mode(sopt.solver, smode);
  const auto diag = critical_scaling_diag(shift_by(base, cp.eps_star), c, n_list, sopt);
  const auto verdict = check_critical_scaling(cp, diag);
  Json hist = Json::array();
  for (const auto& s : cp.history)
    hist.push_back({{"eps", s.eps}, {"mean", s.mean}, {"ci", s.ci}, {"lo", s.lo}, {"hi", s.hi}});
  e.out.write("critical.json", dump(Json{{"eps_star", cp.eps_star},
                                         {"lo", cp.lo},
                                         {"hi", cp.hi},
                                         {"converged", cp.converged},
                                         {"history", hist},
                                         {"scaling", to_json(verdict)}}));
  e.out.write("scaling.csv", diag.series.to_csv());
  if (e.inv.plot_data) e.out.write("plot.csv", plot_rows(by_scale(diag.series)));
  e.log << "eps* = " << format_number(cp.eps_star) << (cp.converged ? "" : " (not converged)") << "; scaling "
        << to_string(verdict.status) << '\n';
  return kOk;
}

Verdict aggregate(const std::string& claim, const std::vector<Verdict>& vs) {
  std::size_t counts[4] = {0, 0, 0, 0};
  const Verdict* first_violation = nullptr;
  for (const auto& v : vs) {
    ++counts[static_cast<int>(v.status)];
    if (v.status == Status::Violated && !first_violation) first_violation = &v;
  }
  Json ev{{"instances", vs.size()},
          {"HoldsExactly", counts[0]},
          {"HoldsWithinCI", counts[1]},
          {"Violated", counts[2]},
          {"Inconclusive", counts[3]}};
  Verdict out{claim, Status::HoldsExactly, "", ev};
  if (first_violation) {
    out.status = Status::Violated;
    out.evidence["first_violation"] = first_violation->evidence;
  } else if (counts[3] == vs.size()) {
    out.status = Status::Inconclusive;
  } else if (counts[1] > 0) {
    out.status = Status::HoldsWithinCI;
  }
  out.note = std::to_string(counts[0] + counts[1]) + "/" + std::to_string(vs.size()) + " hold, " +
             std::to_string(counts[2]) + " violated, " + std::to_string(counts[3]) + " inconclusive";
  return out;
}

Verdict run_check(Env& e, const std::string& name) {
  const Json& c = e.cfg[name];
  const auto& common = e.common;
  const char* what = name.c_str();
  if (name == "lipschitz" || name == "origin") {
    const auto dist = get_distribution(c, what);
    const int n = static_cast<int>(get_int_in(c, "n", what, 1, 16));
    const auto count = static_cast<std::size_t>(get_int_in(c, "instances", what, 1, 1 << 20));
    SolverOptions exact = common.solver;
    exact.heuristic = false;
    std::vector<Verdict> vs(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto seed = replica_seed(common.seed, i);
      const WeightField f(seed, dist, common.dim);
      if (name == "origin") {
        vs[i] = check_origin_consistency(f, n, exact);
        continue;
      }
      CounterRng rng(site_hash(seed, 0x6c697073ULL));
      double a = 0, b = 0;
      while (!(0 < a && a < b && b < 1)) {
        a = rng.uniform();
        b = rng.uniform();
        if (a > b) std::swap(a, b);
      }
      vs[i] = check_lipschitz(f, n, a, b, exact);
    }
    return aggregate(name, vs);
  }
  if (name == "g_le_ln") {
    const auto dist = get_distribution(c, what);
    const auto scales = get_int_list(c, "scales", what, 1, 4096);
    const auto reps = static_cast<std::size_t>(get_int_in(c, "reps", what, 1, 1 << 20));
    return check_G_le_LN(dist, scales, estimate_options(common, reps, e.inv.jobs));
  }
  if (name == "coverage") {
    const auto dist = get_distribution(c, what);
    CoverageParams p;
    p.n = static_cast<Coord>(get_int_in(c, "n", what, 1, 1024));
    p.ell = static_cast<Coord>(get_int_in(c, "ell", what, 1, 64));
    p.condition = {get_number(c, "c", what), get_number(c, "lambda", what), get_number(c, "rho", what)};
    p.margin = static_cast<int>(get_int_in(c, "margin", what, 0, 1024));
    p.tolerance = get_number(c, "tolerance", what);
    const auto seeds = static_cast<std::size_t>(get_int_in(c, "seeds", what, 1, 1 << 16));
    const auto gm = get_string(c, "greedy_mode", what, {"exact", "heuristic"});
    p.box_solver = with_mode(common.solver, "exact");
    std::vector<Verdict> vs;
    double sum = 0;
    std::size_t measured = 0;
    for (std::size_t i = 0; i < seeds; ++i) {
      const WeightField f(replica_seed(common.seed, i), dist, common.dim);
      vs.push_back(check_box_coverage(f, p, with_mode(common.solver, gm)));
      if (vs.back().evidence.contains("fraction")) {
        sum += vs.back().evidence["fraction"].get<double>();
        ++measured;
      }
    }
    auto v = aggregate(name, vs);
    v.evidence["mean_fraction"] = measured ? sum / static_cast<double>(measured) : 0.0;
    return v;
  }
  if (name == "concavity") {
    const auto dist = get_distribution(c, what);
    const int n = static_cast<int>(get_int_in(c, "n", what, 1, 4096));
    const auto alphas = get_number_list(c, "alphas", what);
    const auto reps = static_cast<std::size_t>(get_int_in(c, "reps", what, 1, 1 << 20));
    const double m = std::max(std::abs(dist.inf_support()), std::abs(dist.sup_support()));
    if (!std::isfinite(m)) throw PreconditionError("concavity slack needs a law with bounded support");
    const auto curve = estimate_Gtilde_curve(dist, n, alphas, estimate_options(common, reps, e.inv.jobs));
    return check_concavity(curve, 2 * m / std::pow(static_cast<double>(n), common.dim));
  }
  const auto trials = static_cast<std::size_t>(get_int_in(c, "trials", what, 1, 1 << 24));
  const auto side = static_cast<Coord>(get_int_in(c, "side", what, 1, 6));
  return check_separation(trials, Box(Site::origin(2), side), common.seed);
}

int cmd_verify(Env& e) {
  std::vector<std::string> names;
  if (e.inv.check == "all") {
    names = kChecks;
  } else {
    names.push_back(e.inv.check);
  }
  std::vector<Verdict> vs;
  for (const auto& n : names) vs.push_back(run_check(e, n));
  Json arr = Json::array();
  for (const auto& v : vs) arr.push_back(to_json(v));
  e.out.write("verdicts.json", dump(arr));
  const auto table = verdict_table(vs);
  e.out.write("verdicts.txt", table);
  e.log << table;
  for (const auto& v : vs)
    if (v.status == Status::Violated) return kViolated;
  return kOk;
}

int cmd_oracle(Env& e) {
  const auto dist = get_distribution(e.cfg, "oracle");
  const Box box = get_box(e.cfg, "box", e.common.dim);
  const auto k = static_cast<std::size_t>(get_int_in(e.cfg, "k", "oracle", 0, 64));
  const auto root = get_root(e.cfg, e.common.dim);
  const auto cap = static_cast<std::uint64_t>(get_int_in(e.cfg, "cap", "oracle", 1, 1LL << 32));
  const WeightField f(e.common.seed, dist, e.common.dim);
  const auto animals = enumerate_animals(f, box, k ? std::optional<std::size_t>(k) : std::nullopt, root, cap);
  std::ostringstream os;
  os << "size,weight,sites\n";
  std::map<std::size_t, std::pair<std::size_t, double>> by_size;
  for (const auto& a : animals) {
    os << a.size() << ',' << format_number(a.weight) << ',';
    bool first = true;
    for (const auto& s : a.sites.sites()) {
      if (!first) os << ';';
      first = false;
      for (int i = 0; i < s.dim; ++i) os << (i ? ":" : "") << s[i];
    }
    os << '\n';
    auto [it, fresh] = by_size.try_emplace(a.size(), 0, a.weight);
    ++it->second.first;
    if (!fresh) it->second.second = std::max(it->second.second, a.weight);
  }
  Json sizes = Json::array();
  for (const auto& [sz, cw] : by_size) sizes.push_back({{"size", sz}, {"count", cw.first}, {"max_weight", cw.second}});
  e.out.write("animals.csv", os.str());
  e.out.write("summary.json", dump(Json{{"animals", animals.size()}, {"sizes", sizes}}));
  e.log << "enumerated " << animals.size() << " animals\n";
  return kOk;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

Json effective_config(const Invocation& inv) {
  std::string command = inv.command;
  Json user = inv.config;
  if (is_manifest(user)) {
    if (user["command"] != command) throw SchemaError("manifest was written by '" + user["command"].get<std::string>() + "'");
    if (command == "verify" && user.contains("check") && user["check"] != inv.check)
      throw SchemaError("manifest was written for check '" + user["check"].get<std::string>() + "'");
    user = user["config"];
  }
  if (command == "verify" && inv.check != "all" &&
      std::find(kChecks.begin(), kChecks.end(), inv.check) == kChecks.end())
    throw SchemaError("unknown check '" + inv.check + "'");
  Json cfg = defaults(command);
  merge_into(cfg, user, "");
  if (inv.seed) cfg["seed"] = *inv.seed;
  if (inv.out) cfg["out"] = *inv.out;
  if (inv.mode) cfg["mode"] = *inv.mode;
  return cfg;
}

std::string config_hash(const Json& effective) {
  // Key order is canonicalized; the output location does not take part.
  nlohmann::json canon = nlohmann::json::parse(effective.dump());
  canon.erase("out");
  const auto text = canon.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

Outcome run(const Invocation& inv, std::ostream& log) {
  Outcome res;
  try {
    const Json cfg = effective_config(inv);
    const Common common = parse_common(cfg);
    Json keyed = cfg;
    keyed["command"] = inv.command;
    if (inv.command == "verify") keyed["check"] = inv.check;
    const auto hash = config_hash(keyed);
    std::string leaf = inv.command + (inv.command == "verify" ? "-" + inv.check : "") + "-" + hash.substr(0, 12);
    const fs::path dir = fs::path(cfg["out"].get<std::string>()) / leaf;
    res.out_dir = dir.string();
    Json manifest{{"command", inv.command}};
    if (inv.command == "verify") manifest["check"] = inv.check;
    manifest["config"] = cfg;
    manifest["config_hash"] = hash;
    manifest["code_version"] = GLA_VERSION;
    Writer out(dir, dump(manifest));
    Env env{cfg, common, inv, out, log};
    static const std::map<std::string, int (*)(Env&)> table{
        {"sample", cmd_sample}, {"solve", cmd_solve},   {"estimate", cmd_estimate}, {"scan", cmd_scan},
        {"critical", cmd_critical}, {"verify", cmd_verify}, {"oracle", cmd_oracle}};
    res.exit_code = table.at(inv.command)(env);
    out.finish();
    res.files = out.files();
    res.message = res.exit_code == kViolated ? "a check was violated" : "ok";
  } catch (const SchemaError& e) {
    res.exit_code = kBadConfig;
    res.message = std::string("invalid config: ") + e.what();
  } catch (const PreconditionError& e) {
    res.exit_code = kBadConfig;
    res.message = std::string("invalid input: ") + e.what();
  } catch (const nlohmann::json::exception& e) {
    res.exit_code = kBadConfig;
    res.message = std::string("invalid config: ") + e.what();
  } catch (const BudgetExceeded& e) {
    res.exit_code = kBudget;
    res.message = std::string("budget exceeded: ") + e.what();
  } catch (const std::exception& e) {
    res.exit_code = kFailure;
    res.message = std::string("error: ") + e.what();
  }
  return res;
}

}  // namespace gla::cli
