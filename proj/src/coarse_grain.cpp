#include "gla/coarse_grain.hpp"

#include <algorithm>
#include <cmath>

namespace gla {

double size_threshold(const ConditionAParams& p, Coord m) {
  return m <= 1 ? 0.0 : std::pow(std::log(static_cast<double>(m)), p.rho);
}

std::size_t reach_limit(const ConditionAParams& p, Coord m) {
  return static_cast<std::size_t>(std::floor(p.rho * static_cast<double>(m)));
}

std::optional<std::string> scale_warning(const ConditionAParams& p, Coord ell, int dim) {
  const double need = std::pow(p.lambda * p.rho / p.c, 1.0 / (dim - 1));
  if (static_cast<double>(ell) >= need) return std::nullopt;
  return "scale " + std::to_string(ell) + " is below (lambda rho / c)^(1/(d-1)) = " + std::to_string(need);
}

namespace {

void check_params(const ConditionAParams& p) {
  if (!(p.c > 0) || !(p.lambda >= 0) || !(p.rho > 0)) throw PreconditionError("condition A needs c > 0, lambda >= 0, rho > 0");
}

}  // namespace

ConditionACertificate check_condition_A(const WeightField& f, const Box& b, const ConditionAParams& p,
                                        const SolverOptions& opt, bool with_flags) {
  check_params(p);
  const Coord m = b.side;
  const int d = b.dim();
  const double s = size_threshold(p, m);
  const std::size_t limit = reach_limit(p, m);

  ConditionACertificate cert;
  cert.box = b;
  if (auto w = scale_warning(p, m, d)) cert.warnings.push_back(*w);

  const auto best = solve_box(f, b, opt);
  cert.value = best.value;
  cert.gamma_star = best.witness;
  cert.optimal = best.optimal;
  cert.weight_ok = best.value >= p.c * std::pow(static_cast<double>(m), d) - kWeightTol;
  cert.size_ok = static_cast<double>(best.size()) >= s + 1;

  const Window w = Window::around(b, static_cast<Coord>(limit));
  const auto white = SiteMask::white_sites(f, w, p.lambda);
  const auto dist = distance_field(white, best.witness.sites, limit);
  const Box b2 = dilated_box(b, 2);

  // Any connected subset of B[2] avoiding the reach ball lies inside one
  // component of the far set, so the clause reduces to component sizes.
  std::vector<std::uint64_t> far;
  for (const auto& site : b2.sites())
    if (dist[w.index(site)] == kUnreached) far.push_back(pack(site));
  for (const auto& c : components(Region::from_keys(d, std::move(far)), Adjacency::NearestNeighbor))
    cert.reach.max_far_component = std::max(cert.reach.max_far_component, c.size());
  cert.reach.limit = limit;
  cert.reach.holds = static_cast<double>(cert.reach.max_far_component) < s;

  if (with_flags) {
    const Window w2 = Window::from_box(b2);
    const auto white2 = SiteMask::white_sites(f, w2, p.lambda);
    const auto lab = label_clusters(white2, Adjacency::NearestNeighbor);
    std::vector<std::uint32_t> nearest(lab.sizes.size(), kUnreached);
    for (std::size_t i = 0; i < w2.volume(); ++i)
      if (lab.label[i] >= 0) {
        auto& x = nearest[static_cast<std::size_t>(lab.label[i])];
        x = std::min(x, dist[w.index(w2.site(i))]);
      }
    bool close = true;
    for (std::size_t id = 0; id < lab.sizes.size(); ++id)
      if (static_cast<double>(lab.sizes[id]) >= s && nearest[id] == kUnreached) close = false;
    cert.white_clusters_close = close;

    std::vector<std::uint8_t> black(w.volume());
    for (std::size_t i = 0; i < w.volume(); ++i) black[i] = !white.open_at(i);
    const auto blab = label_clusters(SiteMask(w, std::move(black)), Adjacency::LGraph);
    const double black_cap = std::pow(s, 1.0 - 1.0 / d);
    bool small = true;
    for (const auto& site : b2.sites()) {
      const auto id = blab.label[w.index(site)];
      if (id >= 0 && static_cast<double>(blab.sizes[static_cast<std::size_t>(id)]) >= black_cap) small = false;
    }
    cert.black_clusters_small = small;
  }
  return cert;
}

ActiveSites active_sites(const WeightField& f, Coord ell, const Box& coarse, const ConditionAParams& p,
                         const SolverOptions& opt) {
  if (ell < 1) throw PreconditionError("coarse scale must be >= 1");
  ActiveSites out;
  out.ell = ell;
  const Window cw = Window::from_box(coarse);
  std::vector<std::uint8_t> on(cw.volume());
  for (std::size_t i = 0; i < cw.volume(); ++i) {
    Site a = cw.site(i);
    for (int k = 0; k < a.dim; ++k) a[k] *= ell;
    out.certificates.push_back(check_condition_A(f, Box(a, ell), p, opt, false));
    on[i] = out.certificates.back().certified();
  }
  out.mask = SiteMask(cw, std::move(on));
  return out;
}

NearPercolationReport near_percolation_stats(const std::vector<SiteMask>& samples, double range, int max_lag) {
  NearPercolationReport rep;
  std::size_t ones = 0;
  for (const auto& s : samples) {
    rep.sites += s.window().volume();
    ones += s.open_count();
  }
  if (rep.sites < 10000) throw PreconditionError("near-percolation statistics need at least 1e4 coarse sites");
  if (max_lag < 1) throw PreconditionError("max_lag must be >= 1");
  rep.p_hat = static_cast<double>(ones) / static_cast<double>(rep.sites);
  const double var = rep.p_hat * (1 - rep.p_hat);
  const int d = samples.front().window().dim();

  // Half of the lag cube: lexicographically positive offsets.
  std::vector<Site> lags;
  const Box cube(Site::origin(d), 2 * max_lag + 1);
  for (auto h : cube.sites()) {
    for (int i = 0; i < d; ++i) h[i] -= max_lag;
    if (h > Site::origin(d)) lags.push_back(h);
  }
  for (const auto& h : lags) {
    LagCorrelation lc;
    lc.lag = h;
    // Centred on the means of the two endpoint sets actually paired, so the
    // sites lost at the window edge do not bias the estimate.
    double both = 0, tail = 0, head = 0;
    for (const auto& s : samples) {
      const auto& w = s.window();
      for (std::size_t i = 0; i < w.volume(); ++i) {
        const Site t = w.site(i) + h;
        if (!w.contains(t)) continue;
        ++lc.pairs;
        const bool a = s.open_at(i), b = s.open_at(w.index(t));
        tail += a;
        head += b;
        both += a && b;
      }
    }
    if (lc.pairs > 0 && var > 0) {
      const double np = static_cast<double>(lc.pairs);
      lc.corr = (both / np - (tail / np) * (head / np)) / var;
    }
    lc.long_range = linf_distance(h, Site::origin(d)) > 2 * range + 1;
    lc.within_bound = lc.pairs > 0 && std::abs(lc.corr) < 4.0 / std::sqrt(static_cast<double>(lc.pairs));
    if (lc.long_range && !lc.within_bound) rep.long_range_ok = false;
    rep.lags.push_back(lc);
  }
  return rep;
}

namespace {

std::vector<Site> white_path(const WeightField& f, const Region& a, const Region& b, double lambda,
                             std::size_t max_len) {
  const Window w = Window::around(a.unite(b), static_cast<Coord>(max_len));
  const auto white = SiteMask::white_sites(f, w, lambda);
  auto path = chemical_path(white, a, b, max_len);
  if (!path) throw ConstructionError("no white path of at most " + std::to_string(max_len) + " sites joins " +
                                     a.at(0).str() + " and " + b.at(0).str());
  return *path;
}

}  // namespace

Backbone build_backbone(const WeightField& f, const ActiveSites& active, const Region& component,
                        const ConditionAParams& p) {
  if (component.empty()) throw PreconditionError("empty coarse component");
  const auto& cw = active.mask.window();
  const std::size_t limit = reach_limit(p, active.ell);
  Backbone out;
  Region all(component.dim());
  for (const auto& a : component.sites()) {
    if (!active.mask.open(a)) throw PreconditionError("coarse site " + a.str() + " is not active");
    const auto& g = active.certificates[cw.index(a)].gamma_star;
    all = all.unite(g.sites);
    out.gamma_sum += g.weight;
  }
  for (const auto& a : component.sites()) {
    for (const auto& b : neighbors(a, Adjacency::NearestNeighbor)) {
      if (!(a < b) || !component.contains(b)) continue;
      const auto& ga = active.certificates[cw.index(a)].gamma_star.sites;
      const auto& gb = active.certificates[cw.index(b)].gamma_star.sites;
      const auto path = white_path(f, ga, gb, p.lambda, limit);
      ++out.connectors;
      out.connector_sites += path.size();
      all = all.unite(Region::from_sites(component.dim(), path));
    }
  }
  out.psi = make_animal(f, std::move(all));
  out.lower_bound = out.gamma_sum - p.lambda * static_cast<double>(limit) * static_cast<double>(out.connectors);
  out.bound_holds = out.psi.weight >= out.lower_bound - kWeightTol;
  return out;
}

Chain concatenate_chain(const WeightField& f, const std::vector<Animal>& animals, double lambda,
                        std::size_t max_gap) {
  if (animals.empty()) throw PreconditionError("empty chain");
  Chain out;
  Region all = animals.front().sites;
  std::size_t sizes = 0, gaps = 0;
  for (std::size_t j = 0; j < animals.size(); ++j) {
    out.gamma_sum += animals[j].weight;
    sizes += animals[j].size();
    if (j == 0) continue;
    const auto path = white_path(f, animals[j - 1].sites, animals[j].sites, lambda, max_gap);
    out.connector_sizes.push_back(path.size());
    gaps += path.size();
    all = all.unite(Region::from_sites(all.dim(), path)).unite(animals[j].sites);
  }
  out.kappa = make_animal(f, std::move(all));
  out.lower_bound = out.gamma_sum - lambda * static_cast<double>(gaps);
  out.size_bound = sizes + gaps;
  out.bounds_hold = out.kappa.weight >= out.lower_bound - kWeightTol && out.kappa.size() <= out.size_bound;
  return out;
}

EventD check_event_D(const WeightField& f, const Box& b, double lambda, double rho, double C,
                     const SolverOptions& opt) {
  const std::size_t limit = static_cast<std::size_t>(std::floor(rho * b.side));
  const double need = C * b.side - kWeightTol;
  EventD out;
  const Window w = Window::around(b, static_cast<Coord>(limit));
  const auto white = SiteMask::white_sites(f, w, lambda);

  std::vector<std::uint8_t> cand(w.volume(), 0);
  for (const auto& s : b.sites()) cand[w.index(s)] = white.open(s);
  for (unsigned mask = 0; mask < (1u << b.dim()); ++mask) {
    const Site u = b.corner(mask);
    const auto dist = distance_field(white, Region::from_sites(b.dim(), std::vector<Site>{u}), limit);
    for (std::size_t i = 0; i < w.volume(); ++i)
      if (dist[i] == kUnreached) cand[i] = 0;
  }
  std::vector<Site> vs;
  for (const auto& s : b.sites())
    if (cand[w.index(s)]) vs.push_back(s);
  out.candidates = vs.size();
  if (vs.empty()) return out;

  const auto best = solve_box(f, b, opt);
  if (best.value < need) return out;
  for (const auto& v : vs)
    if (best.witness.sites.contains(v)) {
      out.holds = true;
      out.v = v;
      out.witness = best.witness;
      return out;
    }
  CellGraph g = CellGraph::from_box(f, b);
  for (const auto& v : vs) {
    g.set_root(static_cast<std::uint32_t>(g.window().index(v)));
    const auto r = opt.heuristic ? solve_heuristic(g, Problem{}, opt) : solve_exact(g, Problem{}, opt);
    if (r.value >= need) {
      out.holds = true;
      out.v = v;
      out.witness = r.witness;
      return out;
    }
  }
  return out;
}

}  // namespace gla
