#include "gla/io.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gla {

void expect_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw SchemaError(std::string(what) + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      throw SchemaError(std::string(what) + ": unknown key '" + k + "'");
}

double get_number(const Json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw SchemaError(std::string(what) + ": missing '" + key + "'");
  if (!j[key].is_number()) throw SchemaError(std::string(what) + ": '" + key + "' must be a number");
  return j[key].get<double>();
}

long long get_integer(const Json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw SchemaError(std::string(what) + ": missing '" + key + "'");
  if (!j[key].is_number_integer()) throw SchemaError(std::string(what) + ": '" + key + "' must be an integer");
  return j[key].get<long long>();
}

Json to_json(const DistributionSpec& d) {
  Json j;
  j["family"] = to_string(d.family());
  switch (d.family()) {
    case Family::TwoPointPenalty:
    case Family::TwoPointReward:
      j["p"] = d.p();
      j["lambda"] = d.lambda();
      break;
    case Family::Uniform:
      j["a"] = d.a();
      j["b"] = d.b();
      break;
    case Family::Shifted:
      j["base"] = to_json(d.base());
      j["eps"] = d.eps();
      break;
    case Family::HeavyTail:
      j["d"] = d.tail_dim();
      j["alpha"] = d.alpha();
      j["x0"] = d.x0();
      break;
    case Family::TruncatedAbove:
      j["base"] = to_json(d.base());
      j["lambda"] = d.lambda();
      break;
    case Family::Degenerate:
      j["c"] = d.c();
      break;
  }
  return j;
}

DistributionSpec distribution_from_json(const Json& j) {
  const char* what = "distribution";
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw SchemaError("distribution: expected an object with a string 'family'");
  const auto fam = j["family"].get<std::string>();
  try {
    if (fam == "two_point_penalty" || fam == "two_point_reward") {
      expect_keys(j, {"family", "p", "lambda"}, what);
      const double p = get_number(j, "p", what), l = get_number(j, "lambda", what);
      return fam == "two_point_penalty" ? DistributionSpec::two_point_penalty(p, l)
                                        : DistributionSpec::two_point_reward(p, l);
    }
    if (fam == "uniform") {
      expect_keys(j, {"family", "a", "b"}, what);
      return DistributionSpec::uniform(get_number(j, "a", what), get_number(j, "b", what));
    }
    if (fam == "shifted") {
      expect_keys(j, {"family", "base", "eps"}, what);
      if (!j.contains("base")) throw SchemaError("distribution: missing 'base'");
      return DistributionSpec::shifted(distribution_from_json(j["base"]), get_number(j, "eps", what));
    }
    if (fam == "heavy_tail") {
      expect_keys(j, {"family", "d", "alpha", "x0"}, what);
      return DistributionSpec::heavy_tail(static_cast<int>(get_integer(j, "d", what)), get_number(j, "alpha", what),
                                          get_number(j, "x0", what));
    }
    if (fam == "truncated_above") {
      expect_keys(j, {"family", "base", "lambda"}, what);
      if (!j.contains("base")) throw SchemaError("distribution: missing 'base'");
      return DistributionSpec::truncated_above(distribution_from_json(j["base"]), get_number(j, "lambda", what));
    }
    if (fam == "degenerate") {
      expect_keys(j, {"family", "c"}, what);
      return DistributionSpec::degenerate(get_number(j, "c", what));
    }
  } catch (const PreconditionError& e) {
    throw SchemaError(std::string("distribution: ") + e.what());
  }
  throw SchemaError("distribution: unknown family '" + fam + "'");
}

Json to_json(const Site& s) {
  Json j = Json::array();
  for (int i = 0; i < s.dim; ++i) j.push_back(s[i]);
  return j;
}

Site site_from_json(const Json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > static_cast<std::size_t>(kMaxDim))
    throw SchemaError("site: expected an array of 2 to 4 integers");
  Site s = Site::origin(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw SchemaError("site: coordinates must be integers");
    const auto v = j[i].get<long long>();
    if (v < kCoordMin || v > kCoordMax) throw SchemaError("site: coordinate out of range");
    s[static_cast<int>(i)] = static_cast<Coord>(v);
  }
  return s;
}

Json to_json(const Box& b) { return Json{{"anchor", to_json(b.anchor)}, {"side", b.side}}; }

Box box_from_json(const Json& j) {
  expect_keys(j, {"anchor", "side"}, "box");
  if (!j.contains("anchor")) throw SchemaError("box: missing 'anchor'");
  const auto side = get_integer(j, "side", "box");
  if (side < 1 || side > 4096) throw SchemaError("box: side must lie in [1, 4096]");
  return Box(site_from_json(j["anchor"]), static_cast<Coord>(side));
}

Json to_json(const Region& r) {
  Json j = Json::array();
  for (const auto& s : r.sites()) j.push_back(to_json(s));
  return j;
}

Region region_from_json(const Json& j, int dim) {
  if (!j.is_array()) throw SchemaError("region: expected an array of sites");
  std::vector<Site> sites;
  for (const auto& e : j) {
    sites.push_back(site_from_json(e));
    if (sites.back().dim != dim) throw SchemaError("region: dimension mismatch");
  }
  return Region::from_sites(dim, sites);
}

Json to_json(const SolveResult& r) {
  return Json{{"value", r.value},
              {"size", r.size()},
              {"sites", to_json(r.witness.sites)},
              {"optimal", r.optimal},
              {"nodes_explored", r.nodes_explored}};
}

Json to_json(const Summary& s) {
  return Json{{"mean", s.mean}, {"sd", s.sd}, {"ci", s.ci}, {"count", s.count}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace gla
