#pragma once

// JSON forms of the library's value types.

#include <json.hpp>
#include <stdexcept>

#include "gla/animal.hpp"
#include "gla/series.hpp"

namespace gla {

using Json = nlohmann::ordered_json;

class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws SchemaError on members outside `allowed`.
void expect_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what);
// Typed member access with SchemaError on absence or type mismatch.
double get_number(const Json& j, const char* key, const char* what);
long long get_integer(const Json& j, const char* key, const char* what);

Json to_json(const DistributionSpec& d);
DistributionSpec distribution_from_json(const Json& j);

Json to_json(const Site& s);
Site site_from_json(const Json& j);
Json to_json(const Box& b);  // {anchor, side}
Box box_from_json(const Json& j);
Json to_json(const Region& r);  // array of coordinate arrays
Region region_from_json(const Json& j, int dim);

Json to_json(const SolveResult& r);  // {value, size, sites, optimal, nodes_explored}
Json to_json(const Summary& s);

// Deterministic dump: two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace gla
