#include "gla/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace gla {

Summary summarize(std::span<const double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  s.ci = 1.96 * s.sd / std::sqrt(static_cast<double>(xs.size()));
  return s;
}

void EstimateSeries::add(int n, std::uint64_t seed, double raw) {
  add(n, seed, raw, raw / std::pow(static_cast<double>(n), exponent_));
}

void EstimateSeries::add(int n, std::uint64_t seed, double raw, double normalized) {
  records_.push_back({n, seed, raw, normalized});
}

void EstimateSeries::sort() {
  std::stable_sort(records_.begin(), records_.end(), [](const Record& a, const Record& b) {
    return a.n != b.n ? a.n < b.n : a.seed < b.seed;
  });
}

std::vector<int> EstimateSeries::scales() const {
  std::set<int> s;
  for (const auto& r : records_) s.insert(r.n);
  return {s.begin(), s.end()};
}

Summary EstimateSeries::at(int n) const {
  std::vector<double> xs;
  for (const auto& r : records_)
    if (r.n == n) xs.push_back(r.normalized);
  return summarize(xs);
}

Summary EstimateSeries::pooled() const {
  std::vector<double> xs;
  for (const auto& r : records_) xs.push_back(r.normalized);
  return summarize(xs);
}

double EstimateSeries::trend_slope() const {
  const auto ns = scales();
  if (ns.size() < 2) return 0;
  double mx = 0, my = 0;
  std::vector<double> ys;
  for (int n : ns) {
    ys.push_back(at(n).mean);
    mx += n;
    my += ys.back();
  }
  mx /= static_cast<double>(ns.size());
  my /= static_cast<double>(ns.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    sxy += (ns[i] - mx) * (ys[i] - my);
    sxx += (ns[i] - mx) * (ns[i] - mx);
  }
  return sxy / sxx;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string EstimateSeries::to_csv(bool header) const {
  std::ostringstream os;
  if (header) os << "statistic,n,seed,raw,normalized\n";
  for (const auto& r : records_)
    os << statistic_ << ',' << r.n << ',' << r.seed << ',' << format_number(r.raw) << ','
       << format_number(r.normalized) << '\n';
  return os.str();
}

}  // namespace gla
