#pragma once

// Per-replica statistic records and their summaries.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gla {

struct Summary {
  double mean = 0;
  double sd = 0;
  double ci = 0;  // 1.96 sd / sqrt(count)
  std::size_t count = 0;
};

Summary summarize(std::span<const double> xs);

struct Record {
  int n = 0;
  std::uint64_t seed = 0;
  double raw = 0;
  double normalized = 0;
};

class EstimateSeries {
 public:
  EstimateSeries() = default;
  // normalized = raw / n^exponent unless add() is given an explicit value.
  EstimateSeries(std::string statistic, double exponent) : statistic_(std::move(statistic)), exponent_(exponent) {}

  void add(int n, std::uint64_t seed, double raw);
  void add(int n, std::uint64_t seed, double raw, double normalized);
  // Stable order by (n, seed).
  void sort();

  const std::string& statistic() const { return statistic_; }
  double exponent() const { return exponent_; }
  const std::vector<Record>& records() const { return records_; }
  bool lower_bound() const { return lower_bound_; }
  void set_lower_bound(bool v) { lower_bound_ = v; }

  std::vector<int> scales() const;
  Summary at(int n) const;
  Summary pooled() const;
  // Least-squares slope of per-scale means against n.
  double trend_slope() const;

  // statistic,n,seed,raw,normalized
  std::string to_csv(bool header = true) const;

 private:
  std::string statistic_;
  double exponent_ = 0;
  bool lower_bound_ = false;
  std::vector<Record> records_;
};

// Fixed-precision decimal rendering used in every CSV/JSON artifact.
std::string format_number(double x);

}  // namespace gla
