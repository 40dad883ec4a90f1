#include "gla/weight_field.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gla/hash.hpp"
#include "gla/simd.hpp"

namespace gla {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::TwoPointPenalty: return "two_point_penalty";
    case Family::TwoPointReward: return "two_point_reward";
    case Family::Uniform: return "uniform";
    case Family::Shifted: return "shifted";
    case Family::HeavyTail: return "heavy_tail";
    case Family::TruncatedAbove: return "truncated_above";
    case Family::Degenerate: return "degenerate";
  }
  return "unknown";
}

const char* to_string(Condition c) {
  switch (c) {
    case Condition::Satisfied: return "satisfied";
    case Condition::Violated: return "violated";
    case Condition::Unknown: return "unknown";
  }
  return "unknown";
}

DistributionSpec DistributionSpec::two_point_penalty(double p, double lambda) {
  require(p >= 0 && p <= 1, "two_point_penalty: p must lie in [0, 1]");
  require(lambda >= 0 && std::isfinite(lambda), "two_point_penalty: lambda must be finite and >= 0");
  DistributionSpec s;
  s.family_ = Family::TwoPointPenalty;
  s.p_ = p;
  s.lambda_ = lambda;
  return s;
}

DistributionSpec DistributionSpec::two_point_reward(double p, double lambda) {
  require(p >= 0 && p <= 1, "two_point_reward: p must lie in [0, 1]");
  require(lambda >= 0 && std::isfinite(lambda), "two_point_reward: lambda must be finite and >= 0");
  DistributionSpec s;
  s.family_ = Family::TwoPointReward;
  s.p_ = p;
  s.lambda_ = lambda;
  return s;
}

DistributionSpec DistributionSpec::uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, "uniform: need finite a < b");
  DistributionSpec s;
  s.family_ = Family::Uniform;
  s.a_ = a;
  s.b_ = b;
  return s;
}

DistributionSpec DistributionSpec::shifted(const DistributionSpec& base, double eps) {
  require(std::isfinite(eps), "shifted: eps must be finite");
  require(base.family_ != Family::Shifted, "shifted: only one level of shift is allowed");
  DistributionSpec s;
  s.family_ = Family::Shifted;
  s.eps_ = eps;
  s.base_ = std::make_shared<const DistributionSpec>(base);
  return s;
}

DistributionSpec DistributionSpec::heavy_tail(int d, double alpha, double x0) {
  require(d >= 1, "heavy_tail: d must be >= 1");
  require(std::isfinite(alpha) && std::isfinite(x0) && x0 > 1, "heavy_tail: need finite alpha and x0 > 1");
  DistributionSpec s;
  s.family_ = Family::HeavyTail;
  s.d_ = d;
  s.alpha_ = alpha;
  s.x0_ = x0;
  require(s.heavy_tail_tail(x0) <= 1, "heavy_tail: tail at x0 exceeds 1");
  // The tail must decrease on [x0, inf).
  require(std::log(x0) > -(1 + alpha), "heavy_tail: tail is not decreasing above x0");
  return s;
}

DistributionSpec DistributionSpec::truncated_above(const DistributionSpec& base, double lambda) {
  require(std::isfinite(lambda), "truncated_above: lambda must be finite");
  DistributionSpec s;
  s.family_ = Family::TruncatedAbove;
  s.lambda_ = lambda;
  s.base_ = std::make_shared<const DistributionSpec>(base);
  return s;
}

DistributionSpec DistributionSpec::degenerate(double c) {
  require(std::isfinite(c), "degenerate: c must be finite");
  DistributionSpec s;
  s.family_ = Family::Degenerate;
  s.c_ = c;
  return s;
}

double DistributionSpec::heavy_tail_tail(double x) const {
  const double lx = std::log(x);
  return std::exp(-d_ * lx - d_ * (1 + alpha_) * std::log(lx));
}

double DistributionSpec::transform(double u) const {
  switch (family_) {
    case Family::TwoPointPenalty: return u < p_ ? 1.0 : -lambda_;
    case Family::TwoPointReward: return u < p_ ? -1.0 : lambda_;
    case Family::Uniform: return a_ + (b_ - a_) * u;
    case Family::Shifted: return base_->transform(u) + eps_;
    case Family::Degenerate: return c_;
    case Family::TruncatedAbove: {
      const double x = base_->transform(u);
      return x > lambda_ ? x : 0.0;
    }
    case Family::HeavyTail: {
      const double atom = 1 - heavy_tail_tail(x0_);
      if (u < atom) return x0_ - 1;
      // Solve d y + beta log y = L for y = log x.
      const double target = -std::log1p(-u);
      const double beta = d_ * (1 + alpha_);
      auto g = [&](double y) { return d_ * y + beta * std::log(y) - target; };
      double lo = std::log(x0_);
      if (g(lo) >= 0) return x0_;
      double hi = std::max(2 * lo, target / d_ + 1);
      while (g(hi) <= 0) hi *= 2;
      double y = 0.5 * (lo + hi);
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double gy = g(y);
        if (gy > 0) hi = y; else lo = y;
        const double step = y - gy / (d_ + beta / y);
        y = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
      }
      return std::exp(y);
    }
  }
  return 0;
}

double DistributionSpec::cdf(double t) const {
  switch (family_) {
    case Family::TwoPointPenalty: return (t >= -lambda_ ? 1 - p_ : 0.0) + (t >= 1 ? p_ : 0.0);
    case Family::TwoPointReward: return (t >= -1 ? p_ : 0.0) + (t >= lambda_ ? 1 - p_ : 0.0);
    case Family::Uniform:
      if (t <= a_) return 0;
      if (t >= b_) return 1;
      return (t - a_) / (b_ - a_);
    case Family::Shifted: return base_->cdf(t - eps_);
    case Family::Degenerate: return t >= c_ ? 1.0 : 0.0;
    case Family::TruncatedAbove: {
      const double fl = base_->cdf(lambda_);
      return (t >= 0 ? fl : 0.0) + (t > lambda_ ? std::max(0.0, base_->cdf(t) - fl) : 0.0);
    }
    case Family::HeavyTail:
      if (t < x0_ - 1) return 0;
      if (t < x0_) return 1 - heavy_tail_tail(x0_);
      return 1 - heavy_tail_tail(t);
  }
  return 0;
}

double DistributionSpec::survival(double t) const {
  if (family_ == Family::HeavyTail && t >= x0_) return heavy_tail_tail(t);
  if (family_ == Family::Shifted) return base_->survival(t - eps_);
  return 1 - cdf(t);
}

double DistributionSpec::inf_support() const {
  switch (family_) {
    case Family::TwoPointPenalty: return p_ < 1 ? -lambda_ : 1.0;
    case Family::TwoPointReward: return p_ > 0 ? -1.0 : lambda_;
    case Family::Uniform: return a_;
    case Family::Shifted: return base_->inf_support() + eps_;
    case Family::Degenerate: return c_;
    case Family::HeavyTail: return heavy_tail_tail(x0_) < 1 ? x0_ - 1 : x0_;
    case Family::TruncatedAbove: {
      const double fl = base_->cdf(lambda_);
      const double upper = std::max(lambda_, base_->inf_support());
      if (fl >= 1) return 0;
      if (fl <= 0) return base_->inf_support();
      return std::min(0.0, upper);
    }
  }
  return -kInf;
}

double DistributionSpec::sup_support() const {
  switch (family_) {
    case Family::TwoPointPenalty: return p_ > 0 ? 1.0 : -lambda_;
    case Family::TwoPointReward: return p_ < 1 ? lambda_ : -1.0;
    case Family::Uniform: return b_;
    case Family::Shifted: return base_->sup_support() + eps_;
    case Family::Degenerate: return c_;
    case Family::HeavyTail: return kInf;
    case Family::TruncatedAbove: {
      const double fl = base_->cdf(lambda_);
      if (fl >= 1) return 0;
      return fl > 0 ? std::max(0.0, base_->sup_support()) : base_->sup_support();
    }
  }
  return kInf;
}

bool DistributionSpec::bounded_below() const { return std::isfinite(inf_support()); }

bool DistributionSpec::atomic() const {
  switch (family_) {
    case Family::TwoPointPenalty:
    case Family::TwoPointReward:
    case Family::Degenerate: return true;
    case Family::Shifted:
    case Family::TruncatedAbove: return base_->atomic();
    default: return false;
  }
}

std::string DistributionSpec::describe() const {
  std::ostringstream os;
  os << to_string(family_) << '(';
  switch (family_) {
    case Family::TwoPointPenalty:
    case Family::TwoPointReward: os << "p=" << p_ << ", lambda=" << lambda_; break;
    case Family::Uniform: os << "a=" << a_ << ", b=" << b_; break;
    case Family::Shifted: os << base_->describe() << ", eps=" << eps_; break;
    case Family::HeavyTail: os << "d=" << d_ << ", alpha=" << alpha_ << ", x0=" << x0_; break;
    case Family::TruncatedAbove: os << base_->describe() << ", lambda=" << lambda_; break;
    case Family::Degenerate: os << "c=" << c_; break;
  }
  os << ')';
  return os.str();
}

bool operator==(const DistributionSpec& x, const DistributionSpec& y) {
  if (x.family_ != y.family_) return false;
  if (x.p_ != y.p_ || x.lambda_ != y.lambda_ || x.a_ != y.a_ || x.b_ != y.b_ || x.eps_ != y.eps_ ||
      x.alpha_ != y.alpha_ || x.x0_ != y.x0_ || x.c_ != y.c_ || x.d_ != y.d_)
    return false;
  if (!x.base_ || !y.base_) return !x.base_ && !y.base_;
  return *x.base_ == *y.base_;
}

Condition tail_integrability(const DistributionSpec& dist, int dim) {
  if (dim < 1) throw PreconditionError("tail_integrability: dim must be positive");
  switch (dist.family()) {
    case Family::Shifted:
    case Family::TruncatedAbove: return tail_integrability(dist.base(), dim);
    case Family::HeavyTail: {
      // Integrand x^{-d/dim} (log x)^{-d(1+alpha)/dim}.
      const double power = static_cast<double>(dist.tail_dim()) / dim;
      const double log_power = dist.tail_dim() * (1 + dist.alpha()) / dim;
      if (power > 1) return Condition::Satisfied;
      if (power < 1) return Condition::Violated;
      return log_power > 1 ? Condition::Satisfied : Condition::Violated;
    }
    default: return std::isfinite(dist.sup_support()) ? Condition::Satisfied : Condition::Unknown;
  }
}

double max_exceedance_prob(const DistributionSpec& dist, double n, double t, int dim) {
  if (n < 1) throw PreconditionError("max_exceedance_prob: n must be >= 1");
  const double tail = dist.survival(t);
  if (tail >= 1) return 1;
  if (tail <= 0) return 0;
  return -std::expm1(std::pow(n, dim) * std::log1p(-tail));
}

DistributionSpec rho_percolation_penalty(double rho, double p) {
  if (!(rho > 0)) throw PreconditionError("rho_percolation_penalty: rho must be positive");
  return DistributionSpec::two_point_penalty(p, rho / (1 + rho));
}

WeightField::WeightField(std::uint64_t seed, DistributionSpec dist, int dim)
    : seed_(seed), dist_(std::move(dist)), dim_(dim) {
  if (dim < 2 || dim > kMaxDim) throw PreconditionError("WeightField: dimension must lie in [2, 4]");
}

double WeightField::uniform(const Site& s) const { return to_unit(site_hash(seed_, pack(s))); }

double WeightField::score(const Site& s) const {
  if (overrides_) {
    auto it = overrides_->find(pack(s));
    if (it != overrides_->end()) return it->second;
  }
  return dist_.transform(uniform(s));
}

std::vector<double> WeightField::uniforms(const Window& w) const {
  std::vector<std::uint64_t> keys(w.volume());
  for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = pack(w.site(i));
  std::vector<double> out(w.volume());
  simd::active().hash_uniform_batch(seed_, keys.data(), out.data(), keys.size());
  return out;
}

std::vector<double> WeightField::scores(const Window& w) const {
  std::vector<double> out = uniforms(w);
  for (double& v : out) v = dist_.transform(v);
  if (overrides_) {
    for (const auto& [key, value] : *overrides_) {
      const Site s = unpack(key, dim_);
      if (w.contains(s)) out[w.index(s)] = value;
    }
  }
  return out;
}

WeightField WeightField::with_override(const Site& s, double value) const {
  WeightField copy = *this;
  auto map = overrides_ ? std::make_shared<std::map<std::uint64_t, double>>(*overrides_)
                        : std::make_shared<std::map<std::uint64_t, double>>();
  (*map)[pack(s)] = value;
  copy.overrides_ = std::move(map);
  return copy;
}

double animal_weight(const WeightField& f, const Region& a) {
  double total = 0;
  for (auto k : a.keys()) total += f.score(unpack(k, a.dim()));
  return total;
}

}  // namespace gla
