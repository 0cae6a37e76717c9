#include "meridian/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace meridian {

Boundary::Boundary(double outer, double inner) : r1(outer), r2(inner) {
  if (!(r1 > r2) || !(r2 >= 0.0) || !std::isfinite(r1) || !std::isfinite(r2))
    throw ValidationError("Boundary: need r1 > r2 >= 0, got r1=" +
                          std::to_string(outer) + " r2=" + std::to_string(inner));
}

namespace {

double sign_of(double x) { return (x > 0) - (x < 0); }

}  // namespace

PchipCurve::PchipCurve(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw ValidationError("PchipCurve: need >= 2 matching (x, y) pairs");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(x_[i] < x_[i + 1]))
      throw ValidationError("PchipCurve: x values must be strictly increasing");

  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }

  d_.assign(n, 0.0);
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
  } else {
    // Interior: weighted harmonic mean when slopes agree in sign, else zero.
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        d_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    // One-sided endpoint formula with the usual limiting.
    auto endpoint = [](double h0, double h1, double d0, double d1) {
      double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (sign_of(d) != sign_of(d0))
        d = 0.0;
      else if (sign_of(d0) != sign_of(d1) && std::abs(d) > 3.0 * std::abs(d0))
        d = 3.0 * d0;
      return d;
    };
    d_[0] = endpoint(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
}

std::size_t PchipCurve::locate(double x) const {
  if (x <= x_.front()) return 0;
  if (x >= x_.back()) return x_.size() - 2;
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double PchipCurve::eval(double x) const {
  const std::size_t i = locate(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double PchipCurve::deriv(double x) const {
  const std::size_t i = locate(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double dh00 = 6 * s * (s - 1) / h;
  const double dh10 = (3 * s - 1) * (s - 1);
  const double dh01 = -6 * s * (s - 1) / h;
  const double dh11 = s * (3 * s - 2);
  return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
}

WeightProfile WeightProfile::annulus() {
  WeightProfile p;
  p.kind_ = WeightKind::annulus;
  p.domain_floor_ = 0.0;
  return p;
}

WeightProfile WeightProfile::helicoid() {
  WeightProfile p;
  p.kind_ = WeightKind::helicoid;
  p.domain_floor_ = 0.0;  // V(0) = 1 > 0, so evaluation down to the axis is fine
  return p;
}

WeightProfile WeightProfile::custom(std::vector<double> x, std::vector<double> v) {
  const std::size_t n = v.size();
  if (x.size() != n || n < 2)
    throw ValidationError("WeightProfile::custom: need >= 2 matching (x, V) pairs");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(v[i] < v[i + 1]))
      throw ValidationError("WeightProfile::custom: V table must be strictly increasing");
  WeightProfile p;
  p.kind_ = WeightKind::custom;
  p.domain_floor_ = x.front();
  p.table_ = PchipCurve(std::move(x), std::move(v));
  return p;
}

double WeightProfile::operator()(double x) const {
  switch (kind_) {
    case WeightKind::annulus:
      return x;
    case WeightKind::helicoid:
      return std::sqrt(1.0 + x * x);
    case WeightKind::custom:
      if (x < table_.x_min() - 1e-12 || x > table_.x_max() + 1e-12)
        throw DomainError("custom weight evaluated outside its table range");
      return table_.eval(x);
  }
  return 0.0;
}

double WeightProfile::deriv(double x) const {
  switch (kind_) {
    case WeightKind::annulus:
      return 1.0;
    case WeightKind::helicoid:
      return x / std::sqrt(1.0 + x * x);
    case WeightKind::custom:
      return table_.deriv(x);
  }
  return 0.0;
}

double WeightProfile::inversion_tolerance() const {
  return kind_ == WeightKind::custom ? kTolInvCustom : kTolInvBuiltin;
}

MetricProfile MetricProfile::euclidean() {
  MetricProfile m;
  m.kind_ = MetricKind::euclidean;
  return m;
}

MetricProfile MetricProfile::screw() {
  MetricProfile m;
  m.kind_ = MetricKind::screw;
  return m;
}

MetricProfile MetricProfile::custom(std::vector<double> x, std::vector<double> g) {
  if (x.size() != g.size() || g.size() < 2)
    throw ValidationError("MetricProfile::custom: need >= 2 matching (x, g_yy) pairs");
  for (double gi : g)
    if (!(gi > 0.0))
      throw ValidationError("MetricProfile::custom: g_yy table must be positive");
  MetricProfile m;
  m.kind_ = MetricKind::custom;
  m.table_ = PchipCurve(std::move(x), std::move(g));
  return m;
}

double MetricProfile::gyy(double x) const {
  switch (kind_) {
    case MetricKind::euclidean:
      return 1.0;
    case MetricKind::screw:
      return x * x / (1.0 + x * x);
    case MetricKind::custom: {
      const double g = table_.eval(x);
      if (!(g > 0.0))
        throw DomainError("custom g_yy non-positive at x=" + std::to_string(x));
      return g;
    }
  }
  return 1.0;
}

ProfileTriple make_profile(const ProfileSpec& spec) {
  Boundary bd(spec.r1, spec.r2);
  ProfileTriple out;
  out.bd = bd;

  if (spec.kind == "annulus") {
    out.V = WeightProfile::annulus();
    out.metric = MetricProfile::euclidean();
  } else if (spec.kind == "helicoid") {
    out.V = WeightProfile::helicoid();
    out.metric = MetricProfile::screw();
  } else if (spec.kind == "custom") {
    if (spec.V_table.size() < 2)
      throw ValidationError("make_profile: custom kind requires a V_table");
    std::vector<double> xs, vs;
    for (auto& [x, v] : spec.V_table) {
      xs.push_back(x);
      vs.push_back(v);
    }
    out.V = WeightProfile::custom(std::move(xs), std::move(vs));
    if (spec.gyy_table.empty()) {
      out.metric = MetricProfile::euclidean();
    } else {
      std::vector<double> xg, gg;
      for (auto& [x, g] : spec.gyy_table) {
        xg.push_back(x);
        gg.push_back(g);
      }
      out.metric = MetricProfile::custom(std::move(xg), std::move(gg));
    }
    if (spec.V_table.front().first > bd.r2 + 1e-12 ||
        spec.V_table.back().first < bd.r1 - 1e-12)
      throw ValidationError("make_profile: V_table must cover [r2, r1]");
  } else {
    throw ValidationError("make_profile: unknown kind '" + spec.kind + "'");
  }

  if (!(out.V(bd.r2) > 0.0))
    throw ValidationError("make_profile: V(r2) must be positive (take r2 > 0 when V(0) = 0)");

  // Strict monotonicity of V over (r2, r1], checked on dense samples.
  const int probes = 256;
  double prev = out.V(bd.r2);
  for (int i = 1; i <= probes; ++i) {
    const double x = bd.r2 + bd.width() * i / probes;
    const double vx = out.V(x);
    if (!(vx > prev))
      throw ValidationError("make_profile: V is not strictly increasing near x=" +
                            std::to_string(x));
    prev = vx;
  }
  return out;
}

double invert_V(const WeightProfile& V, double mu, const Boundary& bracket) {
  const double vlo = V(bracket.r2);
  const double vhi = V(bracket.r1);
  const double slack = 1e-12 * std::max(1.0, std::abs(vhi));
  if (mu < vlo - slack || mu > vhi + slack)
    throw DomainError("invert_V: mu=" + std::to_string(mu) + " outside [V(r2), V(r1)] = [" +
                      std::to_string(vlo) + ", " + std::to_string(vhi) + "]");
  if (mu <= vlo) return bracket.r2;
  if (mu >= vhi) return bracket.r1;

  double lo = bracket.r2, hi = bracket.r1;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (V(mid) < mu)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace meridian
