#pragma once

#include <string>
#include <utility>
#include <vector>

#include "meridian/errors.hpp"

namespace meridian {

// Radial bracket r1 > r2 >= 0 for the working range.
struct Boundary {
  double r1 = 2.0;  // outer radius
  double r2 = 0.0;  // inner radius

  Boundary() = default;
  Boundary(double outer, double inner);
  double width() const { return r1 - r2; }
};

// Shape-preserving cubic Hermite interpolant with Fritsch-Carlson derivative
// limiting. Monotone data produces a monotone interpolant.
class PchipCurve {
 public:
  PchipCurve() = default;
  PchipCurve(std::vector<double> x, std::vector<double> y);

  double eval(double x) const;
  double deriv(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::vector<double> x_, y_, d_;
  std::size_t locate(double x) const;
};

enum class WeightKind { annulus, helicoid, custom };
enum class MetricKind { euclidean, screw, custom };

// The weight V: positive with V' > 0 on the working range.
// Built-ins: annulus V(x) = x, helicoid V(x) = sqrt(1 + x^2).
class WeightProfile {
 public:
  static WeightProfile annulus();
  static WeightProfile helicoid();
  static WeightProfile custom(std::vector<double> x, std::vector<double> v);

  double operator()(double x) const;
  double deriv(double x) const;
  WeightKind kind() const { return kind_; }
  double domain_floor() const { return domain_floor_; }
  double inversion_tolerance() const;

 private:
  WeightKind kind_ = WeightKind::annulus;
  double domain_floor_ = 0.0;
  PchipCurve table_;
};

// Fiber coefficient g_yy of the metric dx^2 + g_yy(x) dy^2.
// Built-ins: euclidean g_yy = 1, screw g_yy(x) = x^2 / (1 + x^2).
class MetricProfile {
 public:
  static MetricProfile euclidean();
  static MetricProfile screw();
  static MetricProfile custom(std::vector<double> x, std::vector<double> g);

  double gyy(double x) const;
  MetricKind kind() const { return kind_; }

 private:
  MetricKind kind_ = MetricKind::euclidean;
  PchipCurve table_;
};

struct ProfileSpec {
  std::string kind;  // "annulus" | "helicoid" | "custom"
  double r1 = 2.0;
  double r2 = 0.0;
  std::vector<std::pair<double, double>> V_table;    // custom kind only
  std::vector<std::pair<double, double>> gyy_table;  // custom kind only
};

struct ProfileTriple {
  WeightProfile V;
  MetricProfile metric;
  Boundary bd;
};

// Validates the spec and assembles the (V, g_yy, boundary) triple.
// Custom tables must be strictly increasing in x; V strictly increasing;
// g_yy positive. Rejects r1 <= r2 and V(r2) = 0.
ProfileTriple make_profile(const ProfileSpec& spec);

// x in [r2, r1] with V(x) = mu, by bisection (50 iterations).
// Requires V(r2) <= mu <= V(r1).
double invert_V(const WeightProfile& V, double mu, const Boundary& bracket);

inline constexpr double kTolInvBuiltin = 1e-12;
inline constexpr double kTolInvCustom = 1e-8;

}  // namespace meridian
