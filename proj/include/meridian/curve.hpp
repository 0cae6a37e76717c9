#pragma once

#include <cstddef>
#include <vector>

#include "meridian/profiles.hpp"

namespace meridian {

inline constexpr double kTolSpeed = 1e-8;
inline constexpr double kTolJunction = 1e-8;        // relative to r1
inline constexpr double kCollapseThreshold = 1e-12; // segment speed below this collapses

// Piecewise-linear curve (F, G): [0, L] -> closed half-plane, sampled on a
// strictly increasing parameter grid. F is the horizontal component; G is the
// transverse component (an unwrapped angle under the screw metric). Runs from
// (r1, 0) down to F = r2 with r2 < F < r1 in the interior.
struct Curve {
  std::vector<double> t, F, G;
  Boundary bd;

  std::size_t segments() const { return t.size() - 1; }
  double length() const { return t.back(); }
  double F_at(double s) const;
  double G_at(double s) const;
  void validate() const;
};

// Per-segment speed sqrt(dF^2 + g_yy(Fmid) dG^2) / dt.
struct SpeedTrace {
  std::vector<double> sigma;
  double max_deviation_from_unit() const;
};

// The straight segment t -> (r1 - t, 0) on [0, r1 - r2].
Curve omega_curve(const Boundary& bd, int n_segments);

SpeedTrace speed(const Curve& c, const MetricProfile& metric);

// Returns a copy of c with a node at parameter P (inserted by linear
// interpolation unless P already lies on the grid).
Curve ensure_node(const Curve& c, double P);

// Zeroes the transverse increments on [0, P): F is preserved, G is rebuilt by
// cumulative integration with G(0) = 0 and its original increments past P.
Curve zero_transverse_before(const Curve& c, double P);

// Replaces F by its running minimum on [0, P]; G and the tail are unchanged.
Curve running_min_flatten(const Curve& c, double P);

// Reparametrizes by cumulative arc length with respect to the metric.
// Segments with speed below kCollapseThreshold are collapsed to points; the
// image is unchanged as a point set and the result has unit speed.
Curve arclength_reparametrize(const Curve& c, const MetricProfile& metric);

// Smallest parameter where V(F(t)) = mu, located exactly on the
// piecewise-linear F as the first crossing of the level V^{-1}(mu).
// Returns L when mu < V(r2). Requires mu < V(F(0)).
double first_crossing(const Curve& c, const WeightProfile& V, double mu);

// Replaces the initial piece of g (up to its first V-crossing of mu) by the
// matching straight prefix t -> (r1 - t, 0) of length V_omega^{-1}(mu).
Curve splice_with_omega(const Curve& g, const WeightProfile& V, double mu,
                        const Boundary& bd);

struct GammaReport {
  bool domain_ok = false;      // finite length D >= r1 - r2
  bool unit_speed_ok = false;  // |sigma - 1| <= kTolSpeed on every segment
  bool range_ok = false;       // F(D) = r2 and r2 < F < r1 in the interior
  bool prefix_ok = false;      // equals the straight prefix up to V_omega^{-1}(mu)
  double max_speed_deviation = 0.0;
  double max_prefix_deviation = 0.0;
  bool all() const { return domain_ok && unit_speed_ok && range_ok && prefix_ok; }
};

// Checks the four membership properties of the flattening class at level mu.
GammaReport validate_gamma_membership(const Curve& c, const WeightProfile& V,
                                      const MetricProfile& metric, double mu,
                                      const Boundary& bd);

// Symmetric Hausdorff distance between the polyline images in the (F, G) chart.
double hausdorff_distance(const Curve& a, const Curve& b);

// Largest node distance to the straight profile's image (the segment from
// (r2, 0) to (r1, 0)). A cheap lower bound for the Hausdorff distance to it.
double max_deviation_from_omega(const Curve& c);

// Inserts the midpoint of every segment; the image is unchanged.
Curve refine_midpoints(const Curve& c);

}  // namespace meridian
