#include "meridian/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace meridian {

namespace {

// Index of the segment containing s, clamped to [0, segments-1].
std::size_t segment_index(const std::vector<double>& t, double s) {
  if (s <= t.front()) return 0;
  if (s >= t.back()) return t.size() - 2;
  auto it = std::upper_bound(t.begin(), t.end(), s);
  return static_cast<std::size_t>(it - t.begin()) - 1;
}

double lerp_at(const std::vector<double>& t, const std::vector<double>& y, double s) {
  const std::size_t i = segment_index(t, s);
  const double a = (s - t[i]) / (t[i + 1] - t[i]);
  return y[i] + a * (y[i + 1] - y[i]);
}

double point_segment_distance(double px, double py, double ax, double ay,
                              double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double s = 0.0;
  if (len2 > 0.0) s = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0);
  const double qx = ax + s * dx, qy = ay + s * dy;
  return std::hypot(px - qx, py - qy);
}

double directed_hausdorff(const Curve& a, const Curve& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < b.t.size(); ++j) {
      best = std::min(best, point_segment_distance(a.F[i], a.G[i], b.F[j], b.G[j],
                                                   b.F[j + 1], b.G[j + 1]));
      if (best == 0.0) break;
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double Curve::F_at(double s) const { return lerp_at(t, F, s); }
double Curve::G_at(double s) const { return lerp_at(t, G, s); }

void Curve::validate() const {
  const std::size_t n = t.size();
  if (n < 2 || F.size() != n || G.size() != n)
    throw ValidationError("Curve: need >= 2 samples with matching t/F/G sizes");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(t[i] < t[i + 1]))
      throw ValidationError("Curve: parameter grid must be strictly increasing");
  const double tol = 1e-9 * std::max(1.0, bd.r1);
  if (std::abs(t.front()) > tol)
    throw ValidationError("Curve: parameter must start at 0");
  if (std::abs(F.front() - bd.r1) > tol || std::abs(G.front()) > tol)
    throw ValidationError("Curve: must start at (r1, 0)");
  if (std::abs(F.back() - bd.r2) > tol)
    throw ValidationError("Curve: must end at F = r2");
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(F[i] > bd.r2 - tol) || !(F[i] < bd.r1 + tol))
      throw ValidationError("Curve: interior F must stay within (r2, r1)");
    if (!(F[i] > -tol))
      throw ValidationError("Curve: interior F must stay positive");
  }
}

double SpeedTrace::max_deviation_from_unit() const {
  double worst = 0.0;
  for (double s : sigma) worst = std::max(worst, std::abs(s - 1.0));
  return worst;
}

Curve omega_curve(const Boundary& bd, int n_segments) {
  if (n_segments < 1) throw ValidationError("omega_curve: need at least one segment");
  Curve c;
  c.bd = bd;
  const double L = bd.width();
  c.t.resize(n_segments + 1);
  c.F.resize(n_segments + 1);
  c.G.assign(n_segments + 1, 0.0);
  for (int i = 0; i <= n_segments; ++i) {
    c.t[i] = L * i / n_segments;
    c.F[i] = bd.r1 - c.t[i];
  }
  c.t.back() = L;
  c.F.back() = bd.r2;
  return c;
}

SpeedTrace speed(const Curve& c, const MetricProfile& metric) {
  SpeedTrace tr;
  tr.sigma.resize(c.segments());
  for (std::size_t i = 0; i < c.segments(); ++i) {
    const double dF = c.F[i + 1] - c.F[i];
    const double dG = c.G[i + 1] - c.G[i];
    const double dt = c.t[i + 1] - c.t[i];
    const double Fmid = 0.5 * (c.F[i] + c.F[i + 1]);
    tr.sigma[i] = std::sqrt(dF * dF + metric.gyy(Fmid) * dG * dG) / dt;
  }
  return tr;
}

Curve ensure_node(const Curve& c, double P) {
  const double tol = 1e-12 * std::max(1.0, c.length());
  const std::size_t i = segment_index(c.t, P);
  if (std::abs(c.t[i] - P) <= tol || std::abs(c.t[i + 1] - P) <= tol) return c;
  Curve out = c;
  const double a = (P - c.t[i]) / (c.t[i + 1] - c.t[i]);
  out.t.insert(out.t.begin() + i + 1, P);
  out.F.insert(out.F.begin() + i + 1, c.F[i] + a * (c.F[i + 1] - c.F[i]));
  out.G.insert(out.G.begin() + i + 1, c.G[i] + a * (c.G[i + 1] - c.G[i]));
  return out;
}

Curve zero_transverse_before(const Curve& c, double P) {
  if (!(P > 0.0) || P > c.length() * (1.0 + 1e-12))
    throw DomainError("zero_transverse_before: P must lie in (0, L]");
  Curve out = ensure_node(c, P);
  const double tol = 1e-12 * std::max(1.0, out.length());
  std::vector<double> G_new(out.t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < out.t.size(); ++i) {
    const double dG = (out.t[i] < P - tol) ? 0.0 : out.G[i + 1] - out.G[i];
    G_new[i + 1] = G_new[i] + dG;
  }
  out.G = std::move(G_new);
  return out;
}

Curve running_min_flatten(const Curve& c, double P) {
  if (!(P > 0.0) || P > c.length() * (1.0 + 1e-12))
    throw DomainError("running_min_flatten: P must lie in (0, L]");
  Curve out = ensure_node(c, P);
  const double tol = 1e-12 * std::max(1.0, out.length());
  double run = out.F[0];
  for (std::size_t i = 0; i < out.t.size() && out.t[i] <= P + tol; ++i) {
    run = std::min(run, out.F[i]);
    out.F[i] = run;
  }
  return out;
}

Curve arclength_reparametrize(const Curve& c, const MetricProfile& metric) {
  const SpeedTrace tr = speed(c, metric);
  Curve out;
  out.bd = c.bd;
  out.t.push_back(0.0);
  out.F.push_back(c.F[0]);
  out.G.push_back(c.G[0]);
  double ell = 0.0;
  for (std::size_t i = 0; i < c.segments(); ++i) {
    const double dt = c.t[i + 1] - c.t[i];
    if (tr.sigma[i] < kCollapseThreshold) {
      // Collapsed segment: the parameter does not advance; carry the segment's
      // end values so downstream increments stay exact.
      out.F.back() = c.F[i + 1];
      out.G.back() = c.G[i + 1];
    } else {
      ell += tr.sigma[i] * dt;
      out.t.push_back(ell);
      out.F.push_back(c.F[i + 1]);
      out.G.push_back(c.G[i + 1]);
    }
  }
  if (!(ell > 0.0) || out.t.size() < 2)
    throw DegenerateError("arclength_reparametrize: curve has zero length");
  return out;
}

double first_crossing(const Curve& c, const WeightProfile& V, double mu) {
  const double v_top = V(c.F.front());
  const double scale = std::max(1.0, std::abs(v_top));
  if (mu >= v_top - 1e-14 * scale)
    throw DomainError("first_crossing: mu must be below V(F(0))");
  if (mu < V(c.bd.r2) - 1e-14 * scale) return c.length();

  // V is strictly monotone, so V(F) = mu exactly where F = V^{-1}(mu); the
  // level set of the piecewise-linear F locates the crossing without any
  // loss where V' is small.
  const double x_mu = invert_V(V, mu, c.bd);
  const double ftol = 1e-13 * std::max(1.0, c.bd.r1);
  for (std::size_t i = 0; i + 1 < c.t.size(); ++i) {
    if (std::abs(c.F[i] - x_mu) <= ftol) return c.t[i];
    if ((c.F[i] - x_mu) * (c.F[i + 1] - x_mu) <= 0.0) {
      const double a = (c.F[i] - x_mu) / (c.F[i] - c.F[i + 1]);
      return c.t[i] + a * (c.t[i + 1] - c.t[i]);
    }
  }
  return c.length();
}

Curve splice_with_omega(const Curve& g, const WeightProfile& V, double mu,
                        const Boundary& bd) {
  const double v_lo = V(bd.r2), v_hi = V(bd.r1);
  if (mu < v_lo - 1e-12 * std::max(1.0, v_hi) || mu >= v_hi)
    throw DomainError("splice_with_omega: mu must lie in [V(r2), V(r1))");

  const double B = first_crossing(g, V, mu);
  const Curve g2 = ensure_node(g, B);
  const double x_star = invert_V(V, mu, bd);
  const double t_star = bd.r1 - x_star;

  const double junction_tol = kTolJunction * bd.r1;
  if (std::abs(g2.F_at(B) - x_star) > junction_tol)
    throw ConsistencyError("splice_with_omega: junction F mismatch of " +
                           std::to_string(std::abs(g2.F_at(B) - x_star)));

  Curve out;
  out.bd = bd;
  const double mean_h = g2.length() / g2.segments();
  const int n_pre = std::max<int>(1, static_cast<int>(std::llround(t_star / mean_h)));
  for (int i = 0; i <= n_pre; ++i) {
    const double tp = t_star * i / n_pre;
    out.t.push_back(tp);
    out.F.push_back(bd.r1 - tp);
    out.G.push_back(0.0);
  }
  const double tol = 1e-12 * std::max(1.0, g2.length());
  for (std::size_t i = 0; i < g2.t.size(); ++i) {
    if (g2.t[i] <= B + tol) continue;
    out.t.push_back(t_star + (g2.t[i] - B));
    out.F.push_back(g2.F[i]);
    out.G.push_back(g2.G[i]);
  }
  return out;
}

GammaReport validate_gamma_membership(const Curve& c, const WeightProfile& V,
                                      const MetricProfile& metric, double mu,
                                      const Boundary& bd) {
  GammaReport rep;
  const double D = c.length();
  const double tol = kTolJunction * bd.r1;

  rep.domain_ok = std::isfinite(D) && D >= bd.width() - tol;

  rep.max_speed_deviation = speed(c, metric).max_deviation_from_unit();
  rep.unit_speed_ok = rep.max_speed_deviation <= kTolSpeed;

  rep.range_ok = std::abs(c.F.back() - bd.r2) <= tol;
  for (std::size_t i = 1; i + 1 < c.t.size(); ++i)
    if (!(c.F[i] > bd.r2 - tol) || !(c.F[i] < bd.r1 + tol)) rep.range_ok = false;

  const double t_star = bd.r1 - invert_V(V, mu, bd);
  double worst = 0.0;
  for (std::size_t i = 0; i < c.t.size() && c.t[i] <= t_star + tol; ++i) {
    worst = std::max(worst, std::abs(c.F[i] - (bd.r1 - c.t[i])));
    worst = std::max(worst, std::abs(c.G[i]));
  }
  if (t_star <= D) {
    worst = std::max(worst, std::abs(c.F_at(t_star) - (bd.r1 - t_star)));
    worst = std::max(worst, std::abs(c.G_at(t_star)));
  }
  rep.max_prefix_deviation = worst;
  rep.prefix_ok = worst <= tol;
  return rep;
}

double hausdorff_distance(const Curve& a, const Curve& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double max_deviation_from_omega(const Curve& c) {
  double worst = 0.0;
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    double d;
    if (c.F[i] < c.bd.r2)
      d = std::hypot(c.bd.r2 - c.F[i], c.G[i]);
    else if (c.F[i] > c.bd.r1)
      d = std::hypot(c.F[i] - c.bd.r1, c.G[i]);
    else
      d = std::abs(c.G[i]);
    worst = std::max(worst, d);
  }
  return worst;
}

Curve refine_midpoints(const Curve& c) {
  Curve out;
  out.bd = c.bd;
  out.t.reserve(2 * c.t.size());
  out.F.reserve(2 * c.t.size());
  out.G.reserve(2 * c.t.size());
  for (std::size_t i = 0; i + 1 < c.t.size(); ++i) {
    out.t.push_back(c.t[i]);
    out.F.push_back(c.F[i]);
    out.G.push_back(c.G[i]);
    out.t.push_back(0.5 * (c.t[i] + c.t[i + 1]));
    out.F.push_back(0.5 * (c.F[i] + c.F[i + 1]));
    out.G.push_back(0.5 * (c.G[i] + c.G[i + 1]));
  }
  out.t.push_back(c.t.back());
  out.F.push_back(c.F.back());
  out.G.push_back(c.G.back());
  return out;
}

}  // namespace meridian
