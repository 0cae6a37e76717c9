#include "meridian/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace meridian {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Symmetric tridiagonal matrix: diagonal d, off-diagonal e (|e| = |d| - 1).
struct Tridiag {
  std::vector<double> d, e;
};

// Generalized pencil A x = lambda M x on the interior nodes, with A symmetric
// tridiagonal and M diagonal.
struct Pencil {
  std::vector<double> Ad, Ae, Md;
};

enum class MidpointRule { harmonic, arithmetic };

Pencil assemble(const SLSystem& sys, MidpointRule rule) {
  const std::size_t N = sys.segments();
  if (N < 2) throw ValidationError("assemble: need at least two segments");
  const double k2 = sys.k * sys.k;

  std::vector<double> p(N);
  for (std::size_t s = 0; s < N; ++s) {
    const double rl = sys.v[s] / sys.sigma[s];
    const double rr = sys.v[s + 1] / sys.sigma[s + 1];
    p[s] = rule == MidpointRule::harmonic ? 2.0 / (1.0 / rl + 1.0 / rr)
                                          : 0.5 * (rl + rr);
  }

  Pencil pc;
  pc.Ad.resize(N - 1);
  pc.Ae.resize(N - 2);
  pc.Md.resize(N - 1);
  for (std::size_t i = 1; i < N; ++i) {
    const double hl = sys.t[i] - sys.t[i - 1];
    const double hr = sys.t[i + 1] - sys.t[i];
    const double w = 0.5 * (hl + hr);
    pc.Ad[i - 1] = p[i - 1] / hl + p[i] / hr + k2 * (sys.sigma[i] / sys.v[i]) * w;
    pc.Md[i - 1] = sys.v[i] * sys.sigma[i] * w;
    if (i < N - 1) pc.Ae[i - 1] = -p[i] / hr;
  }
  return pc;
}

Tridiag to_standard(const Pencil& pc) {
  Tridiag T;
  const std::size_t m = pc.Ad.size();
  T.d.resize(m);
  T.e.resize(m > 0 ? m - 1 : 0);
  for (std::size_t i = 0; i < m; ++i) T.d[i] = pc.Ad[i] / pc.Md[i];
  for (std::size_t i = 0; i + 1 < m; ++i)
    T.e[i] = pc.Ae[i] / std::sqrt(pc.Md[i] * pc.Md[i + 1]);
  return T;
}

double gershgorin_norm(const Tridiag& T) {
  double worst = 0.0;
  for (std::size_t i = 0; i < T.d.size(); ++i) {
    double r = std::abs(T.d[i]);
    if (i > 0) r += std::abs(T.e[i - 1]);
    if (i + 1 < T.d.size()) r += std::abs(T.e[i]);
    worst = std::max(worst, r);
  }
  return worst;
}

// Number of eigenvalues below x, from the signs of the LDL^T pivots.
int sturm_count(const Tridiag& T, double x, double pivmin) {
  int count = 0;
  double q = T.d[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < T.d.size(); ++i) {
    q = T.d[i] - x - T.e[i - 1] * T.e[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
  }
  return count;
}

double bisect_eigenvalue(const Tridiag& T, int n, double lo, double hi, double pivmin) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(T, mid, pivmin) >= n)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

// Tridiagonal LU with partial pivoting (dgttrf layout).
struct TriLU {
  std::vector<double> dl, d, du, du2;
  std::vector<int> piv;
};

TriLU tri_factor(std::vector<double> dl, std::vector<double> d, std::vector<double> du) {
  const std::size_t n = d.size();
  TriLU f;
  f.du2.assign(n > 2 ? n - 2 : 0, 0.0);
  f.piv.assign(n, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      f.piv[i] = 0;
      if (d[i] == 0.0) d[i] = std::numeric_limits<double>::min();
      const double fac = dl[i] / d[i];
      dl[i] = fac;
      d[i + 1] -= fac * du[i];
    } else {
      f.piv[i] = 1;
      const double fac = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fac;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - fac * d[i + 1];
      if (i + 2 < n) {
        f.du2[i] = du[i + 1];
        du[i + 1] = -fac * du[i + 1];
      }
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = std::numeric_limits<double>::min();
  f.dl = std::move(dl);
  f.d = std::move(d);
  f.du = std::move(du);
  return f;
}

void tri_solve(const TriLU& f, std::vector<double>& b) {
  const std::size_t n = f.d.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (f.piv[i] == 0) {
      b[i + 1] -= f.dl[i] * b[i];
    } else {
      const double tmp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tmp - f.dl[i] * b[i];
    }
  }
  b[n - 1] /= f.d[n - 1];
  if (n >= 2) b[n - 2] = (b[n - 2] - f.du[n - 2] * b[n - 1]) / f.d[n - 2];
  for (std::size_t ii = n; ii-- > 2;) {
    const std::size_t i = ii - 2;
    b[i] = (b[i] - f.du[i] * b[i + 1] - f.du2[i] * b[i + 2]) / f.d[i];
  }
}

double vec_norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

// Deterministic start vector; splitmix64-style generator.
std::vector<double> start_vector(std::size_t n, std::uint64_t seed) {
  std::vector<double> x(n);
  std::uint64_t s = seed * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull;
  for (std::size_t i = 0; i < n; ++i) {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    x[i] = static_cast<double>(z >> 11) * 0x1p-53 - 0.5;
  }
  return x;
}

std::vector<double> tridiag_apply(const Tridiag& T, const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = T.d[i] * x[i];
    if (i > 0) s += T.e[i - 1] * x[i - 1];
    if (i + 1 < n) s += T.e[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

// Shifted inverse iteration for the eigenvector of the standard problem.
std::vector<double> inverse_iteration(const Tridiag& T, double lambda, int index,
                                      double norm_scale) {
  const std::size_t m = T.d.size();
  std::vector<double> sub(m > 1 ? m - 1 : 0), diag(m), sup(m > 1 ? m - 1 : 0);
  // Shift slightly off the converged eigenvalue so the factorization stays
  // usable even when bisection resolved lambda to the last bit.
  const double shift =
      lambda + 8.0 * kEps * std::abs(lambda) + std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < m; ++i) diag[i] = T.d[i] - shift;
  for (std::size_t i = 0; i + 1 < m; ++i) sub[i] = sup[i] = T.e[i];
  const TriLU f = tri_factor(sub, diag, sup);

  std::vector<double> z = start_vector(m, 1234567ull + static_cast<std::uint64_t>(index));
  double nz = vec_norm(z);
  for (double& zi : z) zi /= nz;

  const double residual_tol = 1e-8;
  for (int it = 0; it < 5; ++it) {
    tri_solve(f, z);
    nz = vec_norm(z);
    if (!std::isfinite(nz) || nz == 0.0)
      throw SolverError("inverse iteration produced a non-finite vector");
    for (double& zi : z) zi /= nz;
    if (it >= 1) {
      std::vector<double> r = tridiag_apply(T, z);
      double rn = 0.0;
      for (std::size_t i = 0; i < m; ++i) rn += (r[i] - lambda * z[i]) * (r[i] - lambda * z[i]);
      if (std::sqrt(rn) <= residual_tol * norm_scale) return z;
    }
  }
  throw SolverError("inverse iteration failed to meet the residual tolerance");
}

SLSystem collapse_zero_speed(const SLSystem& sys) {
  double sig_max = 0.0;
  for (double s : sys.sigma) sig_max = std::max(sig_max, s);
  if (!(sig_max > 0.0)) throw DegenerateError("solve: speed vanishes identically");
  const double floor_abs = kCollapseThreshold * sig_max;

  bool any = false;
  for (double s : sys.sigma)
    if (s < floor_abs) any = true;
  if (!any) return sys;

  // Remove the parameter measure of maximal dead runs (each run of zero-speed
  // nodes glues to a single node); remaining isolated dead nodes are floored.
  SLSystem out;
  out.k = sys.k;
  const std::size_t n = sys.t.size();
  std::vector<char> dead(n);
  for (std::size_t i = 0; i < n; ++i) dead[i] = sys.sigma[i] < floor_abs;

  double shift = 0.0;
  std::size_t i = 0;
  while (i < n) {
    if (!dead[i]) {
      out.t.push_back(sys.t[i] - shift);
      out.v.push_back(sys.v[i]);
      out.sigma.push_back(sys.sigma[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && dead[j + 1]) ++j;
    out.t.push_back(sys.t[i] - shift);
    out.v.push_back(j > i ? 0.5 * (sys.v[i] + sys.v[j]) : sys.v[i]);
    shift += sys.t[j] - sys.t[i];
    // The glued (or isolated dead) node takes a floored speed; it carries a
    // vanishing share of every integral.
    const double left = out.sigma.empty() ? floor_abs : out.sigma.back();
    const double right = (j + 1 < n) ? std::max(sys.sigma[j + 1], floor_abs) : floor_abs;
    out.sigma.push_back(std::max(0.5 * (left + right), floor_abs));
    i = j + 1;
  }
  if (out.t.size() < 3) throw DegenerateError("solve: collapse left no interior nodes");
  return out;
}

std::vector<EigenPair> extract_pairs(const SLSystem& s, const Pencil& pc, int n_max) {
  const Tridiag T = to_standard(pc);
  const std::size_t m = T.d.size();
  if (n_max < 1) throw DomainError("solve: n_max must be >= 1");
  if (static_cast<std::size_t>(n_max) > m)
    throw ValidationError("solve: grid too coarse for the requested eigenvalue count");

  const double norm = gershgorin_norm(T);
  double emax2 = 1.0;
  for (double e : T.e) emax2 = std::max(emax2, e * e);
  const double pivmin = std::numeric_limits<double>::min() / kEps * emax2;
  const double lo0 = -norm - 1.0, hi0 = norm + 1.0;

  std::vector<double> lams(n_max);
  for (int n = 1; n <= n_max; ++n)
    lams[n - 1] = bisect_eigenvalue(T, n, lo0, hi0, pivmin);

  for (int n = 0; n + 1 < n_max; ++n)
    if (lams[n + 1] - lams[n] < 1e3 * kEps * std::abs(lams[n + 1]))
      throw SolverError("solve: eigenvalue gap below resolution at n=" + std::to_string(n + 1));

  std::vector<EigenPair> pairs(n_max);
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> z = inverse_iteration(T, lams[n - 1], n, norm);

    EigenPair& ep = pairs[n - 1];
    ep.n = n;
    ep.lambda = lams[n - 1];
    ep.phi.assign(s.t.size(), 0.0);
    for (std::size_t i = 0; i < m; ++i) ep.phi[i + 1] = z[i] / std::sqrt(pc.Md[i]);

    double nrm = 0.0;
    for (std::size_t i = 0; i < m; ++i) nrm += ep.phi[i + 1] * ep.phi[i + 1] * pc.Md[i];
    nrm = std::sqrt(nrm);
    double phimax = 0.0;
    for (double p : ep.phi) phimax = std::max(phimax, std::abs(p));
    double lead = 0.0;
    for (std::size_t i = 1; i < ep.phi.size(); ++i)
      if (std::abs(ep.phi[i]) > 1e-8 * phimax) {
        lead = ep.phi[i];
        break;
      }
    const double scale = (lead < 0 ? -1.0 : 1.0) / nrm;
    for (double& p : ep.phi) p *= scale;

    int flips = 0;
    double prev = 0.0;
    for (std::size_t i = 1; i + 1 < ep.phi.size(); ++i) {
      const double cur = ep.phi[i];
      if (cur == 0.0) continue;
      if (prev != 0.0 && (prev < 0) != (cur < 0)) ++flips;
      prev = cur;
    }
    ep.roots = flips;
    if (ep.roots != n - 1)
      throw SolverError("solve: eigenvector root count " + std::to_string(ep.roots) +
                        " != " + std::to_string(n - 1) + " for n=" + std::to_string(n));
  }
  return pairs;
}

}  // namespace

void SLSystem::validate() const {
  const std::size_t n = t.size();
  if (n < 3 || v.size() != n || sigma.size() != n)
    throw ValidationError("SLSystem: need >= 3 nodes with matching t/v/sigma sizes");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(t[i] < t[i + 1]))
      throw ValidationError("SLSystem: grid must be strictly increasing");
  for (double vi : v)
    if (!(vi > 0.0) || !std::isfinite(vi))
      throw ValidationError("SLSystem: weight v must be positive");
  for (double si : sigma)
    if (!(si >= 0.0) || !std::isfinite(si))
      throw ValidationError("SLSystem: speed sigma must be nonnegative");
  if (!(k >= 0.0)) throw ValidationError("SLSystem: k must be nonnegative");
}

SLSystem system_from_curve(const Curve& c, const WeightProfile& V,
                           const MetricProfile& metric, double k) {
  SLSystem sys;
  sys.k = k;
  sys.t = c.t;
  sys.v.resize(c.t.size());
  for (std::size_t i = 0; i < c.t.size(); ++i) sys.v[i] = V(c.F[i]);

  const SpeedTrace tr = speed(c, metric);
  sys.sigma.resize(c.t.size());
  sys.sigma.front() = tr.sigma.front();
  sys.sigma.back() = tr.sigma.back();
  for (std::size_t i = 1; i + 1 < c.t.size(); ++i) {
    const double hl = c.t[i] - c.t[i - 1];
    const double hr = c.t[i + 1] - c.t[i];
    sys.sigma[i] = (tr.sigma[i - 1] * hl + tr.sigma[i] * hr) / (hl + hr);
  }
  return sys;
}

SLSystem constant_system(double a, double b, double k, int n_segments) {
  if (!(b > a) || n_segments < 2)
    throw ValidationError("constant_system: need b > a and >= 2 segments");
  SLSystem sys;
  sys.k = k;
  sys.t.resize(n_segments + 1);
  for (int i = 0; i <= n_segments; ++i) sys.t[i] = a + (b - a) * i / n_segments;
  sys.t.back() = b;
  sys.v.assign(n_segments + 1, 1.0);
  sys.sigma.assign(n_segments + 1, 1.0);
  return sys;
}

SLSystem restrict_system(const SLSystem& sys, double a2, double b2) {
  if (!(a2 >= sys.a() - 1e-12) || !(b2 <= sys.b() + 1e-12) || !(a2 < b2))
    throw DomainError("restrict_system: need a <= a2 < b2 <= b");
  auto interp = [&](const std::vector<double>& y, double s) {
    auto it = std::upper_bound(sys.t.begin(), sys.t.end(), s);
    std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - sys.t.begin() - 1, 0),
                                          sys.t.size() - 2);
    const double al = (s - sys.t[i]) / (sys.t[i + 1] - sys.t[i]);
    return y[i] + al * (y[i + 1] - y[i]);
  };
  SLSystem out;
  out.k = sys.k;
  out.t.push_back(a2);
  out.v.push_back(interp(sys.v, a2));
  out.sigma.push_back(interp(sys.sigma, a2));
  const double tol = 1e-12 * std::max(1.0, sys.b() - sys.a());
  for (std::size_t i = 0; i < sys.t.size(); ++i) {
    if (sys.t[i] <= a2 + tol || sys.t[i] >= b2 - tol) continue;
    out.t.push_back(sys.t[i]);
    out.v.push_back(sys.v[i]);
    out.sigma.push_back(sys.sigma[i]);
  }
  out.t.push_back(b2);
  out.v.push_back(interp(sys.v, b2));
  out.sigma.push_back(interp(sys.sigma, b2));
  return out;
}

SLSystem refine_system(const SLSystem& sys, int factor) {
  if (factor < 1) throw DomainError("refine_system: factor must be >= 1");
  SLSystem out;
  out.k = sys.k;
  for (std::size_t i = 0; i + 1 < sys.t.size(); ++i) {
    for (int j = 0; j < factor; ++j) {
      const double al = static_cast<double>(j) / factor;
      out.t.push_back(sys.t[i] + al * (sys.t[i + 1] - sys.t[i]));
      out.v.push_back(sys.v[i] + al * (sys.v[i + 1] - sys.v[i]));
      out.sigma.push_back(sys.sigma[i] + al * (sys.sigma[i + 1] - sys.sigma[i]));
    }
  }
  out.t.push_back(sys.t.back());
  out.v.push_back(sys.v.back());
  out.sigma.push_back(sys.sigma.back());
  return out;
}

double rayleigh_quotient(const std::vector<double>& w, const SLSystem& sys) {
  sys.validate();
  if (w.size() != sys.t.size())
    throw ValidationError("rayleigh_quotient: trial size must match the grid");
  double wmax = 0.0;
  for (double wi : w) wmax = std::max(wmax, std::abs(wi));
  if (wmax == 0.0) throw DegenerateError("rayleigh_quotient: trial function is zero");
  if (std::abs(w.front()) > 1e-12 * wmax || std::abs(w.back()) > 1e-12 * wmax)
    throw DomainError("rayleigh_quotient: trial must vanish at both endpoints");

  const double k2 = sys.k * sys.k;
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s + 1 < sys.t.size(); ++s) {
    const double h = sys.t[s + 1] - sys.t[s];
    const double rl = sys.v[s] / sys.sigma[s];
    const double rr = sys.v[s + 1] / sys.sigma[s + 1];
    const double p = 2.0 / (1.0 / rl + 1.0 / rr);
    const double dw = w[s + 1] - w[s];
    num += p * dw * dw / h;
  }
  for (std::size_t i = 0; i < sys.t.size(); ++i) {
    double wq = 0.0;
    if (i > 0) wq += 0.5 * (sys.t[i] - sys.t[i - 1]);
    if (i + 1 < sys.t.size()) wq += 0.5 * (sys.t[i + 1] - sys.t[i]);
    num += k2 * (sys.sigma[i] / sys.v[i]) * w[i] * w[i] * wq;
    den += sys.v[i] * sys.sigma[i] * w[i] * w[i] * wq;
  }
  if (!(den > 0.0)) throw DegenerateError("rayleigh_quotient: zero denominator");
  return num / den;
}

std::vector<EigenPair> solve(const SLSystem& sys, int n_max) {
  sys.validate();
  const SLSystem s = collapse_zero_speed(sys);
  const Pencil pc = assemble(s, MidpointRule::harmonic);
  return extract_pairs(s, pc, n_max);
}

std::vector<EigenPair> dense_oracle_solve(const SLSystem& sys, int n_max, int refine) {
  sys.validate();
  const SLSystem base = collapse_zero_speed(sys);
  const SLSystem s = refine_system(base, refine);
  if (s.segments() > 16384)
    throw ValidationError("dense_oracle_solve: refined grid exceeds 16384 segments");
  const Pencil pc = assemble(s, MidpointRule::arithmetic);
  const Tridiag T = to_standard(pc);

  // Implicit-shift QL sweep; d ends holding all eigenvalues.
  std::vector<double> d = T.d;
  std::vector<double> e = T.e;
  e.push_back(0.0);
  const int m = static_cast<int>(d.size());
  for (int l = 0; l < m; ++l) {
    int iter = 0;
    int mm;
    do {
      for (mm = l; mm < m - 1; ++mm) {
        const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm]) <= kEps * dd) break;
      }
      if (mm != l) {
        if (iter++ == 60) throw SolverError("dense_oracle_solve: QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
        double si = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = mm - 1; i >= l; --i) {
          double f = si * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[mm] = 0.0;
            break;
          }
          si = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * si + 2.0 * c * b;
          p = si * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[mm] = 0.0;
      }
    } while (mm != l);
  }
  std::sort(d.begin(), d.end());
  if (n_max < 1 || static_cast<std::size_t>(n_max) > d.size())
    throw ValidationError("dense_oracle_solve: bad n_max");

  // Eigenvectors for the requested indices by inverse iteration on the same matrix.
  std::vector<EigenPair> pairs(n_max);
  const double norm = gershgorin_norm(T);
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> z = inverse_iteration(T, d[n - 1], 1000 + n, norm);
    EigenPair& ep = pairs[n - 1];
    ep.n = n;
    ep.lambda = d[n - 1];
    ep.phi.assign(s.t.size(), 0.0);
    for (std::size_t i = 0; i < z.size(); ++i) ep.phi[i + 1] = z[i] / std::sqrt(pc.Md[i]);
    double nrm = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) nrm += ep.phi[i + 1] * ep.phi[i + 1] * pc.Md[i];
    nrm = std::sqrt(nrm);
    double lead = ep.phi[1] < 0 ? -1.0 : 1.0;
    for (double& p : ep.phi) p *= lead / nrm;
    int flips = 0;
    double prev = 0.0;
    for (std::size_t i = 1; i + 1 < ep.phi.size(); ++i) {
      const double cur = ep.phi[i];
      if (cur == 0.0) continue;
      if (prev != 0.0 && (prev < 0) != (cur < 0)) ++flips;
      prev = cur;
    }
    ep.roots = flips;
  }
  return pairs;
}

double bessel_oracle(const Boundary& bd, double k, int n) {
  if (!(bd.r2 > 0.0))
    throw DomainError("bessel_oracle: separation requires r2 > 0");
  if (n < 1) throw DomainError("bessel_oracle: n must be >= 1");
  if (!(k >= 0.0)) throw DomainError("bessel_oracle: k must be >= 0");

  auto cross = [&](double s) {
    return std::cyl_bessel_j(k, s * bd.r2) * std::cyl_neumann(k, s * bd.r1) -
           std::cyl_bessel_j(k, s * bd.r1) * std::cyl_neumann(k, s * bd.r2);
  };

  const double step = std::numbers::pi / (8.0 * bd.width());
  const double s_cap = (n + 8.0) * std::numbers::pi / bd.width() + (k + 10.0) / bd.r2;
  // Every root satisfies s >= k / r1 (the quotient is bounded below by
  // k^2 / V(r1)^2), so the scan can start just below that and skip the
  // region where the small-argument J and Y magnitudes diverge.
  double s_prev = std::max(1e-3 * step, 0.8 * k / bd.r1);
  double f_prev = cross(s_prev);
  int found = 0;
  for (double s = s_prev + step; s < s_cap; s += step) {
    const double f = cross(s);
    if (f == 0.0 || (f_prev < 0.0) != (f < 0.0)) {
      double lo = s_prev, hi = s;
      const bool lo_neg = f_prev < 0.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((cross(mid) < 0.0) == lo_neg)
          lo = mid;
        else
          hi = mid;
        if (hi - lo <= 1e-15 * hi) break;
      }
      const double root = 0.5 * (lo + hi);
      if (++found == n) return root * root;
    }
    s_prev = s;
    f_prev = f;
  }
  throw SolverError("bessel_oracle: root bracketing failed for n=" + std::to_string(n));
}

double LogDerivativeTrace::at(double s) const {
  if (t.empty()) throw DomainError("LogDerivativeTrace::at: empty trace");
  auto it = std::lower_bound(t.begin(), t.end(), s);
  std::size_t hi = std::min<std::size_t>(it - t.begin(), t.size() - 1);
  std::size_t lo = hi > 0 ? hi - 1 : 0;
  while (hi + 1 < t.size() && masked[hi]) ++hi;
  while (lo > 0 && masked[lo]) --lo;
  if (masked[lo] || masked[hi])
    throw DomainError("LogDerivativeTrace::at: no unmasked neighborhood");
  if (hi == lo) return Y[lo];
  const double al = (s - t[lo]) / (t[hi] - t[lo]);
  return Y[lo] + al * (Y[hi] - Y[lo]);
}

LogDerivativeTrace log_derivative(const EigenPair& ep, const SLSystem& sys) {
  const std::size_t n = sys.t.size();
  if (ep.phi.size() != n)
    throw ValidationError("log_derivative: eigenpair does not match grid");
  double phimax = 0.0;
  for (double p : ep.phi) phimax = std::max(phimax, std::abs(p));
  const double mask_tol = 1e-6 * phimax;

  LogDerivativeTrace tr;
  tr.t.reserve(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = sys.t[i] - sys.t[i - 1];
    const double hr = sys.t[i + 1] - sys.t[i];
    const double dphi = (hl * hl * ep.phi[i + 1] - hr * hr * ep.phi[i - 1] -
                         (hl * hl - hr * hr) * ep.phi[i]) /
                        (hl * hr * (hl + hr));
    tr.t.push_back(sys.t[i]);
    if (std::abs(ep.phi[i]) <= mask_tol) {
      tr.Y.push_back(0.0);
      tr.masked.push_back(1);
    } else {
      tr.Y.push_back(sys.v[i] * dphi / (sys.sigma[i] * ep.phi[i]));
      tr.masked.push_back(0);
    }
  }
  return tr;
}

std::vector<double> interior_roots(const EigenPair& ep, const SLSystem& sys) {
  std::vector<double> roots;
  for (std::size_t i = 1; i + 1 < ep.phi.size(); ++i) {
    if (ep.phi[i] == 0.0) {
      roots.push_back(sys.t[i]);
      continue;
    }
    if (i + 2 < ep.phi.size() && ep.phi[i] * ep.phi[i + 1] < 0.0) {
      const double al = ep.phi[i] / (ep.phi[i] - ep.phi[i + 1]);
      roots.push_back(sys.t[i] + al * (sys.t[i + 1] - sys.t[i]));
    }
  }
  return roots;
}

std::vector<SpectrumEntry> assemble_spectrum(const Curve& c, const WeightProfile& V,
                                             const MetricProfile& metric,
                                             int K_max, int N_max) {
  if (K_max < 0 || N_max < 1)
    throw DomainError("assemble_spectrum: need K_max >= 0 and N_max >= 1");
  std::vector<SpectrumEntry> rows;
  for (int k = 0; k <= K_max; ++k) {
    const SLSystem sys = system_from_curve(c, V, metric, static_cast<double>(k));
    const auto pairs = solve(sys, N_max);
    for (int n = 1; n <= N_max; ++n)
      rows.push_back({k, n, k == 0 ? 1 : 2, pairs[n - 1].lambda});
  }
  std::sort(rows.begin(), rows.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    if (a.k != b.k) return a.k < b.k;
    return a.n < b.n;
  });
  return rows;
}

}  // namespace meridian
