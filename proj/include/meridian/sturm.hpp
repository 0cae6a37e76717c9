#pragma once

#include <cmath>
#include <vector>

#include "meridian/curve.hpp"

namespace meridian {

// Dirichlet eigenvalue data on [a, b]: weight v > 0 and speed sigma >= 0
// sampled at the grid nodes, plus the angular parameter k >= 0. The quotient
// being minimized is
//   ( int |w'|^2 v/sigma + k^2 |w|^2 sigma/v ) / ( int |w|^2 v sigma ).
struct SLSystem {
  std::vector<double> t, v, sigma;
  double k = 0.0;

  double a() const { return t.front(); }
  double b() const { return t.back(); }
  std::size_t segments() const { return t.size() - 1; }
  void validate() const;
};

// v = V(F) at the nodes; sigma from the per-segment metric speeds, averaged
// onto nodes. Unit-speed curves give sigma = 1 exactly.
SLSystem system_from_curve(const Curve& c, const WeightProfile& V,
                           const MetricProfile& metric, double k);

// Uniform grid with v = sigma = 1 (the classical string).
SLSystem constant_system(double a, double b, double k, int n_segments);

// Dirichlet restriction to [a2, b2]; endpoints are inserted as grid nodes.
SLSystem restrict_system(const SLSystem& sys, double a2, double b2);

// Splits every segment into `factor` equal parts, interpolating v and sigma.
SLSystem refine_system(const SLSystem& sys, int factor);

struct EigenPair {
  int n = 0;               // 1-based index
  double lambda = 0.0;
  std::vector<double> phi; // node samples; phi(a) = phi(b) = 0; int phi^2 v sigma = 1
  int roots = 0;           // interior sign changes, equal to n - 1
};

// Discrete quotient of a trial function (node samples vanishing at the ends),
// with midpoint coefficients for the derivative term and trapezoidal weights
// for the rest. Eigenpairs from solve() reproduce their eigenvalue exactly.
double rayleigh_quotient(const std::vector<double>& w, const SLSystem& sys);

// First n_max eigenpairs of the weak problem
//   (v phi'/sigma)' = k^2 sigma phi / v - lambda v sigma phi,  phi(a)=phi(b)=0.
// Second-order differences on the (possibly nonuniform) grid with
// harmonic-mean v/sigma at segment midpoints and a lumped diagonal mass;
// eigenvalues by Sturm-sequence bisection, eigenvectors by shifted inverse
// iteration. Intervals of zero speed are collapsed first.
std::vector<EigenPair> solve(const SLSystem& sys, int n_max);

// Independent check path: refined grid, arithmetic-mean midpoint
// coefficients, and implicit-shift QL for the eigenvalues.
std::vector<EigenPair> dense_oracle_solve(const SLSystem& sys, int n_max, int refine);

// n-th Dirichlet eigenvalue of the straight annulus profile via the n-th
// positive root of J_k(s r2) Y_k(s r1) - J_k(s r1) Y_k(s r2). Requires r2 > 0.
double bessel_oracle(const Boundary& bd, double k, int n);

// Log-derivative samples Y = v phi' / (sigma phi) at interior nodes, masked
// near the roots of phi.
struct LogDerivativeTrace {
  std::vector<double> t, Y;
  std::vector<char> masked;
  double at(double s) const;  // linear interpolation between unmasked samples
};
LogDerivativeTrace log_derivative(const EigenPair& ep, const SLSystem& sys);

// Interior sign-change locations of phi, by linear interpolation.
std::vector<double> interior_roots(const EigenPair& ep, const SLSystem& sys);

struct SpectrumEntry {
  int k = 0, n = 0, multiplicity = 1;
  double lambda = 0.0;
};

// Surface spectrum: lambda_{k,n} for integer k in [0, K_max], n in [1, N_max],
// multiplicity 2 for k >= 1, sorted ascending by lambda.
std::vector<SpectrumEntry> assemble_spectrum(const Curve& c, const WeightProfile& V,
                                             const MetricProfile& metric,
                                             int K_max, int N_max);

// Error of the fine value in a second-order pair (grid N vs 2N).
inline double richardson_error(double coarse, double fine) {
  return std::abs(fine - coarse) / 3.0;
}
inline double richardson_extrapolate(double coarse, double fine) {
  return fine + (fine - coarse) / 3.0;
}

}  // namespace meridian
