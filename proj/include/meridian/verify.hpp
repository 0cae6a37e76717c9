#pragma once

#include <cstdint>
#include <string>

#include "meridian/pipeline.hpp"

namespace meridian {

struct RoughnessParams {
  double amp_F = 0.4;     // F perturbation as a fraction of (r1 - r2)/2
  double amp_G = 0.5;     // transverse walk amplitude as a fraction of r1 - r2
  int walk_steps = 512;
  int smooth_window = 21;
  int smooth_passes = 3;
};

// Seeded unit-speed generatrix: a smoothed random walk around the straight
// profile, pinned to (r1, 0) and F(L) = r2, strictly interior, deterministic
// per seed. Zero roughness reproduces the straight profile.
Curve random_generatrix(std::uint64_t seed, const Boundary& bd,
                        const MetricProfile& metric, const RoughnessParams& rough,
                        int n_segments);

enum class Verdict { pass, fail, inconclusive };

struct TrialReport {
  std::string curve_id;
  double k = 0.0;
  int n = 0;
  double lambda_alpha = 0.0;
  double lambda_omega = 0.0;
  double margin = 0.0;          // lambda_omega - lambda_alpha
  double error_estimate = 0.0;  // Richardson bound for both solves combined
  Verdict verdict = Verdict::inconclusive;
};

struct VerifyContext {
  WeightProfile V;
  MetricProfile metric;
  Boundary bd;
  int grid = 2048;
  double corrupt_lambda_omega = 1.0;  // test hook: scales the reference eigenvalue
};

// Solves lambda_{k,n} for the curve and for the straight profile on matched
// grids (and their midpoint refinements), and compares the margin against the
// combined Richardson error estimate.
TrialReport omega_dominance_check(const Curve& alpha, const std::string& curve_id,
                                  double k, int n, const VerifyContext& ctx);

struct SturmComparisonReport {
  bool applicable = false;  // lambda_{k,n}(chi0) >= lambda_{k,n}(omega) - tol
  double lambda_chi0 = 0.0;
  double lambda_omega = 0.0;
  double tau0 = 0.0;  // largest root of the stage-0 eigenfunction in [0, L)
  double z0 = 0.0;    // largest root of the straight-profile eigenfunction
  bool tau_le_z = true;
  double restriction_rel_err = 0.0;  // |lambda_{k,n}(chi0) - lambda_{k,1}(chi0|[tau0,L])|
  bool restriction_ok = false;
  double tol_eig = 0.0;
};

// Flattens alpha through stage 0 at level n and compares the largest interior
// eigenfunction roots; also verifies that restricting past the last root turns
// the n-th eigenvalue into the first one of the tail problem.
SturmComparisonReport sturm_comparison_check(const Curve& alpha, double k, int n,
                                             const VerifyContext& ctx);

struct MonotonicityReport {
  double lambda_full = 0.0;
  double lambda_sub = 0.0;
  double margin = 0.0;
  double error_estimate = 0.0;
  bool pass = false;
};

// Dirichlet eigenvalues strictly increase under restriction to a proper
// subinterval.
MonotonicityReport domain_monotonicity_check(const SLSystem& sys, int n,
                                             double a2, double b2);
MonotonicityReport domain_monotonicity_check(const Curve& c, const WeightProfile& V,
                                             const MetricProfile& metric, double k,
                                             int n, double a2, double b2);

struct LogDerivativeReport {
  int samples = 0;
  bool decreasing = true;
  bool lower_bound_ok = true;      // Y^2 > k^2 - lambda v^2 at every sample
  bool negative_past_mu0 = true;   // Y < 0 past V_omega^{-1}(mu_0)
  double max_riccati_residual = 0.0;
  bool riccati_ok = true;          // residual <= 1e-4 on the guarded interior
  bool root_bound_ok = true;       // mu_0(n) < V_omega(z) for roots z, n <= 3
  bool all() const {
    return decreasing && lower_bound_ok && negative_past_mu0 && riccati_ok &&
           root_bound_ok;
  }
};

// Samples the log-derivative of the straight profile's first eigenfunction and
// checks its monotonicity, sign, lower bound, and Riccati consistency
//   Y' = k^2/v - lambda v - Y^2/v,
// plus the root bound for levels n <= 3. Requires k > 0.
LogDerivativeReport log_derivative_check(const Boundary& bd, const WeightProfile& V,
                                         double k, int grid);

struct CampaignConfig {
  int trials = 100;
  std::vector<double> ks = {0, 1, 2, 3};
  std::vector<int> ns = {1, 2, 3};
  std::uint64_t seed_base = 1;
  RoughnessParams rough;
  int threads = 0;  // 0 = hardware concurrency
};

struct CampaignResult {
  std::vector<TrialReport> reports;
  int passes = 0, fails = 0, inconclusive = 0;
};

// Random-generatrix dominance campaign over trials x ks x ns, run as a
// parallel map with a serial aggregation.
CampaignResult run_campaign(const VerifyContext& ctx, const CampaignConfig& cfg);

}  // namespace meridian
