#include "meridian/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

namespace meridian {

namespace {

// splitmix64; mapped to doubles explicitly so curves are identical across
// platforms and compilers.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed + 0x9E3779B97F4A7C15ull) {}
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform_pm1() { return static_cast<double>(next() >> 11) * 0x1p-52 - 1.0; }
};

void smooth_in_place(std::vector<double>& w, int window, int passes) {
  if (window < 2) return;
  const int half = window / 2;
  const int n = static_cast<int>(w.size());
  std::vector<double> tmp(w.size());
  for (int pass = 0; pass < passes; ++pass) {
    for (int i = 0; i < n; ++i) {
      const int lo = std::max(0, i - half);
      const int hi = std::min(n - 1, i + half);
      double s = 0.0;
      for (int j = lo; j <= hi; ++j) s += w[j];
      tmp[i] = s / (hi - lo + 1);
    }
    w.swap(tmp);
  }
}

double max_abs(const std::vector<double>& w) {
  double m = 0.0;
  for (double x : w) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

Curve random_generatrix(std::uint64_t seed, const Boundary& bd,
                        const MetricProfile& metric, const RoughnessParams& rough,
                        int n_segments) {
  if (n_segments < 2)
    throw ValidationError("random_generatrix: need at least 2 segments");
  const int M = std::max(8, rough.walk_steps);
  Rng rng(seed);

  std::vector<double> WF(M + 1, 0.0), WG(M + 1, 0.0);
  for (int i = 1; i <= M; ++i) {
    WF[i] = WF[i - 1] + rng.uniform_pm1();
    WG[i] = WG[i - 1] + rng.uniform_pm1();
  }
  smooth_in_place(WF, rough.smooth_window, rough.smooth_passes);
  smooth_in_place(WG, rough.smooth_window, rough.smooth_passes);
  // Pin the F walk at both ends and the G walk at the start.
  const double wf0 = WF[0], wfL = WF[M];
  for (int i = 0; i <= M; ++i) WF[i] -= wf0 + (wfL - wf0) * i / M;
  const double wg0 = WG[0];
  for (double& g : WG) g -= wg0;
  const double fscale = max_abs(WF), gscale = max_abs(WG);
  if (fscale > 0)
    for (double& f : WF) f /= fscale;
  if (gscale > 0)
    for (double& g : WG) g /= gscale;

  const double width = bd.width();
  double damp = 1.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<double> F(M + 1), G(M + 1);
    bool interior_ok = true;
    for (int i = 0; i <= M; ++i) {
      const double s = static_cast<double>(i) / M;
      const double envelope = std::sin(std::numbers::pi * s);
      F[i] = bd.r1 - width * s +
             damp * rough.amp_F * 0.5 * width * envelope * WF[i];
      G[i] = damp * rough.amp_G * width * WG[i];
      if (i > 0 && i < M && !(F[i] > bd.r2 && F[i] < bd.r1)) interior_ok = false;
    }
    F.front() = bd.r1;
    F.back() = bd.r2;
    G.front() = 0.0;
    if (!interior_ok) {
      damp *= 0.7;
      continue;
    }

    Curve c;
    c.bd = bd;
    c.t.resize(n_segments + 1);
    c.F.resize(n_segments + 1);
    c.G.resize(n_segments + 1);
    for (int i = 0; i <= n_segments; ++i) {
      const double s = static_cast<double>(i) / n_segments;
      const double x = s * M;
      const int j = std::min(M - 1, static_cast<int>(x));
      const double a = x - j;
      c.t[i] = s;
      c.F[i] = F[j] + a * (F[j + 1] - F[j]);
      c.G[i] = G[j] + a * (G[j + 1] - G[j]);
    }
    c.F.front() = bd.r1;
    c.F.back() = bd.r2;
    c.G.front() = 0.0;
    Curve out = arclength_reparametrize(c, metric);
    out.validate();
    return out;
  }
  throw SolverError("random_generatrix: constraint rejection after max retries");
}

namespace {

struct LambdaPair {
  double coarse = 0.0, fine = 0.0;
  double value() const { return fine; }
  double error() const { return richardson_error(coarse, fine); }
};

LambdaPair solve_curve_pair(const Curve& c, const WeightProfile& V,
                            const MetricProfile& metric, double k, int n) {
  LambdaPair lp;
  lp.coarse = solve(system_from_curve(c, V, metric, k), n)[n - 1].lambda;
  lp.fine =
      solve(system_from_curve(refine_midpoints(c), V, metric, k), n)[n - 1].lambda;
  return lp;
}

TrialReport dominance_from_pairs(const std::string& id, double k, int n,
                                 const LambdaPair& alpha, const LambdaPair& omega,
                                 double distinctness) {
  TrialReport rep;
  rep.curve_id = id;
  rep.k = k;
  rep.n = n;
  rep.lambda_alpha = alpha.value();
  rep.lambda_omega = omega.value();
  rep.margin = rep.lambda_omega - rep.lambda_alpha;
  rep.error_estimate = alpha.error() + omega.error();
  if (distinctness <= kTolJunction) {
    rep.verdict = Verdict::inconclusive;  // equality case sits outside the claim
  } else if (rep.margin > rep.error_estimate) {
    rep.verdict = Verdict::pass;
  } else if (rep.margin < -rep.error_estimate) {
    rep.verdict = Verdict::fail;
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

}  // namespace

TrialReport omega_dominance_check(const Curve& alpha, const std::string& curve_id,
                                  double k, int n, const VerifyContext& ctx) {
  const Curve omega = omega_curve(ctx.bd, static_cast<int>(alpha.segments()));
  const double dist = max_deviation_from_omega(alpha);
  LambdaPair la = solve_curve_pair(alpha, ctx.V, ctx.metric, k, n);
  LambdaPair lo = solve_curve_pair(omega, ctx.V, ctx.metric, k, n);
  lo.coarse *= ctx.corrupt_lambda_omega;
  lo.fine *= ctx.corrupt_lambda_omega;
  return dominance_from_pairs(curve_id, k, n, la, lo, dist);
}

SturmComparisonReport sturm_comparison_check(const Curve& alpha, double k, int n,
                                             const VerifyContext& ctx) {
  PipelineContext pctx{ctx.V, ctx.metric, ctx.bd, PipelineConfig{ctx.grid, 64, 10.0}};
  const Curve omega = omega_curve(ctx.bd, ctx.grid);
  const SLSystem om_sys = system_from_curve(omega, ctx.V, ctx.metric, k);
  const auto om_pairs = solve(om_sys, n);
  const EigenPair& Phi = om_pairs[n - 1];

  const Curve om_coarse = omega_curve(ctx.bd, std::max(2, ctx.grid / 2));
  const double lam_om_coarse =
      solve(system_from_curve(om_coarse, ctx.V, ctx.metric, k), n)[n - 1].lambda;

  SturmComparisonReport rep;
  rep.lambda_omega = Phi.lambda;
  rep.tol_eig = 10.0 * richardson_error(lam_om_coarse, Phi.lambda);

  const double mu0 = mu_zero(k, Phi.lambda);
  const Curve chi0 = flatten_stage0(alpha, k, mu0, pctx);
  const SLSystem chi_sys = system_from_curve(chi0, ctx.V, ctx.metric, k);
  const auto chi_pairs = solve(chi_sys, n);
  const EigenPair& phi = chi_pairs[n - 1];
  rep.lambda_chi0 = phi.lambda;

  auto largest_root = [](const EigenPair& ep, const SLSystem& sys) {
    const auto roots = interior_roots(ep, sys);
    return roots.empty() ? 0.0 : roots.back();
  };
  rep.z0 = largest_root(Phi, om_sys);
  rep.tau0 = largest_root(phi, chi_sys);

  rep.applicable = rep.lambda_chi0 >= rep.lambda_omega - rep.tol_eig;
  if (rep.applicable) {
    double max_h = 0.0;
    for (std::size_t i = 0; i + 1 < om_sys.t.size(); ++i)
      max_h = std::max(max_h, om_sys.t[i + 1] - om_sys.t[i]);
    rep.tau_le_z = rep.tau0 <= rep.z0 + 2.0 * max_h;
  }

  // Restriction identity holds for any system, hypothesis or not.
  if (rep.tau0 > 0.0) {
    const SLSystem tail = restrict_system(chi_sys, rep.tau0, chi_sys.b());
    const double lam_tail = solve(tail, 1)[0].lambda;
    rep.restriction_rel_err = std::abs(lam_tail - rep.lambda_chi0) / rep.lambda_chi0;
  } else {
    rep.restriction_rel_err = 0.0;
  }
  rep.restriction_ok = rep.restriction_rel_err <= rep.tol_eig / rep.lambda_omega;
  return rep;
}

MonotonicityReport domain_monotonicity_check(const SLSystem& sys, int n,
                                             double a2, double b2) {
  const double span = sys.b() - sys.a();
  if (!(a2 >= sys.a()) || !(b2 <= sys.b()) || !(a2 < b2) ||
      (a2 == sys.a() && b2 == sys.b()))
    throw DomainError("domain_monotonicity_check: need a proper subinterval");
  if (b2 - a2 < 8.0 * span / static_cast<double>(sys.segments()))
    throw DomainError("domain_monotonicity_check: subinterval below grid resolution");

  const SLSystem sub = restrict_system(sys, a2, b2);

  MonotonicityReport rep;
  rep.lambda_full = solve(sys, n)[n - 1].lambda;
  rep.lambda_sub = solve(sub, n)[n - 1].lambda;
  const double full_fine = solve(refine_system(sys, 2), n)[n - 1].lambda;
  const double sub_fine = solve(refine_system(sub, 2), n)[n - 1].lambda;
  rep.error_estimate = 3.0 * (richardson_error(rep.lambda_full, full_fine) +
                              richardson_error(rep.lambda_sub, sub_fine));
  rep.margin = rep.lambda_sub - rep.lambda_full;
  rep.pass = rep.margin > rep.error_estimate;
  return rep;
}

MonotonicityReport domain_monotonicity_check(const Curve& c, const WeightProfile& V,
                                             const MetricProfile& metric, double k,
                                             int n, double a2, double b2) {
  return domain_monotonicity_check(system_from_curve(c, V, metric, k), n, a2, b2);
}

LogDerivativeReport log_derivative_check(const Boundary& bd, const WeightProfile& V,
                                         double k, int grid) {
  if (!(k > 0.0))
    throw DomainError("log_derivative_check: requires k > 0");
  const MetricProfile metric = MetricProfile::euclidean();  // sigma = 1 either way
  const Curve omega = omega_curve(bd, grid);
  const SLSystem sys = system_from_curve(omega, V, metric, k);
  const auto pairs = solve(sys, 3);
  const EigenPair& Phi = pairs[0];
  const double lambda = Phi.lambda;
  const LogDerivativeTrace tr = log_derivative(Phi, sys);

  LogDerivativeReport rep;
  const double mu0 = mu_zero(k, lambda);
  // The sign statement past V_omega^{-1}(mu0) is vacuous when mu0 never rises
  // above V(r2) (the level set is empty).
  const bool mu0_interior = mu0 > V(bd.r2);
  const double t_mu0 = mu0_interior ? bd.r1 - invert_V(V, mu0, bd) : 0.0;

  double prevY = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    if (tr.masked[i]) continue;
    ++rep.samples;
    const double Y = tr.Y[i];
    const double v = sys.v[i + 1];
    if (!(Y < prevY)) rep.decreasing = false;
    if (!(Y * Y > k * k - lambda * v * v)) rep.lower_bound_ok = false;
    if (mu0_interior && tr.t[i] >= t_mu0 && !(Y < 0.0)) rep.negative_past_mu0 = false;
    prevY = Y;
  }

  // Riccati residual on the guarded interior: the divided difference of Y
  // against k^2/v - lambda v - Y^2/v, relative to the local scale. Nodes with
  // small phi are excluded because the difference quotient of a function with
  // a pole loses accuracy there.
  double phimax = 0.0;
  for (double p : Phi.phi) phimax = std::max(phimax, std::abs(p));
  const double guard = 0.1 * phimax;
  for (std::size_t i = 1; i + 1 < tr.t.size(); ++i) {
    if (tr.masked[i - 1] || tr.masked[i] || tr.masked[i + 1]) continue;
    if (std::abs(Phi.phi[i + 1]) < guard) continue;  // phi index = trace index + 1
    const double hl = tr.t[i] - tr.t[i - 1];
    const double hr = tr.t[i + 1] - tr.t[i];
    const double dY = (hl * hl * tr.Y[i + 1] - hr * hr * tr.Y[i - 1] -
                       (hl * hl - hr * hr) * tr.Y[i]) /
                      (hl * hr * (hl + hr));
    const double v = sys.v[i + 1];
    const double rhs = k * k / v - lambda * v - tr.Y[i] * tr.Y[i] / v;
    const double scale = std::max(std::abs(rhs), lambda * V(bd.r1));
    rep.max_riccati_residual =
        std::max(rep.max_riccati_residual, std::abs(dY - rhs) / scale);
  }
  rep.riccati_ok = rep.max_riccati_residual <= 1e-4;

  // Root bound for levels up to 3: mu_0(n) < V_omega(z) at every root z in [0, L).
  for (int n = 1; n <= 3; ++n) {
    const EigenPair& ep = pairs[n - 1];
    const double mu0n = mu_zero(k, ep.lambda);
    std::vector<double> roots = interior_roots(ep, sys);
    roots.push_back(0.0);
    for (double z : roots)
      if (!(mu0n < V(bd.r1 - z))) rep.root_bound_ok = false;
  }
  return rep;
}

CampaignResult run_campaign(const VerifyContext& ctx, const CampaignConfig& cfg) {
  struct Job {
    std::uint64_t seed;
    double k;
    int n;
  };
  std::vector<Job> jobs;
  for (int trial = 0; trial < cfg.trials; ++trial)
    for (double k : cfg.ks)
      for (int n : cfg.ns) jobs.push_back({cfg.seed_base + trial, k, n});

  // The straight-profile eigenvalues are shared by every trial at a given
  // (k, n); solve them once up front.
  struct OmegaEntry {
    double k;
    int n;
    LambdaPair lam;
  };
  std::vector<OmegaEntry> omegas;
  const Curve omega = omega_curve(ctx.bd, ctx.grid);
  for (double k : cfg.ks)
    for (int n : cfg.ns) {
      LambdaPair lp = solve_curve_pair(omega, ctx.V, ctx.metric, k, n);
      lp.coarse *= ctx.corrupt_lambda_omega;
      lp.fine *= ctx.corrupt_lambda_omega;
      omegas.push_back({k, n, lp});
    }
  auto omega_for = [&](double k, int n) {
    for (const auto& e : omegas)
      if (e.k == k && e.n == n) return e.lam;
    throw ConsistencyError("run_campaign: missing reference eigenvalue");
  };

  CampaignResult result;
  result.reports.resize(jobs.size());
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> aborted{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned n_threads =
      cfg.threads > 0 ? cfg.threads : std::max(1u, hw ? hw : 1u);

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= jobs.size() || aborted.load()) return;
      try {
        const Job& job = jobs[i];
        const Curve alpha =
            random_generatrix(job.seed, ctx.bd, ctx.metric, cfg.rough, ctx.grid);
        const LambdaPair la =
            solve_curve_pair(alpha, ctx.V, ctx.metric, job.k, job.n);
        const double dist = max_deviation_from_omega(alpha);
        result.reports[i] =
            dominance_from_pairs("random:seed=" + std::to_string(job.seed), job.k,
                                 job.n, la, omega_for(job.k, job.n), dist);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        aborted.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  for (const auto& rep : result.reports) {
    if (rep.verdict == Verdict::pass) ++result.passes;
    else if (rep.verdict == Verdict::fail) ++result.fails;
    else ++result.inconclusive;
  }
  return result;
}

}  // namespace meridian
