#include "meridian/pipeline.hpp"

#include <cmath>
#include <limits>

namespace meridian {

namespace {

double lambda_k1(const Curve& c, double k, const PipelineContext& ctx) {
  const SLSystem sys = system_from_curve(c, ctx.V, ctx.metric, k);
  return solve(sys, 1)[0].lambda;
}

}  // namespace

OmegaSolution solve_omega(double k, const PipelineContext& ctx) {
  OmegaSolution om;
  const Curve omega = omega_curve(ctx.bd, ctx.cfg.grid);
  om.sys = system_from_curve(omega, ctx.V, ctx.metric, k);
  auto pairs = solve(om.sys, 1);
  om.pair = std::move(pairs[0]);
  om.lambda = om.pair.lambda;

  const Curve coarse = omega_curve(ctx.bd, std::max(2, ctx.cfg.grid / 2));
  const double lam_coarse =
      solve(system_from_curve(coarse, ctx.V, ctx.metric, k), 1)[0].lambda;
  om.error_estimate = richardson_error(lam_coarse, om.lambda);
  om.tol_eig = ctx.cfg.tol_eig_factor * om.error_estimate;

  om.Y = log_derivative(om.pair, om.sys);
  return om;
}

double mu_zero(double k, double lambda_omega) {
  if (!(lambda_omega > 0.0))
    throw DomainError("mu_zero: lambda must be positive");
  if (!(k >= 0.0)) throw DomainError("mu_zero: k must be nonnegative");
  return k / std::sqrt(lambda_omega);
}

MuStep mu_step(double mu_prev, double k, double lambda_omega,
               const LogDerivativeTrace& Y, const WeightProfile& V,
               const Boundary& bd) {
  const double v_lo = V(bd.r2);
  const double slack = 1e-12 * std::max(1.0, V(bd.r1));
  if (mu_prev < v_lo - slack || mu_prev >= V(bd.r1))
    throw DomainError("mu_step: mu_prev outside [V(r2), V(r1))");

  MuStep st;
  if (mu_prev <= v_lo + slack) {
    // Fixed point of the recursion.
    st.y_prev = -std::numeric_limits<double>::infinity();
    st.mu_next = v_lo;
    return st;
  }
  const double t_query = bd.r1 - invert_V(V, mu_prev, bd);
  st.y_prev = Y.at(t_query);
  if (st.y_prev * st.y_prev > k * k) {
    st.mu_next = v_lo;
  } else {
    st.mu_next =
        std::max(v_lo, std::sqrt((k * k - st.y_prev * st.y_prev) / lambda_omega));
  }
  return st;
}

Curve flatten_stage0(const Curve& alpha, double k, double mu0,
                     const PipelineContext& ctx) {
  (void)k;
  const double P0 =
      mu0 < ctx.V(ctx.bd.r2) ? alpha.length() : first_crossing(alpha, ctx.V, mu0);
  const Curve beta = zero_transverse_before(alpha, P0);
  const Curve gamma = running_min_flatten(beta, P0);
  return arclength_reparametrize(gamma, ctx.metric);
}

Curve flatten_stage_m(const Curve& chi_prev, double mu_m, const PipelineContext& ctx) {
  const double P = first_crossing(chi_prev, ctx.V, mu_m);
  const Curve beta = zero_transverse_before(chi_prev, P);
  const Curve gamma = arclength_reparametrize(beta, ctx.metric);
  const Curve chi = splice_with_omega(gamma, ctx.V, mu_m, ctx.bd);
  const GammaReport rep =
      validate_gamma_membership(chi, ctx.V, ctx.metric, mu_m, ctx.bd);
  if (!rep.all())
    throw ConsistencyError(
        "flatten_stage_m: output left the admissible class (speed dev " +
        std::to_string(rep.max_speed_deviation) + ", prefix dev " +
        std::to_string(rep.max_prefix_deviation) + ")");
  return chi;
}

FlattenTrace run_pipeline(const Curve& alpha, double k, const PipelineContext& ctx) {
  alpha.validate();
  const OmegaSolution om = solve_omega(k, ctx);
  const double v_lo = ctx.V(ctx.bd.r2);

  FlattenTrace trace;
  trace.k = k;
  trace.lambda_omega = om.lambda;
  trace.tol_eig = om.tol_eig;
  trace.lambda_input = lambda_k1(alpha, k, ctx);

  const double mu0 = mu_zero(k, om.lambda);
  StageRecord rec0;
  rec0.m = 0;
  rec0.mu = mu0;
  rec0.y = std::numeric_limits<double>::quiet_NaN();
  rec0.P = mu0 < v_lo ? alpha.length() : first_crossing(alpha, ctx.V, mu0);
  rec0.curve = flatten_stage0(alpha, k, mu0, ctx);
  rec0.lambda = lambda_k1(rec0.curve, k, ctx);
  const GammaReport rep0 = validate_gamma_membership(
      rec0.curve, ctx.V, ctx.metric, std::max(mu0, v_lo), ctx.bd);
  if (!rep0.all())
    throw ConsistencyError("run_pipeline: stage-0 output left the admissible class");
  trace.stages.push_back(std::move(rec0));

  const double slack = 1e-12 * std::max(1.0, ctx.V(ctx.bd.r1));
  double mu_prev = mu0;
  if (mu0 <= v_lo + slack) {
    trace.terminal = true;
    return trace;
  }

  for (int m = 1; m <= ctx.cfg.stage_cap; ++m) {
    const MuStep st = mu_step(mu_prev, k, om.lambda, om.Y, ctx.V, ctx.bd);
    if (st.mu_next >= mu_prev - slack && mu_prev > v_lo + slack)
      throw ConsistencyError("run_pipeline: mu recursion failed to decrease at m=" +
                             std::to_string(m));
    StageRecord rec;
    rec.m = m;
    rec.mu = st.mu_next;
    rec.y = st.y_prev;
    rec.P = first_crossing(trace.stages.back().curve, ctx.V, st.mu_next);
    rec.curve = flatten_stage_m(trace.stages.back().curve, st.mu_next, ctx);
    rec.lambda = lambda_k1(rec.curve, k, ctx);
    trace.stages.push_back(std::move(rec));

    mu_prev = st.mu_next;
    if (mu_prev <= v_lo + slack) {
      trace.terminal = true;
      return trace;
    }
  }
  trace.terminal = false;
  trace.stalled_mu = mu_prev;
  return trace;
}

double prefix_sign_excess(const EigenPair& ep, const SLSystem& sys, double P) {
  if (ep.phi.size() != sys.t.size())
    throw ValidationError("prefix_sign_excess: eigenpair does not match grid");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < sys.t.size() && sys.t[i] < P; ++i) {
    const double hl = sys.t[i] - sys.t[i - 1];
    const double hr = sys.t[i + 1] - sys.t[i];
    const double dphi = (hl * hl * ep.phi[i + 1] - hr * hr * ep.phi[i - 1] -
                         (hl * hl - hr * hr) * ep.phi[i]) /
                        (hl * hr * (hl + hr));
    const double v = sys.v[i], s = sys.sigma[i], k = sys.k, phi = ep.phi[i];
    const double q = -dphi * dphi * v * v / (s * s) + k * k * phi * phi -
                     ep.lambda * phi * phi * v * v;
    worst = std::max(worst, q);
  }
  return worst;
}

}  // namespace meridian
