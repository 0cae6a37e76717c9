#pragma once

#include "meridian/sturm.hpp"

namespace meridian {

struct PipelineConfig {
  int grid = 2048;               // resolution of the straight-profile solves
  int stage_cap = 64;
  double tol_eig_factor = 10.0;  // tol_eig = factor * Richardson error estimate
};

struct PipelineContext {
  WeightProfile V;
  MetricProfile metric;
  Boundary bd;
  PipelineConfig cfg;
};

// First eigenpair of the straight profile, solved once and reused: its
// eigenvalue seeds the mu recursion, its log-derivative supplies the y values,
// and one Richardson step calibrates tol_eig.
struct OmegaSolution {
  double lambda = 0.0;
  double error_estimate = 0.0;
  double tol_eig = 0.0;
  EigenPair pair;
  SLSystem sys;
  LogDerivativeTrace Y;
};
OmegaSolution solve_omega(double k, const PipelineContext& ctx);

// mu_0 = k / sqrt(lambda_{k,1}(omega)).
double mu_zero(double k, double lambda_omega);

// One step of the mu recursion:
//   y = Y(V_omega^{-1}(mu_prev))           (-inf at the V(r2) fixed point)
//   mu_next = V(r2)                         when y^2 > k^2,
//             max(V(r2), sqrt((k^2 - y^2) / lambda_omega)) otherwise.
struct MuStep {
  double y_prev = 0.0;
  double mu_next = 0.0;
};
MuStep mu_step(double mu_prev, double k, double lambda_omega,
               const LogDerivativeTrace& Y, const WeightProfile& V,
               const Boundary& bd);

// Stage 0: zero the transverse motion before the first V-crossing of mu0,
// flatten F by its running minimum there, and reparametrize to unit speed.
Curve flatten_stage0(const Curve& alpha, double k, double mu0,
                     const PipelineContext& ctx);

// Stage m >= 1: zero the transverse motion before the first V-crossing of
// mu_m, reparametrize, and splice the straight prefix in.
Curve flatten_stage_m(const Curve& chi_prev, double mu_m, const PipelineContext& ctx);

struct StageRecord {
  int m = 0;
  double mu = 0.0;
  double y = 0.0;      // NaN at stage 0, -inf at the V(r2) fixed point
  double P = 0.0;      // crossing parameter consumed by the stage
  double lambda = 0.0; // lambda_{k,1} of the stage curve
  Curve curve;
};

struct FlattenTrace {
  double k = 0.0;
  bool terminal = false;
  double lambda_input = 0.0;
  double lambda_omega = 0.0;
  double tol_eig = 0.0;
  double stalled_mu = 0.0;  // meaningful when !terminal
  std::vector<StageRecord> stages;
};

// Runs stage 0 and then the mu recursion until mu reaches V(r2) (the final
// curve is the straight profile) or the stage cap trips (terminal = false,
// stalled_mu records where the recursion stood).
FlattenTrace run_pipeline(const Curve& alpha, double k, const PipelineContext& ctx);

// Sign condition on the zeroed prefix [0, P): for a first eigenpair whose
// eigenvalue is at least lambda_{k,1}(omega),
//   -|phi'|^2 v^2 / sigma^2 + k^2 phi^2 - lambda phi^2 v^2 < 0
// at every sampled point. Returns the worst (largest) sampled value.
double prefix_sign_excess(const EigenPair& ep, const SLSystem& sys, double P);

}  // namespace meridian
