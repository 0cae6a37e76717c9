// meridian — weighted Dirichlet eigenvalues of generatrix curves, curve
// flattening, and eigenvalue-dominance verification campaigns.
//
// Subcommands:
//   eig       eigenvalue of a curve under a profile, with an error estimate
//   spectrum  merged (k, n) eigenvalue table for a curve
//   flatten   run the flattening pipeline and dump the stage trace
//   verify    random-generatrix dominance campaign
//   export    materialize a built-in curve family to JSON/CSV

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "meridian/io.hpp"

using namespace meridian;

namespace {

struct CommonOpts {
  std::string profile = "annulus";
  double r1 = 2.0;
  double r2 = -1.0;  // default depends on the profile
  int grid = 2048;
};

void add_common(CLI::App* cmd, CommonOpts& opt) {
  cmd->add_option("--profile", opt.profile,
                  "annulus | helicoid | path to a profile spec JSON");
  cmd->add_option("--r1", opt.r1, "outer radius (built-in profiles)");
  cmd->add_option("--r2", opt.r2, "inner radius (built-in profiles)");
  cmd->add_option("--grid", opt.grid, "grid segments (env MERIDIAN_GRID overrides the default)");
}

ProfileTriple resolve_profile(const CommonOpts& opt) {
  if (opt.profile == "annulus" || opt.profile == "helicoid") {
    ProfileSpec spec;
    spec.kind = opt.profile;
    spec.r1 = opt.r1;
    spec.r2 = opt.r2 >= 0.0 ? opt.r2 : (opt.profile == "annulus" ? 1.0 : 0.0);
    return make_profile(spec);
  }
  return make_profile(read_profile_spec(opt.profile));
}

int default_grid() {
  if (const char* env = std::getenv("MERIDIAN_GRID")) {
    const int g = std::atoi(env);
    if (g >= 4) return g;
  }
  return 2048;
}

struct CurveOpts {
  std::string curve = "omega";
  double amplitude = 0.5;
  double frequency = 3.0;
  std::uint64_t seed = 1;
};

void add_curve(CLI::App* cmd, CurveOpts& opt) {
  cmd->add_option("--curve", opt.curve,
                  "omega | bulge | wiggle | random | path to a curve JSON");
  cmd->add_option("--amplitude", opt.amplitude, "bulge/wiggle amplitude in (0, 1]");
  cmd->add_option("--frequency", opt.frequency, "wiggle frequency (half-periods)");
  cmd->add_option("--seed", opt.seed, "seed for the random family");
}

// A circular-arc generatrix through (r1, 0) and (r2, 0) with apex height
// a * (r1 - r2) / 2, sampled and reparametrized to unit speed.
Curve bulge_curve(const Boundary& bd, double a, const MetricProfile& metric, int n) {
  if (!(a > 0.0) || a > 1.0)
    throw ValidationError("bulge: amplitude must lie in (0, 1]");
  const double half = 0.5 * bd.width();
  const double h = a * half;
  const double R = (half * half + h * h) / (2.0 * h);  // circumradius
  const double cx = 0.5 * (bd.r1 + bd.r2);
  const double cy = h - R;
  const double th1 = std::atan2(-cy, bd.r1 - cx);
  const double th2 = std::atan2(-cy, bd.r2 - cx);
  Curve c;
  c.bd = bd;
  for (int i = 0; i <= n; ++i) {
    const double th = th1 + (th2 - th1) * i / n;
    c.t.push_back(static_cast<double>(i) / n);
    c.F.push_back(cx + R * std::cos(th));
    c.G.push_back(cy + R * std::sin(th));
  }
  c.F.front() = bd.r1;
  c.G.front() = 0.0;
  c.F.back() = bd.r2;
  return arclength_reparametrize(c, metric);
}

Curve wiggle_curve(const Boundary& bd, double a, double freq,
                   const MetricProfile& metric, int n) {
  if (!(a > 0.0) || a * std::numbers::pi * freq >= 1.0)
    throw ValidationError("wiggle: need 0 < amplitude * pi * frequency < 1");
  Curve c;
  c.bd = bd;
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    c.t.push_back(s);
    c.F.push_back(bd.r1 - bd.width() * s +
                  a * bd.width() * std::sin(std::numbers::pi * freq * s));
    c.G.push_back(0.0);
  }
  c.F.front() = bd.r1;
  c.F.back() = bd.r2;
  c.validate();
  return arclength_reparametrize(c, metric);
}

Curve resolve_curve(const CurveOpts& opt, const ProfileTriple& tri, int grid) {
  if (opt.curve == "omega") return omega_curve(tri.bd, grid);
  if (opt.curve == "bulge") return bulge_curve(tri.bd, opt.amplitude, tri.metric, grid);
  if (opt.curve == "wiggle")
    return wiggle_curve(tri.bd, opt.amplitude, opt.frequency, tri.metric, grid);
  if (opt.curve == "random")
    return random_generatrix(opt.seed, tri.bd, tri.metric, RoughnessParams{}, grid);
  Curve c = read_curve_json(opt.curve, tri.bd);
  // solve on arc length; eigenvalues are unchanged by the reparametrization
  return arclength_reparametrize(c, tri.metric);
}

int cmd_eig(const CommonOpts& common, const CurveOpts& curve_opt, double k, int n,
            const std::string& out, const std::string& phi_out) {
  const ProfileTriple tri = resolve_profile(common);
  const Curve c = resolve_curve(curve_opt, tri, common.grid);
  const SLSystem sys = system_from_curve(c, tri.V, tri.metric, k);
  const auto pairs = solve(sys, n);
  const double lam = pairs[n - 1].lambda;
  const double lam_fine =
      solve(system_from_curve(refine_midpoints(c), tri.V, tri.metric, k), n)[n - 1]
          .lambda;
  const double err = richardson_error(lam, lam_fine) * 4.0;  // error at the working grid

  std::cout << "lambda(k=" << format_double(k) << ",n=" << n
            << ") = " << format_double(lam) << " +/- " << format_double(err) << "\n";
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw ValidationError("cannot write " + out);
    os << "{\"k\":" << format_double(k) << ",\"n\":" << n
       << ",\"lambda\":" << format_double(lam)
       << ",\"error_estimate\":" << format_double(err) << "}\n";
  }
  if (!phi_out.empty()) {
    std::ofstream os(phi_out);
    if (!os) throw ValidationError("cannot write " + phi_out);
    write_eigenfunction_csv(sys, pairs[n - 1], os);
  }
  return 0;
}

int cmd_spectrum(const CommonOpts& common, const CurveOpts& curve_opt, int K_max,
                 int N_max, const std::string& out) {
  const ProfileTriple tri = resolve_profile(common);
  const Curve c = resolve_curve(curve_opt, tri, common.grid);
  const auto table = assemble_spectrum(c, tri.V, tri.metric, K_max, N_max);
  if (out.empty()) {
    write_eigen_table_csv(table, std::cout);
  } else {
    std::ofstream os(out);
    if (!os) throw ValidationError("cannot write " + out);
    write_eigen_table_csv(table, os);
  }
  return 0;
}

int cmd_flatten(const CommonOpts& common, const CurveOpts& curve_opt, double k,
                int stage_cap, const std::string& out_dir, const std::string& stem) {
  const ProfileTriple tri = resolve_profile(common);
  const Curve c = resolve_curve(curve_opt, tri, common.grid);
  PipelineContext ctx{tri.V, tri.metric, tri.bd,
                      PipelineConfig{common.grid, stage_cap, 10.0}};
  const FlattenTrace trace = run_pipeline(c, k, ctx);
  write_trace(trace, out_dir, stem);
  std::cout << "stages=" << trace.stages.size()
            << " terminal=" << (trace.terminal ? "true" : "false")
            << " lambda_omega=" << format_double(trace.lambda_omega) << "\n";
  for (const auto& st : trace.stages)
    std::cout << "  m=" << st.m << " mu=" << format_double(st.mu)
              << " lambda=" << format_double(st.lambda) << "\n";
  if (!trace.terminal) {
    std::cerr << "flatten: stage cap exceeded; mu stalled at "
              << format_double(trace.stalled_mu) << "\n";
    return 3;
  }
  return 0;
}

int cmd_verify(const CommonOpts& common, int trials, std::uint64_t seed,
               int threads, double corrupt, const std::string& out_dir) {
  const ProfileTriple tri = resolve_profile(common);
  VerifyContext ctx{tri.V, tri.metric, tri.bd, common.grid, corrupt};
  CampaignConfig cfg;
  cfg.trials = trials;
  cfg.seed_base = seed;
  cfg.threads = threads;
  const CampaignResult result = run_campaign(ctx, cfg);

  std::ofstream jsonl(out_dir + "/reports.jsonl");
  std::ofstream csv(out_dir + "/summary.csv");
  if (!jsonl || !csv) throw ValidationError("cannot write into " + out_dir);
  write_campaign_reports(result, jsonl, csv);
  std::cout << "trials=" << result.reports.size() << " pass=" << result.passes
            << " fail=" << result.fails << " inconclusive=" << result.inconclusive
            << "\n";
  return result.fails == 0 ? 0 : 1;
}

int cmd_export(const CommonOpts& common, const CurveOpts& curve_opt,
               const std::string& out, const std::string& format) {
  const ProfileTriple tri = resolve_profile(common);
  const Curve c = resolve_curve(curve_opt, tri, common.grid);
  if (format == "json")
    write_curve_json(c, out);
  else if (format == "csv")
    write_curve_csv(c, out);
  else
    throw ValidationError("export: format must be json or csv");
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted eigenvalues of generatrix curves in the half-plane"};
  app.require_subcommand(1);

  CommonOpts common;
  common.grid = default_grid();
  CurveOpts curve_opt;
  double k = 0.0;
  int n = 1, n_max = 3, K_max = 3;
  int stage_cap = 64, trials = 100, threads = 0;
  std::uint64_t seed = 1;
  double corrupt = 1.0;
  std::string out, phi_out, out_dir = ".", stem = "trace", format = "json";

  CLI::App* eig = app.add_subcommand("eig", "eigenvalue of a curve");
  add_common(eig, common);
  add_curve(eig, curve_opt);
  eig->add_option("--k", k, "angular parameter (real, >= 0)");
  eig->add_option("--n", n, "eigenvalue index (1-based)");
  eig->add_option("--out", out, "write a JSON result here");
  eig->add_option("--phi-out", phi_out, "write the eigenfunction CSV here");

  CLI::App* spectrum = app.add_subcommand("spectrum", "merged eigenvalue table");
  add_common(spectrum, common);
  add_curve(spectrum, curve_opt);
  spectrum->add_option("--K-max", K_max, "largest angular mode");
  spectrum->add_option("--n-max", n_max, "eigenvalues per mode");
  spectrum->add_option("--out", out, "write the CSV here (default stdout)");

  CLI::App* flatten = app.add_subcommand("flatten", "run the flattening pipeline");
  add_common(flatten, common);
  add_curve(flatten, curve_opt);
  flatten->add_option("--k", k, "angular parameter");
  flatten->add_option("--stage-cap", stage_cap, "maximum stage count");
  flatten->add_option("--out-dir", out_dir, "directory for trace files");
  flatten->add_option("--stem", stem, "file stem for trace files");

  CLI::App* verify = app.add_subcommand("verify", "dominance campaign");
  add_common(verify, common);
  verify->add_option("--trials", trials, "random curves per (k, n) cell");
  verify->add_option("--seed", seed, "base seed");
  verify->add_option("--threads", threads, "worker threads (0 = hardware)");
  verify->add_option("--corrupt-omega", corrupt,
                     "test hook: scale the reference eigenvalue")
      ->group("");  // hidden
  verify->add_option("--out-dir", out_dir, "directory for report files");

  CLI::App* exp = app.add_subcommand("export", "write a built-in curve to a file");
  add_common(exp, common);
  add_curve(exp, curve_opt);
  exp->add_option("--out", out, "output path")->required();
  exp->add_option("--format", format, "json | csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eig->parsed()) return cmd_eig(common, curve_opt, k, n, out, phi_out);
    if (spectrum->parsed()) return cmd_spectrum(common, curve_opt, K_max, n_max, out);
    if (flatten->parsed())
      return cmd_flatten(common, curve_opt, k, stage_cap, out_dir, stem);
    if (verify->parsed())
      return cmd_verify(common, trials, seed, threads, corrupt, out_dir);
    if (exp->parsed()) return cmd_export(common, curve_opt, out, format);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
