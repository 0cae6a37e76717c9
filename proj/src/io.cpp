#include "meridian/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace meridian {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::string json_number(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  return format_double(x);
}

nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad JSON in " + path + ": " + e.what());
  }
  return j;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write file: " + path);
  return os;
}

void write_array(std::ostream& os, const std::vector<double>& xs) {
  os << "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ",";
    os << format_double(xs[i]);
  }
  os << "]";
}

}  // namespace

ProfileSpec read_profile_spec(const std::string& path) {
  const nlohmann::json j = parse_file(path);
  ProfileSpec spec;
  try {
    spec.kind = j.at("kind").get<std::string>();
    spec.r1 = j.at("r1").get<double>();
    spec.r2 = j.at("r2").get<double>();
    if (j.contains("V_table"))
      for (const auto& row : j.at("V_table"))
        spec.V_table.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    if (j.contains("gyy_table"))
      for (const auto& row : j.at("gyy_table"))
        spec.gyy_table.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad profile spec " + path + ": " + e.what());
  }
  return spec;
}

Curve read_curve_json(const std::string& path, const Boundary& bd) {
  const nlohmann::json j = parse_file(path);
  Curve c;
  c.bd = bd;
  try {
    c.t = j.at("t").get<std::vector<double>>();
    c.F = j.at("F").get<std::vector<double>>();
    c.G = j.at("G").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad curve file " + path + ": " + e.what());
  }
  c.validate();
  return c;
}

void write_curve_json(const Curve& c, std::ostream& os) {
  os << "{\"t\":";
  write_array(os, c.t);
  os << ",\"F\":";
  write_array(os, c.F);
  os << ",\"G\":";
  write_array(os, c.G);
  os << "}\n";
}

void write_curve_json(const Curve& c, const std::string& path) {
  auto os = open_out(path);
  write_curve_json(c, os);
}

void write_curve_csv(const Curve& c, std::ostream& os) {
  os << "t,F,G\n";
  for (std::size_t i = 0; i < c.t.size(); ++i)
    os << format_double(c.t[i]) << "," << format_double(c.F[i]) << ","
       << format_double(c.G[i]) << "\n";
}

void write_curve_csv(const Curve& c, const std::string& path) {
  auto os = open_out(path);
  write_curve_csv(c, os);
}

void write_eigen_table_csv(const std::vector<SpectrumEntry>& rows, std::ostream& os) {
  os << "k,n,multiplicity,lambda\n";
  for (const auto& r : rows)
    os << r.k << "," << r.n << "," << r.multiplicity << ","
       << format_double(r.lambda) << "\n";
}

void write_eigenfunction_csv(const SLSystem& sys, const EigenPair& ep,
                             std::ostream& os) {
  os << "t,phi\n";
  for (std::size_t i = 0; i < sys.t.size(); ++i)
    os << format_double(sys.t[i]) << "," << format_double(ep.phi[i]) << "\n";
}

std::string trace_json(const FlattenTrace& trace,
                       const std::vector<std::string>& curve_files) {
  std::ostringstream os;
  os << "{\"k\":" << json_number(trace.k)
     << ",\"terminal\":" << (trace.terminal ? "true" : "false")
     << ",\"lambda_input\":" << json_number(trace.lambda_input)
     << ",\"lambda_omega\":" << json_number(trace.lambda_omega)
     << ",\"tol_eig\":" << json_number(trace.tol_eig);
  if (!trace.terminal) os << ",\"stalled_mu\":" << json_number(trace.stalled_mu);
  os << ",\"stages\":[";
  for (std::size_t i = 0; i < trace.stages.size(); ++i) {
    const StageRecord& st = trace.stages[i];
    if (i) os << ",";
    os << "{\"m\":" << st.m << ",\"mu\":" << json_number(st.mu)
       << ",\"y\":" << json_number(st.y) << ",\"P\":" << json_number(st.P)
       << ",\"lambda\":" << json_number(st.lambda) << ",\"curve_file\":\""
       << (i < curve_files.size() ? curve_files[i] : "") << "\"}";
  }
  os << "]}\n";
  return os.str();
}

void write_trace(const FlattenTrace& trace, const std::string& out_dir,
                 const std::string& stem) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> files;
  for (const auto& st : trace.stages) {
    const std::string name = stem + "_stage" + std::to_string(st.m) + ".csv";
    write_curve_csv(st.curve, out_dir + "/" + name);
    files.push_back(name);
  }
  auto os = open_out(out_dir + "/" + stem + ".json");
  os << trace_json(trace, files);
}

std::string trial_report_json(const TrialReport& rep) {
  std::ostringstream os;
  const char* verdict = rep.verdict == Verdict::pass ? "pass"
                        : rep.verdict == Verdict::fail ? "fail"
                                                       : "inconclusive";
  os << "{\"curve_id\":\"" << rep.curve_id << "\",\"k\":" << json_number(rep.k)
     << ",\"n\":" << rep.n << ",\"lambda_alpha\":" << json_number(rep.lambda_alpha)
     << ",\"lambda_omega\":" << json_number(rep.lambda_omega)
     << ",\"margin\":" << json_number(rep.margin)
     << ",\"error_estimate\":" << json_number(rep.error_estimate)
     << ",\"verdict\":\"" << verdict << "\"}";
  return os.str();
}

void write_campaign_reports(const CampaignResult& result, std::ostream& jsonl,
                            std::ostream& csv_summary) {
  for (const auto& rep : result.reports) jsonl << trial_report_json(rep) << "\n";
  csv_summary << "curve_id,k,n,lambda_alpha,lambda_omega,margin,error_estimate,verdict\n";
  for (const auto& rep : result.reports) {
    const char* verdict = rep.verdict == Verdict::pass ? "pass"
                          : rep.verdict == Verdict::fail ? "fail"
                                                         : "inconclusive";
    csv_summary << rep.curve_id << "," << format_double(rep.k) << "," << rep.n << ","
                << format_double(rep.lambda_alpha) << ","
                << format_double(rep.lambda_omega) << "," << format_double(rep.margin)
                << "," << format_double(rep.error_estimate) << "," << verdict << "\n";
  }
}

}  // namespace meridian
