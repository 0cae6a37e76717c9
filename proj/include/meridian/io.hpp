#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "meridian/verify.hpp"

namespace meridian {

// %.17g — enough digits to round-trip, fixed for byte-stable output.
std::string format_double(double x);

ProfileSpec read_profile_spec(const std::string& path);
Curve read_curve_json(const std::string& path, const Boundary& bd);

void write_curve_json(const Curve& c, std::ostream& os);
void write_curve_json(const Curve& c, const std::string& path);
void write_curve_csv(const Curve& c, std::ostream& os);  // header "t,F,G"
void write_curve_csv(const Curve& c, const std::string& path);

// header "k,n,multiplicity,lambda"
void write_eigen_table_csv(const std::vector<SpectrumEntry>& rows, std::ostream& os);

// header "t,phi"
void write_eigenfunction_csv(const SLSystem& sys, const EigenPair& ep,
                             std::ostream& os);

// Trace JSON plus one curve CSV per stage next to it; returns the JSON text.
std::string trace_json(const FlattenTrace& trace,
                       const std::vector<std::string>& curve_files);
void write_trace(const FlattenTrace& trace, const std::string& out_dir,
                 const std::string& stem);

std::string trial_report_json(const TrialReport& rep);
void write_campaign_reports(const CampaignResult& result, std::ostream& jsonl,
                            std::ostream& csv_summary);

}  // namespace meridian
