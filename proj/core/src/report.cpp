#include "ordsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace ordsim {

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

nlohmann::ordered_json json_number(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

}  // namespace

std::vector<ReportLine> to_lines(const BoundReport& report) {
  std::vector<ReportLine> lines;
  lines.reserve(report.rows.size());
  for (const BoundRow& row : report.rows) {
    ReportLine line;
    line.name = row.name;
    line.n = row.n;
    line.lambda = row.lambda;
    line.delta = row.delta;
    line.trials = row.trials;
    line.estimate = row.estimate;
    line.bound = row.bound;
    line.pass = row.pass;
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<ReportLine> summary_lines(const ProtocolConfig& config,
                                      std::uint64_t trials,
                                      const SimulationSummary& summary) {
  const std::string base(protocol_name(config.kind));
  const double cap = config.uses_cap() ? config.delta_cap
                                       : std::numeric_limits<double>::quiet_NaN();
  auto line = [&](const char* what, const Estimate& e) {
    ReportLine l;
    l.name = base + "/" + what;
    l.n = config.n;
    l.lambda = config.lambda.per_second();
    l.delta = cap;
    l.trials = trials;
    l.estimate = e;
    return l;
  };

  std::vector<ReportLine> lines;
  lines.push_back(line("correct-nonstrict", summary.correct_nonstrict));
  lines.push_back(line("correct-strict", summary.correct_strict));
  lines.push_back(line("response-time", summary.response_time));
  lines.push_back(line("messages", summary.messages));
  if (summary.delta_synchronized) {
    lines.push_back(line("delta-synchronized", *summary.delta_synchronized));
  }
  return lines;
}

std::string report_csv(const std::vector<ReportLine>& lines) {
  std::string out = "name,n,lambda,delta,trials,point,stderr,ci_low,ci_high,bound,verdict\n";
  for (const ReportLine& l : lines) {
    out += l.name;
    out += ',';
    out += std::to_string(l.n);
    out += ',';
    out += fmt(l.lambda);
    out += ',';
    out += fmt(l.delta);
    out += ',';
    out += std::to_string(l.trials);
    out += ',';
    out += fmt(l.estimate.point);
    out += ',';
    out += fmt(l.estimate.std_error);
    out += ',';
    out += fmt(l.estimate.ci_low);
    out += ',';
    out += fmt(l.estimate.ci_high);
    out += ',';
    out += l.bound ? fmt(*l.bound) : "";
    out += ',';
    if (l.pass) out += *l.pass ? "PASS" : "FAIL";
    out += '\n';
  }
  return out;
}

std::string report_json(const std::vector<ReportLine>& lines) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ReportLine& l : lines) {
    nlohmann::ordered_json row;
    row["name"] = l.name;
    row["n"] = l.n;
    row["lambda"] = json_number(l.lambda);
    row["delta"] = json_number(l.delta);
    row["trials"] = l.trials;
    row["point"] = json_number(l.estimate.point);
    row["stderr"] = json_number(l.estimate.std_error);
    row["ci_low"] = json_number(l.estimate.ci_low);
    row["ci_high"] = json_number(l.estimate.ci_high);
    row["bound"] = l.bound ? json_number(*l.bound) : nlohmann::ordered_json(nullptr);
    row["verdict"] =
        l.pass ? nlohmann::ordered_json(*l.pass ? "PASS" : "FAIL")
               : nlohmann::ordered_json(nullptr);
    arr.push_back(std::move(row));
  }
  return arr.dump(2) + "\n";
}

std::string cutoff_csv(const std::vector<CutoffPoint>& points) {
  std::string out = "one_minus_p,cutoff_n\n";
  for (const CutoffPoint& p : points) {
    out += fmt(p.one_minus_p);
    out += ',';
    out += std::to_string(p.cutoff);
    out += '\n';
  }
  return out;
}

std::string cutoff_json(const std::vector<CutoffPoint>& points) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CutoffPoint& p : points) {
    nlohmann::ordered_json row;
    row["one_minus_p"] = p.one_minus_p;
    row["cutoff_n"] = p.cutoff;
    arr.push_back(std::move(row));
  }
  return arr.dump(2) + "\n";
}

}  // namespace ordsim
