#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ordsim/experiments.hpp"

namespace ordsim {

// One emitted row. Plain estimates leave bound/pass empty; bound-comparison
// and sync rows fill them. delta is NaN when the row's config takes no cap;
// it serializes as an empty CSV cell (JSON null).
struct ReportLine {
  std::string name;
  int n = 0;
  double lambda = 0.0;
  double delta = 0.0;
  std::uint64_t trials = 0;
  Estimate estimate;
  std::optional<double> bound;
  std::optional<bool> pass;
};

std::vector<ReportLine> to_lines(const BoundReport& report);

// Rows for a plain simulation summary: correctness (both tie conventions),
// response time, message count, and the clock-agreement rate when present.
std::vector<ReportLine> summary_lines(const ProtocolConfig& config,
                                      std::uint64_t trials,
                                      const SimulationSummary& summary);

// CSV with the fixed header
//   name,n,lambda,delta,trials,point,stderr,ci_low,ci_high,bound,verdict
// Doubles use %.10g. An empty line list yields the header only. Output is
// byte-stable for identical inputs.
std::string report_csv(const std::vector<ReportLine>& lines);

// Same rows as a JSON array with identical field names; empty cells are null.
std::string report_json(const std::vector<ReportLine>& lines);

// The agents-per-confidence curve: columns one_minus_p,cutoff_n.
std::string cutoff_csv(const std::vector<CutoffPoint>& points);
std::string cutoff_json(const std::vector<CutoffPoint>& points);

}  // namespace ordsim
