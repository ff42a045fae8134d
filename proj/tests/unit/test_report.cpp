#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "ordsim/report.hpp"

using namespace ordsim;

namespace {

ReportLine sample_line() {
  ReportLine l;
  l.name = "core/correctness";
  l.n = 2;
  l.lambda = 1.0;
  l.delta = 0.6931471806;
  l.trials = 1000;
  l.estimate = Estimate{0.625, 0.0153093108923948, 0.5945696046, 0.6544737058, 1000};
  l.bound = 0.25;
  l.pass = true;
  return l;
}

}  // namespace

TEST_CASE("empty report is the bare header") {
  CHECK(report_csv({}) == "name,n,lambda,delta,trials,point,stderr,ci_low,ci_high,bound,verdict\n");
}

TEST_CASE("csv rows carry every column and stay byte-stable") {
  const std::vector<ReportLine> lines{sample_line()};
  const std::string a = report_csv(lines);
  const std::string b = report_csv(lines);
  CHECK(a == b);
  CHECK(a ==
        "name,n,lambda,delta,trials,point,stderr,ci_low,ci_high,bound,verdict\n"
        "core/correctness,2,1,0.6931471806,1000,0.625,0.01530931089,0.5945696046,"
        "0.6544737058,0.25,PASS\n");
}

TEST_CASE("missing cap and missing verdict serialize as empty cells") {
  ReportLine l = sample_line();
  l.name = "message-chain/response-time";
  l.delta = std::numeric_limits<double>::quiet_NaN();
  l.bound.reset();
  l.pass.reset();
  l.estimate = Estimate{3.0, 0.0, 3.0, 3.0, 1};
  l.trials = 1;
  l.n = 3;
  const std::string csv = report_csv({l});
  CHECK(csv.find("message-chain/response-time,3,1,,1,3,0,3,3,,\n") != std::string::npos);

  ReportLine fail = sample_line();
  fail.pass = false;
  CHECK(report_csv({fail}).find(",FAIL\n") != std::string::npos);
}

TEST_CASE("json report mirrors the csv fields with nulls for empties") {
  ReportLine l = sample_line();
  l.delta = std::numeric_limits<double>::quiet_NaN();
  l.pass.reset();
  const std::string text = report_json({l});
  CHECK(text.back() == '\n');
  const auto arr = nlohmann::json::parse(text);
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 1);
  const auto& row = arr[0];
  CHECK(row.at("name") == "core/correctness");
  CHECK(row.at("n") == 2);
  CHECK(row.at("lambda") == 1.0);
  CHECK(row.at("delta").is_null());
  CHECK(row.at("trials") == 1000);
  CHECK(row.at("point") == 0.625);
  CHECK(row.at("stderr").get<double>() == doctest::Approx(0.0153093108923948));
  CHECK(row.at("ci_low").get<double>() == doctest::Approx(0.5945696046));
  CHECK(row.at("ci_high").get<double>() == doctest::Approx(0.6544737058));
  CHECK(row.at("bound") == 0.25);
  CHECK(row.at("verdict").is_null());

  ReportLine passed = sample_line();
  const auto arr2 = nlohmann::json::parse(report_json({passed}));
  CHECK(arr2[0].at("verdict") == "PASS");
}

TEST_CASE("cutoff serialization") {
  const std::vector<CutoffPoint> pts{{1e-9, 24}};
  CHECK(cutoff_csv(pts) == "one_minus_p,cutoff_n\n1e-09,24\n");
  const auto arr = nlohmann::json::parse(cutoff_json(pts));
  REQUIRE(arr.size() == 1);
  CHECK(arr[0].at("one_minus_p") == 1e-9);
  CHECK(arr[0].at("cutoff_n") == 24);
}

TEST_CASE("summary rows are named per estimator") {
  ProtocolConfig cfg;
  cfg.kind = ProtocolKind::MessageChain;
  cfg.n = 3;
  SimulationSummary s;
  s.correct_nonstrict = Estimate{1.0, 0.0, 0.996, 1.0, 1000};
  s.correct_strict = s.correct_nonstrict;
  s.response_time = Estimate{3.0, 0.05, 2.9, 3.1, 1000};
  s.messages = Estimate{3.0, 0.0, 3.0, 3.0, 1000};

  auto lines = summary_lines(cfg, 1000, s);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].name == "message-chain/correct-nonstrict");
  CHECK(lines[1].name == "message-chain/correct-strict");
  CHECK(lines[2].name == "message-chain/response-time");
  CHECK(lines[3].name == "message-chain/messages");
  CHECK(std::isnan(lines[0].delta));  // no cap on the chain
  CHECK(!lines[0].bound);
  CHECK(!lines[0].pass);

  cfg.kind = ProtocolKind::PaCore;
  cfg.delta_cap = 2.0;
  s.delta_synchronized = Estimate{0.99, 0.003, 0.98, 0.995, 1000};
  lines = summary_lines(cfg, 1000, s);
  REQUIRE(lines.size() == 5);
  CHECK(lines[4].name == "pacore/delta-synchronized");
  CHECK(lines[0].delta == 2.0);
}

TEST_CASE("bound report converts row for row") {
  BoundRow row;
  row.name = "core/response-time";
  row.n = 9;
  row.lambda = 2.0;
  row.delta = 1.5;
  row.trials = 500;
  row.estimate = Estimate{3.0, 0.1, 2.8, 3.2, 500};
  row.bound = 3.5;
  row.rule = BoundRule::UpperMean;
  row.pass = true;
  BoundReport rep;
  rep.rows.push_back(row);

  const auto lines = to_lines(rep);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].name == row.name);
  CHECK(lines[0].n == 9);
  CHECK(lines[0].delta == 1.5);
  REQUIRE(lines[0].bound);
  CHECK(*lines[0].bound == 3.5);
  REQUIRE(lines[0].pass);
  CHECK(*lines[0].pass);
}
