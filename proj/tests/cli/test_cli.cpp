#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

// Runs the installed binary through the shell so env-var prefixes and
// redirections behave exactly as they would for a user.
CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd = env_prefix + "\"" ORDSIM_CLI_PATH "\" " + args;
  CmdResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("analytic prints the full-precision value") {
  const CmdResult r = run_cli("analytic --formula core-delta --n 99 --p 0.999");
  CHECK(r.exit_code == 0);
  CHECK(r.out.substr(0, 14) == "11.50237997368");
  CHECK(r.out.back() == '\n');

  const CmdResult psi = run_cli("analytic --formula psi --n 114");
  CHECK(psi.exit_code == 0);
  CHECK(psi.out == "0\n");
}

TEST_CASE("cutoff emits the curve in complement form") {
  const CmdResult r = run_cli("cutoff --one-minus-p 1e-9");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "one_minus_p,cutoff_n\n1e-09,24\n");

  const CmdResult both = run_cli("cutoff --p 0.5 --one-minus-p 1e-3");
  CHECK(both.exit_code == 0);
  CHECK(both.out.find("0.5,1\n") != std::string::npos);
  CHECK(both.out.find("0.001,10\n") != std::string::npos);
}

TEST_CASE("single-run trace bytes are exact") {
  const CmdResult r = run_cli(
      "simulate --protocol message-chain --n 3 --constant-delay 1 --trials 1 --trace");
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "1.000000000\t1\tact\n2.000000000\t2\tchain\n3.000000000\t3\tchain\n");
}

TEST_CASE("summary csv has the pinned schema") {
  const CmdResult r =
      run_cli("simulate --protocol message-chain --n 3 --constant-delay 1 --trials 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("name,n,lambda,delta,trials,point,stderr,ci_low,ci_high,bound,verdict\n",
                    0) == 0);
  CHECK(r.out.find("message-chain/response-time,3,1,,1,3,0,3,3,,\n") != std::string::npos);
  CHECK(r.out.find("message-chain/messages,3,1,,1,3,0,3,3,,\n") != std::string::npos);
}

TEST_CASE("usage errors exit with status 1") {
  CHECK(run_cli("simulate --protocol bogus --trials 100 2>/dev/null").exit_code == 1);
  CHECK(run_cli("simulate --trials 100 2>/dev/null").exit_code == 1);
  CHECK(run_cli("simulate --protocol message-chain --delta 1 --trials 100 2>/dev/null")
            .exit_code == 1);
  CHECK(run_cli("simulate --protocol core --delta 1 --p 0.9 --trials 100 2>/dev/null")
            .exit_code == 1);
  CHECK(run_cli("simulate --protocol core --p 1.5 --trials 100 2>/dev/null").exit_code ==
        1);
  CHECK(run_cli("simulate --protocol core --delta 1 --trials 2 --trace 2>/dev/null")
            .exit_code == 1);
  CHECK(run_cli("sync-experiment --n 1 2>/dev/null").exit_code == 1);

  const CmdResult bad_env = run_cli("simulate --protocol core --delta 1 --trials 100 2>&1",
                                    "ORDSIM_SEED=abc ");
  CHECK(bad_env.exit_code == 1);
  CHECK(bad_env.out.find("ORDSIM_SEED") != std::string::npos);
}

TEST_CASE("a failed bound comparison exits with status 2") {
  const CmdResult r = run_cli(
      "compare --protocol message-chain --n 2 --constant-delay 0.001 --trials 200");
  CHECK(r.exit_code == 2);
  CHECK(r.out.find(",FAIL\n") != std::string::npos);

  const CmdResult ok = run_cli("compare --protocol message-chain --n 2 --trials 200");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
}

TEST_CASE("seed resolution: flag beats environment beats default") {
  const std::string args = "simulate --protocol core --n 4 --delta 1.5 --trials 500";
  const CmdResult via_flag = run_cli(args + " --seed 99");
  const CmdResult via_env = run_cli(args, "ORDSIM_SEED=99 ");
  const CmdResult flag_wins = run_cli(args + " --seed 99", "ORDSIM_SEED=123456 ");
  const CmdResult defaulted = run_cli(args);
  CHECK(via_flag.exit_code == 0);
  CHECK(via_flag.out == via_env.out);
  CHECK(via_flag.out == flag_wins.out);
  CHECK(via_flag.out != defaulted.out);  // 99 vs the built-in 1729
}

TEST_CASE("output goes to a file when asked, errors when it cannot") {
  const std::string path = "/tmp/ordsim_cli_test_out.csv";
  std::remove(path.c_str());
  const std::string args = "cutoff --one-minus-p 1e-6 --output " + path;
  const CmdResult r = run_cli(args);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(path) == "one_minus_p,cutoff_n\n1e-06,17\n");
  std::remove(path.c_str());

  const CmdResult bad =
      run_cli("cutoff --one-minus-p 1e-6 --output /nonexistent-dir/x.csv 2>&1");
  CHECK(bad.exit_code == 1);
  CHECK(bad.out.find("cannot write") != std::string::npos);
}

TEST_CASE("json output parses and matches the csv schema names") {
  const CmdResult r = run_cli(
      "simulate --protocol core --n 4 --delta 1.2 --trials 200 --format json");
  CHECK(r.exit_code == 0);
  const auto arr = nlohmann::json::parse(r.out);
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 4);
  CHECK(arr[0].at("name") == "core/correct-nonstrict");
  CHECK(arr[0].at("delta") == 1.2);
  CHECK(arr[0].contains("stderr"));
  CHECK(arr[0].at("verdict").is_null());
  CHECK(arr[0].at("trials") == 200);
}

TEST_CASE("dumped run records are one JSON object per line") {
  const CmdResult r = run_cli(
      "simulate --protocol core-hybrid --n 3 --delta 1 --trials 5 --dump-runs");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("protocol") == "core-hybrid");
    CHECK(j.at("trial") == count);
    CHECK(j.at("action_times").size() == 3);
    ++count;
  }
  CHECK(count == 5);
}

TEST_CASE("simulation output is byte-stable across reruns and worker counts") {
  const std::string args =
      "simulate --protocol pacore --n 20 --delta 3 --trials 300 --seed 7";
  const CmdResult once = run_cli(args + " --workers 1");
  const CmdResult again = run_cli(args + " --workers 1");
  const CmdResult wide = run_cli(args + " --workers 8");
  CHECK(once.exit_code == 0);
  CHECK(once.out == again.out);
  CHECK(once.out == wide.out);
  CHECK(once.out.find("pacore/delta-synchronized") != std::string::npos);
}

TEST_CASE("compare honors worker-count invariance end to end") {
  const std::string args =
      "compare --protocol core --n 10 --delta 2 --trials 2000 --seed 11";
  const CmdResult narrow = run_cli(args + " --workers 1");
  const CmdResult wide = run_cli(args + " --workers 8");
  CHECK(narrow.exit_code == 0);
  CHECK(narrow.out == wide.out);
}

TEST_CASE("help text names units and defaults") {
  const CmdResult top = run_cli("--help");
  CHECK(top.exit_code == 0);
  CHECK(top.out.find("seconds") != std::string::npos);
  const CmdResult sim = run_cli("simulate --help");
  CHECK(sim.exit_code == 0);
  CHECK(sim.out.find("seconds") != std::string::npos);
  CHECK(sim.out.find("default") != std::string::npos);
}

TEST_CASE("single-agent adjusted-clock run warns that bounds need more agents") {
  const CmdResult r =
      run_cli("simulate --protocol pacore --n 1 --delta 1 --trials 100 2>&1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("n >= 2") != std::string::npos);
}
