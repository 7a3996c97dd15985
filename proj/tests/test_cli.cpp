#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "propmeta/cli.hpp"

using propmeta::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = run(args, in, out, err);
  return {code, out.str(), err.str()};
}

const std::string kReversedPair = "label,events,total\nstudy 10,32,16557\nstudy 13,1,676\n";
const std::string kFour = "events,total\n1,10\n10,100\n100,1000\n1000,10000\n";

}  // namespace

TEST_CASE("pool with defaults reproduces the headline example") {
  const auto r = invoke({"pool", "-"}, kReversedPair);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "prop-meta/1");
  CHECK(std::abs(j["back_transformed"]["p"].get<double>() - 0.00194) <= 1e-5);
  bool outside = false;
  for (const auto& f : j["diagnostics"]["findings"]) {
    outside |= f["kind"] == "PooledOutsideObservedRange";
  }
  CHECK(outside);
}

TEST_CASE("flags") {
  const auto r = invoke({"pool", "-", "--transform", "single", "--model", "dl", "--n-convention",
                         "harmonic", "--level", "0.9", "--format", "csv"},
                        kFour);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("config,,transform,single\n") != std::string::npos);
  CHECK(r.out.find("config,,model,dl\n") != std::string::npos);
  CHECK(r.out.find("config,,level,0.9\n") != std::string::npos);
  CHECK(r.out.find("back_transformed,,p,0.1\n") != std::string::npos);

  const auto e = invoke({"pool", "-", "--n-convention", "explicit=36"}, kFour);
  CHECK(e.code == 0);
  CHECK(e.out.find("\"explicit=36\"") != std::string::npos);
}

TEST_CASE("transform and diagnose subcommands") {
  const auto t = invoke({"transform", "-", "--format", "csv"}, kReversedPair);
  CHECK(t.code == 0);
  CHECK(t.out.starts_with("label,events,total,p,theta,variance\n"));
  CHECK(t.out.find("study 13,1,676,") != std::string::npos);

  const auto d = invoke({"diagnose", "-", "--format", "csv"}, kReversedPair);
  CHECK(d.code == 0);
  CHECK(d.out.starts_with("kind,severity,studies,detail\n"));
  CHECK(d.out.find("OrderReversal,Warning,study 10;study 13,") != std::string::npos);
}

TEST_CASE("exit code 2 on Error findings, 1 on failures") {
  const auto err = invoke({"pool", "-", "--n-convention", "explicit=1"},
                          "events,total\n0,5000\n0,8000\n");
  CHECK(err.code == 2);
  CHECK(err.out.find("\"NoPreimage\"") != std::string::npos);

  const auto bad = invoke({"pool", "-"}, "events,total\n11,10\n");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("line 2") != std::string::npos);
  CHECK(bad.err.find("events exceeds total") != std::string::npos);

  CHECK(invoke({"pool", "/nonexistent/file.csv"}).code == 1);
  CHECK(invoke({"pool", "-", "--level", "2"}, kReversedPair).code == 1);
  CHECK(invoke({"pool", "-", "--transform", "logit"}, kReversedPair).code == 1);
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"pool", "-", "--model", "dl"}, "events,total\n1,10\n").code == 1);
}

TEST_CASE("output to a file") {
  const auto dir = std::filesystem::temp_directory_path() / "prop_meta_cli_test";
  std::filesystem::create_directories(dir);
  const auto input = dir / "in.csv";
  std::ofstream(input) << kReversedPair;
  const auto out_path = dir / "report.json";
  const auto r = invoke({"pool", input.string(), "--out", out_path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(out_path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(nlohmann::json::parse(ss.str())["studies"].size() == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("curves and stabilize") {
  const auto c = invoke({"curves", "--n", "676,16557", "--p-grid", "0.00148,0.00193"});
  CHECK(c.code == 0);
  CHECK(c.out.starts_with("N,p,theta_double,theta_single\n676,0.00148,"));
  CHECK(c.out.find("inf,0.00193,") != std::string::npos);

  const auto d = invoke({"curves"});
  CHECK(d.code == 0);
  // 4 N values plus the limit, 101 grid points each, plus header.
  CHECK(std::count(d.out.begin(), d.out.end(), '\n') == 1 + 5 * 101);

  const auto s = invoke({"stabilize", "--n", "20", "--p-grid", "0.05:0.95:0.05", "--transform", "double"});
  CHECK(s.code == 0);
  CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 1 + 19);
  CHECK(s.out.find("double,20,0.95,") != std::string::npos);
}

TEST_CASE("grid parsing") {
  using propmeta::cli::parse_grid;
  CHECK(parse_grid("0:1:0.25") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(parse_grid("0.1,0.2") == std::vector<double>{0.1, 0.2});
  CHECK(parse_grid("0.05:0.95:0.05").size() == 19);
  CHECK_THROWS(parse_grid("1:0:0.1"));
  CHECK_THROWS(parse_grid("a,b"));
}
