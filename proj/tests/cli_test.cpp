#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "oofa/cli.hpp"
#include "test_util.hpp"

using testutil::fixture;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = oofa::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// cell of a CSV body by header name, row index
std::string csv_cell(const std::string& csv, const std::string& column, int row) {
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  std::vector<std::string> header;
  std::stringstream hs(line);
  std::string tok;
  while (std::getline(hs, tok, ',')) header.push_back(tok);
  const auto it = std::find(header.begin(), header.end(), column);
  REQUIRE(it != header.end());
  const int col = static_cast<int>(it - header.begin());
  for (int r = 0; r <= row; ++r) REQUIRE(std::getline(in, line));
  std::stringstream ls(line);
  std::vector<std::string> cells;
  while (std::getline(ls, tok, ',')) cells.push_back(tok);
  return cells.at(col);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("mols output matches the reference squares byte for byte") {
  const CliResult r = run({"mols", "--m", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.out == slurp(fixture("mols_m5.csv")));
}

TEST_CASE("construct reproduces the catalog design byte for byte") {
  const CliResult r = run({"construct", "--m", "5", "--k", "3", "--block-size", "20"});
  REQUIRE(r.code == 0);
  CHECK(r.out == slurp(fixture("m5_k3_b20.csv")));

  const std::string tmp = "/tmp/oofa_cli_c20.csv";
  const CliResult rf = run({"construct", "--m", "5", "--k", "3", "--block-size", "20", "--out", tmp});
  REQUIRE(rf.code == 0);
  CHECK(slurp(tmp) == slurp(fixture("m5_k3_b20.csv")));
  std::remove(tmp.c_str());
}

TEST_CASE("construct with a budget is reproducible from the seed") {
  const std::vector<std::string> args{"construct", "--m",  "5",    "--k",    "3",
                                      "--block-size", "12", "--i1", "10",     "--seed", "31415"};
  const CliResult a = run(args);
  const CliResult b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("wlp reports the catalog design's pattern") {
  const CliResult r = run({"wlp", "--design", fixture("five_drug_blocked.csv")});
  REQUIRE(r.code == 0);
  CHECK(std::abs(std::stod(csv_cell(r.out, "w_pure", 1)) - 0.687) <= 5e-4);
  CHECK(std::abs(std::stod(csv_cell(r.out, "w_mixed", 1)) - 0.317) <= 5e-4);
  CHECK(std::abs(std::stod(csv_cell(r.out, "w_mixed", 2)) - 1.901) <= 5e-4);
}

TEST_CASE("indicator lists nonzero words") {
  const CliResult r = run({"indicator", "--design", fixture("m3_d2_blocked.csv")});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  bool found = false;
  while (std::getline(in, line)) {
    if (line.rfind("2101,", 0) == 0) {
      found = true;
      const double a = std::stod(line.substr(5));
      CHECK(std::abs(a - 0.0962) < 5e-4);
    }
  }
  CHECK(found);
}

TEST_CASE("validate distinguishes valid and invalid designs") {
  CHECK(run({"validate", "--design", fixture("m5_k2_b27.csv")}).code == 0);
  const std::string tmp = "/tmp/oofa_cli_invalid.csv";
  {
    std::ofstream f(tmp);
    f << "Run,Z1,Z2,Z3,B\n1,1,1,2,1\n2,1,2,3,1\n";
  }
  const CliResult r = run({"validate", "--design", tmp});
  CHECK(r.code == 1);
  CHECK(r.err.find("permutation") != std::string::npos);
  std::remove(tmp.c_str());
}

TEST_CASE("fit emits the forward-selection table") {
  const CliResult r = run({"fit", "--data", fixture("five_drug_unblocked.csv")});
  REQUIRE(r.code == 0);
  CHECK(csv_cell(r.out, "term", 0) == "Intercept");
  CHECK(csv_cell(r.out, "term", 1) == "Z2^l");
  CHECK(std::abs(std::stod(csv_cell(r.out, "estimate", 1)) + 4.3377) <= 5e-4);
}

TEST_CASE("simulate emits one summary row") {
  const CliResult r = run({"simulate", "--design", fixture("five_drug_blocked.csv"), "--p", "2",
                           "--reps", "40", "--seed", "7"});
  REQUIRE(r.code == 0);
  const double pw = std::stod(csv_cell(r.out, "PW", 0));
  const double ty = std::stod(csv_cell(r.out, "TY1", 0));
  CHECK(pw >= 0.0);
  CHECK(pw <= 1.0);
  CHECK(ty >= 0.0);
  CHECK(ty <= 1.0);
  CHECK(csv_cell(r.out, "n_B", 0) == "12");
}

TEST_CASE("case-study ranks the sequences of both fits") {
  const CliResult r = run({"case-study", "--blocked", fixture("five_drug_blocked.csv"),
                           "--unblocked", fixture("five_drug_unblocked.csv")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# table: true_optima") != std::string::npos);
  CHECK(r.out.find("Z4->Z3->Z2->Z1->Z5") != std::string::npos);
  CHECK(r.out.find("Z4->Z3->Z1->Z2->Z5") != std::string::npos);
  CHECK(r.out.find("# table: blocked_fit") != std::string::npos);
  CHECK(r.out.find("Z3^lZ4^l") != std::string::npos);
  // the unblocked analysis finds six optima; count rows of that table
  const auto start = r.out.find("# table: unblocked_optima");
  const auto end = r.out.find("# table: blocked_fit");
  REQUIRE(start != std::string::npos);
  const std::string section = r.out.substr(start, end - start);
  CHECK(std::count(section.begin(), section.end(), '\n') >= 7);  // marker + header + 6 rows

  const CliResult resim = run({"case-study", "--blocked", fixture("five_drug_blocked.csv"),
                               "--unblocked", fixture("five_drug_unblocked.csv"), "--resimulate",
                               "--seed", "11"});
  CHECK(resim.code == 0);
}

TEST_CASE("json mirrors the tables") {
  const CliResult r = run({"--json", "wlp", "--design", fixture("m3_d1.csv")});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.contains("tables"));
  const auto& w = doc["tables"]["wlp"];
  REQUIRE(w.size() == 6);
  CHECK(std::abs(w[1]["w_pure"].get<double>() - 0.75) < 5e-3);
  CHECK(doc["command"] == "wlp");
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"mols"}).code == 2);                       // missing --m
  CHECK(run({"construct", "--m", "5"}).code == 2);      // missing --k/--block-size
  CHECK(run({}).code == 2);                             // no subcommand
}

TEST_CASE("runtime failures exit with code 1") {
  CHECK(run({"wlp", "--design", "/nonexistent.csv"}).code == 1);
  CHECK(run({"construct", "--m", "6", "--k", "2", "--block-size", "10"}).code == 1);
}

TEST_CASE("version flag") {
  const CliResult r = run({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.find("oofa") != std::string::npos);
}

}  // TEST_SUITE
