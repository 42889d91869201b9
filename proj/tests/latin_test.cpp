#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "oofa/errors.hpp"
#include "oofa/galois.hpp"
#include "oofa/latin.hpp"

using namespace oofa;

namespace {

bool is_latin(const LatinSquare& sq) {
  const int m = sq.m;
  for (int r = 0; r < m; ++r) {
    std::set<int> row, col;
    for (int c = 0; c < m; ++c) {
      row.insert(sq.at(r, c));
      col.insert(sq.at(c, r));
    }
    if (static_cast<int>(row.size()) != m || *row.begin() != 1 || *row.rbegin() != m) return false;
    if (static_cast<int>(col.size()) != m) return false;
  }
  return true;
}

bool orthogonal(const LatinSquare& a, const LatinSquare& b) {
  std::set<std::pair<int, int>> pairs;
  for (int r = 0; r < a.m; ++r) {
    for (int c = 0; c < a.m; ++c) pairs.emplace(a.at(r, c), b.at(r, c));
  }
  return static_cast<int>(pairs.size()) == a.m * a.m;
}

// reference squares transcribed independently of the construction
std::vector<LatinSquare> load_reference_m5() {
  std::ifstream in(std::string(OOFA_FIXTURES_DIR) + "/mols_m5.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "LS,Row,C1,C2,C3,C4,C5");
  std::vector<LatinSquare> out(24);
  for (auto& sq : out) {
    sq.m = 5;
    sq.cells.assign(25, 0);
  }
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string tok;
    std::vector<int> v;
    while (std::getline(ss, tok, ',')) v.push_back(std::stoi(tok));
    REQUIRE(v.size() == 7);
    out[v[0] - 1].index = v[0];
    for (int c = 0; c < 5; ++c) out[v[0] - 1].cells[(v[1] - 1) * 5 + c] = v[2 + c];
  }
  return out;
}

}  // namespace

TEST_SUITE("latin") {

TEST_CASE("base squares for m=5 match the reference table") {
  const auto base = base_mols(make_field(5));
  REQUIRE(base.size() == 4);
  const auto ref = load_reference_m5();
  for (int r = 0; r < 4; ++r) CHECK(base[r].cells == ref[r].cells);
  CHECK(base[0].at(0, 0) == 1);
  CHECK(base[0].at(1, 0) == 2);  // second row starts 2,3,4,5,1
  CHECK(base[1].cells == std::vector<int>{1, 3, 5, 2, 4, 2, 4, 1, 3, 5, 3, 5, 2, 4, 1,
                                          4, 1, 3, 5, 2, 5, 2, 4, 1, 3});
}

TEST_CASE("full candidate set for m=5 matches the reference table cell for cell") {
  const auto all = full_ls_set(make_field(5));
  REQUIRE(all.size() == 24);
  const auto ref = load_reference_m5();
  for (int i = 0; i < 24; ++i) {
    CAPTURE(i);
    CHECK(all[i].index == i + 1);
    CHECK(all[i].cells == ref[i].cells);
  }
  std::set<std::vector<int>> distinct;
  for (const auto& sq : all) distinct.insert(sq.cells);
  CHECK(distinct.size() == 24);
}

TEST_CASE("every square in the set is Latin and groups are mutually orthogonal") {
  for (int m : {4, 5, 7}) {
    CAPTURE(m);
    const auto all = full_ls_set(make_field(m));
    long long expect = 1;
    for (int i = 2; i < m; ++i) expect *= i;  // (m-1)! squares in total
    CHECK(static_cast<long long>(all.size()) == expect);
    for (const auto& sq : all) CHECK(is_latin(sq));
    const int groups = static_cast<int>(all.size()) / (m - 1);
    for (int g = 0; g < groups; ++g) {
      for (int a = 0; a < m - 1; ++a) {
        for (int b = a + 1; b < m - 1; ++b) {
          CHECK(orthogonal(all[g * (m - 1) + a], all[g * (m - 1) + b]));
        }
      }
    }
  }
}

TEST_CASE("column permutations follow lexicographic order") {
  const auto all = full_ls_set(make_field(5));
  // second group permutes columns (3,4,5) -> (3,5,4)
  CHECK(std::vector<int>(all[4].cells.begin(), all[4].cells.begin() + 5) ==
        std::vector<int>{1, 2, 3, 5, 4});
  // third group: (4,3,5)
  CHECK(std::vector<int>(all[8].cells.begin(), all[8].cells.begin() + 5) ==
        std::vector<int>{1, 2, 4, 3, 5});
}

TEST_CASE("COAs cover every ordered level pair once per column pair") {
  for (int m : {4, 5}) {
    CAPTURE(m);
    const auto all = full_ls_set(make_field(m));
    const auto coas = coa_set(all);
    long long expect = 1;
    for (int i = 2; i <= m - 2; ++i) expect *= i;
    CHECK(static_cast<long long>(coas.size()) == expect);
    for (const auto& coa : coas) {
      CHECK(coa.run_count() == m * (m - 1));
      for (int c1 = 0; c1 < m; ++c1) {
        for (int c2 = c1 + 1; c2 < m; ++c2) {
          std::set<std::pair<int, int>> pairs;
          for (int r = 0; r < coa.run_count(); ++r) pairs.emplace(coa.at(r, c1), coa.at(r, c2));
          CHECK(static_cast<int>(pairs.size()) == m * (m - 1));
          for (const auto& [a, b] : pairs) CHECK(a != b);
        }
      }
    }
  }
}

TEST_CASE("stacking all COAs yields the full design") {
  const auto coas = coa_set(full_ls_set(make_field(5)));
  std::set<std::vector<int>> rows;
  for (const auto& coa : coas) {
    for (int r = 0; r < coa.run_count(); ++r) {
      rows.emplace(coa.rows.begin() + static_cast<std::size_t>(r) * 5,
                   coa.rows.begin() + static_cast<std::size_t>(r + 1) * 5);
    }
  }
  CHECK(rows.size() == 120);
}

TEST_CASE("construction rejects m <= 3") {
  CHECK_THROWS_AS(base_mols(make_field(3)), oofa::UnsupportedOrder);
}

}  // TEST_SUITE
