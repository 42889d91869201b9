#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oofa/design.hpp"
#include "oofa/errors.hpp"
#include "oofa/simulator.hpp"
#include "test_util.hpp"

using namespace oofa;
using testutil::fixture;

namespace {

const EffectMap kTrueModel = {{"Intercept", 23.13}, {"Z1^l", 0.26},     {"Z2^l", -3.19},
                              {"Z5^l", 1.3},        {"Z2^q", -3.21},    {"Z1^lZ5^l", 1.05},
                              {"Z2^lZ5^l", 1.82}};
const EffectMap kBatchEffects = {{"B^l", -4.08}, {"B^q", 1.2}};

std::set<std::string> labels_of(const std::vector<std::vector<int>>& points) {
  std::set<std::string> out;
  for (const auto& z : points) out.insert(sequence_label(z));
  return out;
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("reports are reproducible and thread-count independent") {
  SimConfig cfg{read_design_csv(fixture("five_drug_blocked.csv")).without_response(), 3, 60,
                0.05, 1.0, 777};
  const SimulationReport a = simulate(cfg, 1);
  const SimulationReport b = simulate(cfg, 1);
  const SimulationReport c = simulate(cfg, 4);
  CHECK(a.power == b.power);
  CHECK(a.per_rep_power == b.per_rep_power);
  CHECK(a.per_rep_type1 == b.per_rep_type1);
  CHECK(a.per_rep_power == c.per_rep_power);
  CHECK(a.per_rep_type1 == c.per_rep_type1);
  CHECK(a.n_active == 2 + 3);
  CHECK(a.n_inactive == 20 - 3);
  CHECK(a.power >= 0.0);
  CHECK(a.power <= 1.0);
  CHECK(a.type1 >= 0.0);
  CHECK(a.type1 <= 1.0);
}

TEST_CASE("reports are invariant to the error scale") {
  SimConfig cfg{read_design_csv(fixture("m5_k3_b15.csv")), 4, 50, 0.05, 1.0, 2024};
  const SimulationReport unit = simulate(cfg);
  cfg.sigma_eps = 10.0;
  const SimulationReport scaled = simulate(cfg);
  CHECK(unit.per_rep_power == scaled.per_rep_power);
  CHECK(unit.per_rep_type1 == scaled.per_rep_type1);
}

TEST_CASE("with no active position effects the block effects carry the power") {
  SimConfig cfg{read_design_csv(fixture("five_drug_blocked.csv")).without_response(), 0, 200,
                0.05, 1.0, 99};
  const SimulationReport r = simulate(cfg);
  CHECK(r.n_active == 2);
  CHECK(r.power > 0.95);
  CHECK(r.type1 < 0.1);
}

TEST_CASE("invalid configurations are rejected") {
  const BlockOofaDesign blocked = read_design_csv(fixture("m5_k3_b20.csv"));
  const BlockOofaDesign unblocked = read_design_csv(fixture("m3_d1.csv"));
  CHECK_THROWS_AS(simulate(SimConfig{unblocked, 1, 10, 0.05, 1.0, 1}), ConfigInvalid);
  CHECK_THROWS_AS(simulate(SimConfig{blocked, 21, 10, 0.05, 1.0, 1}), ConfigInvalid);
  CHECK_THROWS_AS(simulate(SimConfig{blocked, -1, 10, 0.05, 1.0, 1}), ConfigInvalid);
  CHECK_THROWS_AS(simulate(SimConfig{blocked, 1, 0, 0.05, 1.0, 1}), ConfigInvalid);
  CHECK_THROWS_AS(simulate(SimConfig{blocked, 1, 10, 1.5, 1.0, 1}), ConfigInvalid);
  CHECK_THROWS_AS(simulate(SimConfig{blocked, 1, 10, 0.05, 0.0, 1}), ConfigInvalid);
}

TEST_CASE("case-study responses reproduce the generating mean at tiny noise") {
  const BlockOofaDesign t6 = read_design_csv(fixture("five_drug_blocked.csv"));
  const auto y = case_study_responses(t6.without_response(), kTrueModel, kBatchEffects, 1e-12, 5);
  // run 1 is (1,2,3,4,5) in block 1; contrast values written out by hand
  const double s2 = std::sqrt(2.0);
  const double p1_1 = -2.0 / s2, p1_2 = -1.0 / s2, p1_5 = 2.0 / s2;
  const double p2_2 = std::sqrt(5.0 / 14.0) * (1.0 - 2.0);
  const double c1_1 = -std::sqrt(1.5), c2_1 = std::sqrt(0.5);
  const double mu = 23.13 + 0.26 * p1_1 - 3.19 * p1_2 + 1.3 * p1_5 - 3.21 * p2_2 +
                    1.05 * p1_1 * p1_5 + 1.82 * p1_2 * p1_5 - 4.08 * c1_1 + 1.2 * c2_1;
  CHECK(std::abs(y[0] - mu) < 1e-9);
}

TEST_CASE("zero effects and vanishing noise give a zero response") {
  const BlockOofaDesign t6 = read_design_csv(fixture("five_drug_blocked.csv"));
  const auto y = case_study_responses(t6.without_response(), {}, {}, 1e-300, 5);
  for (double v : y) CHECK(std::abs(v) < 1e-250);
}

TEST_CASE("unknown labels are rejected") {
  const BlockOofaDesign t6 = read_design_csv(fixture("five_drug_blocked.csv"));
  CHECK_THROWS_AS(case_study_responses(t6.without_response(), {{"Z9^l", 1.0}}, {}, 1.0, 5),
                  UnknownLabel);
  CHECK_THROWS_AS(case_study_responses(t6.without_response(), {{"banana", 1.0}}, {}, 1.0, 5),
                  UnknownLabel);
}

TEST_CASE("the generating effects are recovered in most replays") {
  const BlockOofaDesign t6 = read_design_csv(fixture("five_drug_blocked.csv"));
  const ModelMatrix mm = model_matrix(t6, ModelOrder::SecondOrder);
  const std::set<std::string> expected = {"B^l",      "B^q",      "Z2^l", "Z2^q",
                                          "Z5^l",     "Z1^lZ5^l", "Z2^lZ5^l"};
  int recovered = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto y =
        case_study_responses(t6.without_response(), kTrueModel, kBatchEffects, 1.0, 1000 + rep);
    const ForwardFit fit = forward_select(
        mm, Eigen::Map<const Eigen::VectorXd>(y.data(), y.size()), 0.05);
    const std::set<std::string> got(fit.labels.begin() + 1, fit.labels.end());
    if (std::includes(got.begin(), got.end(), expected.begin(), expected.end())) ++recovered;
  }
  CHECK(recovered >= 180);
}

TEST_CASE("the true model's best sequences") {
  const auto points = argmax_sequences(kTrueModel, 5);
  REQUIRE(points.size() == 2);
  CHECK(points[0] == std::vector<int>{4, 3, 1, 2, 5});
  CHECK(points[1] == std::vector<int>{4, 3, 2, 1, 5});
  CHECK(labels_of(points) ==
        std::set<std::string>{"Z4->Z3->Z1->Z2->Z5", "Z4->Z3->Z2->Z1->Z5"});
}

TEST_CASE("block terms are held fixed when ranking sequences") {
  EffectMap with_blocks = kTrueModel;
  with_blocks["B^l"] = -4.08;
  with_blocks["B^q"] = 1.2;
  CHECK(argmax_sequences(with_blocks, 5) == argmax_sequences(kTrueModel, 5));
}

TEST_CASE("the unblocked fitted model's best sequences") {
  const EffectMap fitted = {{"Intercept", 22.4438}, {"Z2^l", -4.3377}, {"Z2^q", -2.5307},
                            {"Z5^l", 1.9279}};
  const auto points = argmax_sequences(fitted, 5);
  CHECK(labels_of(points) ==
        std::set<std::string>{"Z1->Z2->Z3->Z4->Z5", "Z3->Z2->Z1->Z4->Z5",
                              "Z1->Z2->Z4->Z3->Z5", "Z4->Z2->Z3->Z1->Z5",
                              "Z3->Z2->Z4->Z1->Z5", "Z4->Z2->Z1->Z3->Z5"});
}

TEST_CASE("a single negative linear effect pins one component first") {
  const auto points = argmax_sequences({{"Z1^l", -1.0}}, 5);
  CHECK(points.size() == 24);
  for (const auto& z : points) CHECK(z[0] == 1);
}

TEST_CASE("addition order is the inverse assignment") {
  const std::vector<int> z{4, 3, 1, 2, 5};
  CHECK(addition_order(z) == std::vector<int>{3, 4, 2, 1, 5});
  const std::vector<int> id{1, 2, 3, 4, 5};
  CHECK(addition_order(id) == id);
}

}  // TEST_SUITE
