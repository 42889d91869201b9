#include <doctest.h>

#include <cmath>

#include "oofa/contrasts.hpp"
#include "oofa/errors.hpp"

using namespace oofa;

namespace {

// closed forms for degrees 1..4 over levels 1..q, normalized to length sqrt(q)
double closed_form(int degree, int q, int z) {
  const double c = z - (q + 1) / 2.0;
  const double q2 = static_cast<double>(q) * q;
  double raw = 0.0;
  switch (degree) {
    case 1: raw = c; break;
    case 2: raw = c * c - (q2 - 1.0) / 12.0; break;
    case 3: raw = c * c * c - c * (3.0 * q2 - 7.0) / 20.0; break;
    case 4:
      raw = c * c * c * c - c * c * (3.0 * q2 - 13.0) / 14.0 +
            3.0 * (q2 - 1.0) * (q2 - 9.0) / 560.0;
      break;
    default: REQUIRE(false);
  }
  return raw;
}

double norm_scale(int degree, int q) {
  double ss = 0.0;
  for (int z = 1; z <= q; ++z) {
    const double v = closed_form(degree, q, z);
    ss += v * v;
  }
  return std::sqrt(q / ss);
}

}  // namespace

TEST_SUITE("contrasts") {

TEST_CASE("orthonormality holds for all supported sizes") {
  for (int q = 2; q <= 9; ++q) {
    CAPTURE(q);
    const ContrastTable t(q);
    for (int u = 0; u < q; ++u) {
      for (int v = 0; v < q; ++v) {
        double dot = 0.0;
        for (int z = 1; z <= q; ++z) dot += t.at(u, z) * t.at(v, z);
        CHECK(std::abs(dot - (u == v ? q : 0.0)) < 1e-10);
      }
    }
  }
}

TEST_CASE("row 0 is the mean contrast") {
  const ContrastTable t(5);
  for (int z = 1; z <= 5; ++z) CHECK(t.at(0, z) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("q=3 values match the known linear and quadratic contrasts") {
  const ContrastTable t(3);
  const double s32 = std::sqrt(1.5);
  const double s12 = std::sqrt(0.5);
  CHECK(t.at(1, 1) == doctest::Approx(-s32).epsilon(1e-12));
  CHECK(t.at(1, 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.at(1, 3) == doctest::Approx(s32).epsilon(1e-12));
  CHECK(t.at(2, 1) == doctest::Approx(s12).epsilon(1e-12));
  CHECK(t.at(2, 2) == doctest::Approx(-2 * s12).epsilon(1e-12));
  CHECK(t.at(2, 3) == doctest::Approx(s12).epsilon(1e-12));
}

TEST_CASE("rows 1..4 match the closed forms for q = 3, 5, 7") {
  for (int q : {3, 5, 7}) {
    for (int degree = 1; degree <= 4 && degree < q; ++degree) {
      const double scale = norm_scale(degree, q);
      const ContrastTable t(q);
      for (int z = 1; z <= q; ++z) {
        CAPTURE(q);
        CAPTURE(degree);
        CAPTURE(z);
        CHECK(std::abs(t.at(degree, z) - scale * closed_form(degree, q, z)) < 1e-10);
      }
    }
  }
}

TEST_CASE("two blocks give the plus-minus contrast") {
  const ContrastTable t = block_contrast_table(2);
  CHECK(t.at(1, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(t.at(1, 2) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("orthogonality example at q=5") {
  const ContrastTable t(5);
  double dot34 = 0.0, ss3 = 0.0;
  for (int z = 1; z <= 5; ++z) {
    dot34 += t.at(3, z) * t.at(4, z);
    ss3 += t.at(3, z) * t.at(3, z);
  }
  CHECK(std::abs(dot34) < 1e-10);
  CHECK(ss3 == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("degenerate sizes are rejected") {
  CHECK_THROWS_AS(ContrastTable(1), oofa::DegenerateOrder);
  CHECK_THROWS_AS(contrast_table(0), oofa::DegenerateOrder);
}

}  // TEST_SUITE
