#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "oofa/design.hpp"
#include "oofa/rng.hpp"

namespace testutil {

inline std::string fixture(const std::string& name) {
  return std::string(OOFA_FIXTURES_DIR) + "/" + name;
}

/// Multiset count of (z, b) among the design rows; the brute-force oracle
/// the indicator function must reproduce.
inline int replicate_count(const oofa::BlockOofaDesign& d, const std::vector<int>& z, int b) {
  int count = 0;
  for (int i = 0; i < d.runs(); ++i) {
    if (d.block(i) != b) continue;
    bool same = true;
    for (int j = 0; j < d.m(); ++j) {
      if (d.position(i, j) != z[j]) {
        same = false;
        break;
      }
    }
    if (same) ++count;
  }
  return count;
}

/// Random balanced blocked design: rows drawn with replacement from all
/// permutations, block labels assigned in balanced order.
inline oofa::BlockOofaDesign random_design(int m, int k, int n_B, oofa::Rng& rng) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 1);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  std::vector<int> positions;
  std::vector<int> blocks;
  for (int b = 1; b <= k; ++b) {
    for (int r = 0; r < n_B; ++r) {
      const auto& row = perms[rng.next_below(perms.size())];
      positions.insert(positions.end(), row.begin(), row.end());
      blocks.push_back(b);
    }
  }
  return oofa::BlockOofaDesign(m, k, std::move(positions), std::move(blocks));
}

/// All points of the full space as (z, b) pairs.
inline std::vector<std::pair<std::vector<int>, int>> full_space(int m, int k) {
  std::vector<std::pair<std::vector<int>, int>> out;
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 1);
  do {
    for (int b = 1; b <= k; ++b) out.emplace_back(p, b);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// --- numerical-integration oracle for the two-sided t tail ---

inline double t_density(double x, double nu) {
  const double c =
      std::exp(std::lgamma(0.5 * (nu + 1)) - std::lgamma(0.5 * nu)) / std::sqrt(nu * M_PI);
  return c * std::pow(1.0 + x * x / nu, -0.5 * (nu + 1));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double eps,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * eps) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 48);
}

/// Two-sided t tail via the central integral 1 - 2 * int_0^|t| f(x) dx,
/// which avoids truncating the heavy tail at small df.
inline double t_pvalue_oracle(double t, int df) {
  const double nu = df;
  const double at = std::abs(t);
  if (at == 0.0) return 1.0;
  auto f = [&](double x) { return t_density(x, nu); };
  const double central = integrate(f, 0.0, at, 1e-15);
  return std::max(0.0, 1.0 - 2.0 * central);
}

}  // namespace testutil
