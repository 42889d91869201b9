#include "oofa/contrasts.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "oofa/errors.hpp"

namespace oofa {

// Monic three-term recurrence for polynomials orthogonal over the points
// 1..q:  p_{u+1}(z) = (z - a_u) p_u(z) - b_u p_{u-1}(z), with
// a_u = <z p_u, p_u>/<p_u, p_u> and b_u = <p_u, p_u>/<p_{u-1}, p_{u-1}>.
// Monic rows have positive leading coefficient; each is then rescaled to
// squared length q. Equivalent to Gram-Schmidt on the monomial basis but
// keeps orthogonality near machine precision.
ContrastTable::ContrastTable(int q) : q_(q) {
  if (q < 2) {
    throw DegenerateOrder("contrast table needs at least 2 levels, got " + std::to_string(q));
  }
  values_.assign(static_cast<std::size_t>(q) * q, 0.0);

  std::vector<double> prev(q, 0.0);  // p_{u-1}
  std::vector<double> cur(q, 1.0);   // p_u, starting at p_0 = 1
  double norm_prev = 0.0;
  double norm_cur = static_cast<double>(q);

  for (int u = 0; u < q; ++u) {
    const double scale = std::sqrt(q / norm_cur);
    for (int i = 0; i < q; ++i) values_[static_cast<std::size_t>(u) * q + i] = cur[i] * scale;
    if (u + 1 == q) break;

    double za = 0.0;
    for (int i = 0; i < q; ++i) za += (i + 1.0) * cur[i] * cur[i];
    const double a = za / norm_cur;
    const double b = (u == 0) ? 0.0 : norm_cur / norm_prev;

    std::vector<double> next(q);
    for (int i = 0; i < q; ++i) next[i] = (i + 1.0 - a) * cur[i] - b * prev[i];

    prev.swap(cur);
    cur.swap(next);
    norm_prev = norm_cur;
    norm_cur = 0.0;
    for (int i = 0; i < q; ++i) norm_cur += cur[i] * cur[i];
  }
}

ContrastTable contrast_table(int q) { return ContrastTable(q); }

ContrastTable block_contrast_table(int k) { return ContrastTable(k); }

}  // namespace oofa
