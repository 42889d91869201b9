#pragma once

#include <vector>

namespace oofa {

/**
 * Orthogonal polynomial contrasts over the levels 1..q.
 *
 * Row u holds the degree-u contrast evaluated at each level; row 0 is all
 * ones. Rows are pairwise orthogonal with squared length q, and each row is a
 * polynomial of exact degree u with positive leading coefficient, so the
 * linear row increases in the level and matches h1*(z - (q+1)/2).
 */
class ContrastTable {
 public:
  explicit ContrastTable(int q);  // throws DegenerateOrder if q < 2

  int size() const { return q_; }

  /// Value of the degree-u contrast at level z (1-based).
  double at(int degree, int level) const {
    return values_[static_cast<std::size_t>(degree) * q_ + (level - 1)];
  }

  /// Row of q values for one degree, indexed by level - 1.
  const double* row(int degree) const {
    return values_.data() + static_cast<std::size_t>(degree) * q_;
  }

 private:
  int q_;
  std::vector<double> values_;
};

/// Contrasts for a position factor with q levels.
ContrastTable contrast_table(int q);

/// Contrasts for a block factor with k blocks; same construction, the
/// levels are nominal block labels.
ContrastTable block_contrast_table(int k);

}  // namespace oofa
