#pragma once

#include <vector>

#include "oofa/galois.hpp"

namespace oofa {

/// m x m square with levels 1..m; every row and column is a permutation.
struct LatinSquare {
  int m = 0;
  int index = 0;  // 1-based position in the ordered candidate set
  std::vector<int> cells;  // row-major, m*m

  int at(int row, int col) const { return cells[static_cast<std::size_t>(row) * m + col]; }
};

/**
 * m(m-1) x m array of permutation rows in which, for every pair of columns,
 * each ordered pair of distinct levels appears exactly once. Built here as a
 * vertical stack of m-1 mutually orthogonal Latin squares.
 */
struct ComponentOrthogonalArray {
  int m = 0;
  int index = 0;  // 1-based position in the COA set
  std::vector<int> rows;  // row-major, m(m-1) x m

  int at(int row, int col) const { return rows[static_cast<std::size_t>(row) * m + col]; }
  int run_count() const { return m * (m - 1); }
};

/**
 * The m-1 mutually orthogonal squares over GF(m): square r has entry
 * alpha_i + alpha_r * alpha_j at cell (i, j), shifted to levels 1..m.
 * Requires field order m > 3.
 */
std::vector<LatinSquare> base_mols(const GaloisField& field);

/**
 * Ordered candidate set of (m-1)! squares: the base squares, then every
 * rearrangement of their columns 3..m, taking the (m-2)! permutations of those
 * columns in lexicographic order (identity first). Entry (g-1)(m-1)+f is base
 * square f under the g-th permutation; indices are 1-based and stable.
 */
std::vector<LatinSquare> full_ls_set(const GaloisField& field);

/**
 * COA set C_1..C_(m-2)!: C_g stacks squares (g-1)(m-1)+1 .. (g-1)(m-1)+(m-1).
 * Stacking all C_g yields the full design with every permutation once.
 */
std::vector<ComponentOrthogonalArray> coa_set(const std::vector<LatinSquare>& ls_set);

}  // namespace oofa
