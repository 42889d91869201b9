#include "oofa/latin.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "oofa/errors.hpp"

namespace oofa {

std::vector<LatinSquare> base_mols(const GaloisField& field) {
  const int m = field.order;
  if (m <= 3) {
    throw UnsupportedOrder("Latin-square construction requires order > 3, got " +
                           std::to_string(m));
  }
  std::vector<LatinSquare> out;
  out.reserve(m - 1);
  for (int r = 1; r < m; ++r) {
    LatinSquare sq;
    sq.m = m;
    sq.index = r;
    sq.cells.resize(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        sq.cells[static_cast<std::size_t>(i) * m + j] = field.add(i, field.mul(r, j)) + 1;
      }
    }
    out.push_back(std::move(sq));
  }
  return out;
}

std::vector<LatinSquare> full_ls_set(const GaloisField& field) {
  const int m = field.order;
  const std::vector<LatinSquare> base = base_mols(field);

  // 0-based indices of columns 3..m, run through all permutations in
  // lexicographic order; the identity comes first.
  std::vector<int> cols(m - 2);
  std::iota(cols.begin(), cols.end(), 2);

  std::vector<LatinSquare> out;
  int index = 1;
  do {
    for (const LatinSquare& b : base) {
      LatinSquare sq;
      sq.m = m;
      sq.index = index++;
      sq.cells.resize(static_cast<std::size_t>(m) * m);
      for (int i = 0; i < m; ++i) {
        sq.cells[static_cast<std::size_t>(i) * m + 0] = b.at(i, 0);
        sq.cells[static_cast<std::size_t>(i) * m + 1] = b.at(i, 1);
        for (int j = 2; j < m; ++j) {
          sq.cells[static_cast<std::size_t>(i) * m + j] = b.at(i, cols[j - 2]);
        }
      }
      out.push_back(std::move(sq));
    }
  } while (std::next_permutation(cols.begin(), cols.end()));
  return out;
}

std::vector<ComponentOrthogonalArray> coa_set(const std::vector<LatinSquare>& ls_set) {
  if (ls_set.empty()) return {};
  const int m = ls_set.front().m;
  const std::size_t groups = ls_set.size() / (m - 1);
  std::vector<ComponentOrthogonalArray> out;
  out.reserve(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    ComponentOrthogonalArray coa;
    coa.m = m;
    coa.index = static_cast<int>(g) + 1;
    coa.rows.reserve(static_cast<std::size_t>(m) * (m - 1) * m);
    for (int f = 0; f < m - 1; ++f) {
      const LatinSquare& sq = ls_set[g * (m - 1) + f];
      coa.rows.insert(coa.rows.end(), sq.cells.begin(), sq.cells.end());
    }
    out.push_back(std::move(coa));
  }
  return out;
}

}  // namespace oofa
