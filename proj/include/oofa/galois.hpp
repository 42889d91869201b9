#pragma once

#include <vector>

namespace oofa {

/**
 * Finite field GF(m) for m prime or m in {4, 8, 9}, given by full addition
 * and multiplication tables over element indices 0..m-1.
 *
 * Element order is fixed so results are reproducible:
 *   - prime m: element i is the residue i, arithmetic mod m;
 *   - prime power m = p^e: element i has the base-p digits of i as polynomial
 *     coefficients (most significant first, constant term last), reduced by a
 *     fixed irreducible modulus: x^2+x+1 for m=4, x^3+x+1 for m=8, x^2+1 for
 *     m=9.
 * In both cases element 0 is the additive identity and element 1 the
 * multiplicative identity.
 *
 * Immutable after construction; safe to share across threads.
 */
struct GaloisField {
  int order = 0;           // m
  int characteristic = 0;  // p
  int degree = 0;          // e with m = p^e
  std::vector<std::vector<int>> elements;  // coefficient vectors over GF(p)
  std::vector<int> add_table;              // order x order, row-major
  std::vector<int> mul_table;

  int add(int i, int j) const { return add_table[static_cast<std::size_t>(i) * order + j]; }
  int mul(int i, int j) const { return mul_table[static_cast<std::size_t>(i) * order + j]; }
};

/// Builds GF(m). Throws UnsupportedOrder if m is not prime and not in {4,8,9}.
GaloisField make_field(int m);

}  // namespace oofa
