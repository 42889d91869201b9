#include "oofa/galois.hpp"

#include <algorithm>
#include <string>

#include "oofa/errors.hpp"

namespace oofa {

namespace {

bool is_prime(int m) {
  if (m < 2) return false;
  for (int d = 2; d * d <= m; ++d) {
    if (m % d == 0) return false;
  }
  return true;
}

// Irreducible modulus coefficients, highest degree first, over GF(p).
std::vector<int> modulus_for(int m) {
  switch (m) {
    case 4: return {1, 1, 1};     // x^2 + x + 1 over GF(2)
    case 8: return {1, 0, 1, 1};  // x^3 + x + 1 over GF(2)
    case 9: return {1, 0, 1};     // x^2 + 1 over GF(3)
    default: return {};
  }
}

// Polynomial product mod the irreducible modulus, coefficients over GF(p).
std::vector<int> poly_mul_mod(const std::vector<int>& a, const std::vector<int>& b,
                              const std::vector<int>& mod, int p) {
  std::vector<int> prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
  }
  // long division by mod (monic)
  const std::size_t e = mod.size() - 1;
  while (prod.size() > e) {
    int lead = prod.front();
    if (lead != 0) {
      for (std::size_t i = 0; i < mod.size(); ++i) {
        prod[i] = ((prod[i] - lead * mod[i]) % p + p) % p;
      }
    }
    prod.erase(prod.begin());
  }
  return prod;
}

int coeffs_to_index(const std::vector<int>& c, int p) {
  int idx = 0;
  for (int digit : c) idx = idx * p + digit;
  return idx;
}

}  // namespace

GaloisField make_field(int m) {
  GaloisField f;
  f.order = m;
  if (is_prime(m)) {
    f.characteristic = m;
    f.degree = 1;
    f.elements.resize(m);
    f.add_table.resize(static_cast<std::size_t>(m) * m);
    f.mul_table.resize(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) f.elements[i] = {i};
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        f.add_table[static_cast<std::size_t>(i) * m + j] = (i + j) % m;
        f.mul_table[static_cast<std::size_t>(i) * m + j] = (i * j) % m;
      }
    }
    return f;
  }

  const std::vector<int> mod = modulus_for(m);
  if (mod.empty()) {
    throw UnsupportedOrder("GF(" + std::to_string(m) +
                           ") is not supported: order must be prime or one of {4, 8, 9}");
  }
  const int p = (m == 9) ? 3 : 2;
  const int e = static_cast<int>(mod.size()) - 1;
  f.characteristic = p;
  f.degree = e;

  f.elements.resize(m);
  for (int i = 0; i < m; ++i) {
    std::vector<int> c(e, 0);
    int v = i;
    for (int d = e - 1; d >= 0; --d) {
      c[d] = v % p;
      v /= p;
    }
    f.elements[i] = c;
  }

  f.add_table.resize(static_cast<std::size_t>(m) * m);
  f.mul_table.resize(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      std::vector<int> sum(e);
      for (int d = 0; d < e; ++d) sum[d] = (f.elements[i][d] + f.elements[j][d]) % p;
      f.add_table[static_cast<std::size_t>(i) * m + j] = coeffs_to_index(sum, p);
      f.mul_table[static_cast<std::size_t>(i) * m + j] =
          coeffs_to_index(poly_mul_mod(f.elements[i], f.elements[j], mod, p), p);
    }
  }
  return f;
}

}  // namespace oofa
