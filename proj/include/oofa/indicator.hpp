#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "oofa/design.hpp"

namespace oofa {

/**
 * Dense coefficient array of the indicator function of a (blocked) design.
 *
 * Index t' = (t_1..t_m, s) combines one polynomial degree per position factor
 * (0..m-1) and the block-contrast degree s (0..k-1; always 0 when unblocked).
 * Storage is mixed radix: base m for the position digits (t_1 most
 * significant), base k for s (least significant). Coefficient a[0] is the
 * constant term n/(k*m^m). Full arrays are supported for m <= 7; larger m is
 * served by the streaming word-length-pattern path in wlp().
 */
struct IndicatorSpectrum {
  int m = 0;
  int k = 1;
  long long n = 0;         // run count of the design
  std::vector<double> a;   // m^m * k coefficients

  double a0() const { return a[0]; }
  std::size_t index_of(std::span<const int> t, int s) const;
  double coeff(std::span<const int> t, int s = 0) const;
};

/**
 * Aliasing/confounding severity vector. Entry l of pure() sums the squared
 * standardized coefficients of degree-l words without block involvement;
 * mixed() sums those with block involvement. The interleaved view orders
 * pure before mixed within each degree, which is what the aberration
 * comparison walks.
 */
class WordLengthPattern {
 public:
  WordLengthPattern(int m, bool blocked, std::vector<double> pure, std::vector<double> mixed);

  int m() const { return m_; }
  bool blocked() const { return blocked_; }
  const std::vector<double>& pure() const { return pure_; }
  const std::vector<double>& mixed() const { return mixed_; }

  std::size_t interleaved_size() const { return blocked_ ? 2 * pure_.size() : pure_.size(); }
  double interleaved(std::size_t i) const {
    if (!blocked_) return pure_[i];
    return (i % 2 == 0) ? pure_[i / 2] : mixed_[i / 2];
  }

 private:
  int m_;
  bool blocked_;
  std::vector<double> pure_;
  std::vector<double> mixed_;
};

enum class Aberration { Less, Equal, Greater };

/**
 * Lexicographic aberration comparison on the interleaved vectors; entries
 * closer than tol count as equal. Less means the first argument has less
 * aberration. Throws ShapeMismatch when m or blocked kind differ.
 */
Aberration compare(const WordLengthPattern& w1, const WordLengthPattern& w2, double tol = 1e-9);

namespace detail {
struct GroupMeta;
}

/**
 * Incremental spectrum that supports adding and removing rows in O(m^m * k)
 * per row, the workhorse behind exchange search. Word-length sums and
 * aberration comparisons read the current coefficients directly; compare_wlp
 * walks groups in interleaved order and stops at the first decisive entry.
 */
class SpectrumAccumulator {
 public:
  SpectrumAccumulator(int m, int k);  // throws SizeLimit for m > 7

  void add(std::span<const int> z, int b) { update(z, b, +1); }
  void remove(std::span<const int> z, int b) { update(z, b, -1); }

  int m() const { return m_; }
  int k() const { return k_; }
  long long runs() const { return n_; }
  double a0() const { return a_[0]; }
  const std::vector<double>& coefficients() const { return a_; }

  IndicatorSpectrum snapshot() const;
  WordLengthPattern wlp() const;  // throws EmptyDesign when no rows
  Aberration compare_wlp(const WordLengthPattern& incumbent, double tol = 1e-9) const;

 private:
  void update(std::span<const int> z, int b, int sign);

  int m_;
  int k_;
  long long n_ = 0;
  double weight_;  // 1 / (k * m^m)
  std::shared_ptr<const detail::GroupMeta> meta_;
  std::vector<double> a_;
  std::vector<double> pos_by_level_;  // (z-1)*m + u -> p_u(z)
  std::vector<double> blk_by_level_;  // (b-1)*k + s -> c_s(b)
  mutable std::vector<double> scratch_;
};

/// Full coefficient spectrum of a design. Throws SizeLimit for m > 7.
IndicatorSpectrum spectrum(const BlockOofaDesign& design);

/**
 * Value of the indicator function at a point: the replicate count of
 * (z, b) in the design. Throws InvalidPoint unless z is a permutation of
 * 1..m and b lies in 1..k.
 */
double evaluate(const IndicatorSpectrum& spec, std::span<const int> z, int b = 1);

/// One polynomial term X_{t'}(z') = prod_j p_{t_j}(z_j) * c_s(b).
double single_term(std::span<const int> z, int b, std::span<const int> t, int s, int m, int k);

/**
 * Spectrum after removing and adding rows, identical to recomputing from the
 * edited design but proportional in cost to the number of changed rows.
 * Each row is a (positions, block) pair.
 */
IndicatorSpectrum delta_spectrum(const IndicatorSpectrum& spec,
                                 std::span<const std::pair<std::vector<int>, int>> removed,
                                 std::span<const std::pair<std::vector<int>, int>> added);

/**
 * Word length pattern of a design. Dense computation for m <= 7; for m in
 * {8, 9} the coefficient array is never materialized and sums are streamed
 * in chunks. Throws EmptyDesign for designs without rows.
 */
WordLengthPattern wlp(const BlockOofaDesign& design);

WordLengthPattern wlp_from_spectrum(const IndicatorSpectrum& spec);

/// Streaming path with a fixed prefix depth, exposed so it can be checked
/// against the dense path at small m.
WordLengthPattern wlp_streaming(const BlockOofaDesign& design, int prefix_depth);

}  // namespace oofa
