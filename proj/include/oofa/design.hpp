#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace oofa {

/**
 * An order-of-addition design, optionally blocked and optionally carrying a
 * response column.
 *
 * Row i assigns component j the experimental position position(i, j); every
 * row is a permutation of 1..m (checked by validate(), not the constructor,
 * so malformed designs can be represented and reported). Blocked designs
 * carry labels 1..k with all blocks the same size. A design with blocked() ==
 * false behaves as k = 1 throughout. Immutable value type.
 */
class BlockOofaDesign {
 public:
  BlockOofaDesign(int m, int k, std::vector<int> positions, std::vector<int> blocks,
                  std::optional<std::vector<double>> response = std::nullopt);

  /// Unblocked design (k = 1, no block column on write).
  static BlockOofaDesign unblocked(int m, std::vector<int> positions,
                                   std::optional<std::vector<double>> response = std::nullopt);

  int m() const { return m_; }
  int k() const { return k_; }
  int runs() const { return static_cast<int>(blocks_.size()); }
  int block_size() const { return k_ ? runs() / k_ : 0; }
  bool blocked() const { return blocked_; }

  int position(int run, int component) const {
    return positions_[static_cast<std::size_t>(run) * m_ + component];
  }
  std::span<const int> row(int run) const {
    return {positions_.data() + static_cast<std::size_t>(run) * m_, static_cast<std::size_t>(m_)};
  }
  int block(int run) const { return blocks_[run]; }

  bool has_response() const { return response_.has_value(); }
  const std::vector<double>& response() const { return *response_; }

  BlockOofaDesign without_response() const;

  bool operator==(const BlockOofaDesign& other) const = default;

 private:
  int m_;
  int k_;
  bool blocked_;
  std::vector<int> positions_;  // runs x m, row-major
  std::vector<int> blocks_;     // runs
  std::optional<std::vector<double>> response_;
};

/// Decomposition of a block size as n_B = lambda*m(m-1) + gamma*m + delta.
struct DesignShape {
  int m = 0;
  int k = 0;
  int n_B = 0;
  int lambda = 0;
  int gamma = 0;
  int delta = 0;
};

/**
 * Greedy decomposition: maximal lambda, then maximal gamma, remainder delta
 * (0 <= delta < m). Throws InfeasibleSize unless 1 <= n_B <= floor(m!/k).
 */
DesignShape decompose_block_size(int m, int k, int n_B);

/**
 * Invariant check; returns one message per violation (empty when valid).
 * Checks each row is a permutation of 1..m, block labels lie in 1..k, and
 * all k blocks have equal size.
 */
std::vector<std::string> validate(const BlockOofaDesign& design);

/**
 * CSV with header Run,Z1..Zm[,B][,y]. The Run column is cosmetic: written
 * 1..n, ignored on read. Throws ParseError with a row/column location on
 * malformed input and ValidationError when the parsed design is invalid.
 * Designs with m > 9 are rejected (SizeLimit).
 */
BlockOofaDesign read_design_csv(const std::string& path);
void write_design_csv(const BlockOofaDesign& design, const std::string& path);
std::string design_to_csv(const BlockOofaDesign& design);

/// Full design: every permutation of 1..m once per block (k = 1: unblocked).
BlockOofaDesign full_design(int m, int k);

}  // namespace oofa
