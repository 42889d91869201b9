#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "oofa/design.hpp"
#include "oofa/indicator.hpp"
#include "oofa/latin.hpp"
#include "oofa/rng.hpp"

namespace oofa {

/// Search effort: restarts of the outer loop and exchange passes per phase.
struct SearchBudget {
  int restarts = 500;    // random re-assignments of the candidate squares
  int ls_passes = 50;    // between-block square exchanges per restart
  int row_passes = 50;   // between-block row exchanges per restart
  std::uint64_t seed = 20240501;
};

/// How one block of the result was assembled from the candidate sets.
struct BlockProvenance {
  std::vector<int> coas;                      // COA indices (1-based)
  std::vector<int> squares;                   // LS indices (1-based)
  std::vector<std::pair<int, int>> rows;      // (LS index, row 1..m)
};

struct ConstructionResult {
  BlockOofaDesign design;
  WordLengthPattern wlp;
  std::vector<BlockProvenance> blocks;
  long long iterations_used = 0;
  std::uint64_t seed = 0;
};

/**
 * Mutable state of the exchange search: the lambda part (whole COAs per
 * block) is fixed, while gamma square slots and delta row slots can be
 * swapped between blocks. The spectrum is maintained incrementally, so a
 * move costs O(rows changed * m^m * k); applying the same move again undoes
 * it exactly.
 */
class SearchState {
 public:
  enum class MoveKind { LsSwap, RowSwap };
  struct Move {
    MoveKind kind;
    int block_a, slot_a;
    int block_b, slot_b;
  };

  SearchState(const DesignShape& shape,
              std::shared_ptr<const std::vector<LatinSquare>> ls_set,
              const SpectrumAccumulator& base_with_lambda_part,
              std::vector<std::vector<int>> ls_slots,
              std::vector<std::vector<std::pair<int, int>>> row_slots);

  /// Builds the state for (m, k, n_B) with the given slot assignment; the
  /// lambda part is the first k*lambda COAs in index order.
  static SearchState create(int m, int k, int n_B,
                            std::vector<std::vector<int>> ls_slots,
                            std::vector<std::vector<std::pair<int, int>>> row_slots);

  /// Draws a random between-block exchange. Throws NoMoveAvailable when the
  /// requested kind has no swappable slots (e.g. LsSwap with gamma = 0).
  Move propose(MoveKind kind, Rng& rng) const;

  void apply(const Move& move);

  WordLengthPattern wlp() const { return acc_.wlp(); }
  Aberration compare_wlp(const WordLengthPattern& incumbent) const {
    return acc_.compare_wlp(incumbent);
  }

  const DesignShape& shape() const { return shape_; }
  const std::vector<std::vector<int>>& ls_slots() const { return ls_slots_; }
  const std::vector<std::vector<std::pair<int, int>>>& row_slots() const { return row_slots_; }
  const SpectrumAccumulator& accumulator() const { return acc_; }

  /// Design in canonical row order: per block the COA rows, then the gamma
  /// squares slot by slot, then the delta rows.
  BlockOofaDesign to_design() const;
  std::vector<BlockProvenance> provenance() const;

 private:
  DesignShape shape_;
  std::shared_ptr<const std::vector<LatinSquare>> ls_set_;
  std::vector<std::vector<int>> ls_slots_;                       // k x gamma, 1-based LS ids
  std::vector<std::vector<std::pair<int, int>>> row_slots_;      // k x delta, (LS id, row)
  SpectrumAccumulator acc_;
};

/**
 * Builds the aberration-optimal blocked design for (m, k, n_B) by stacking
 * candidate COAs and Latin squares, then randomized between-block exchange.
 *
 * The lambda part is deterministic (first k*lambda COAs, lambda per block in
 * index order). The remainder draws squares L_{k*lambda*(m-1)+1} .. upward,
 * ceil(k*(gamma*m+delta)/m) of them: per restart the k*gamma square slots
 * and k*delta row slots (rows taken from candidate squares left unused by
 * the square phase, each physical row at most once) are assigned uniformly
 * at random, then ls_passes square exchanges and row_passes row exchanges
 * are tried, keeping a move only when it strictly reduces aberration. The
 * best restart wins; ties keep the lowest restart index. Reproducible from
 * (m, k, n_B, budget); restarts use substream seed ^ restart_index and may
 * run in parallel.
 */
ConstructionResult construct(int m, int k, int n_B, const SearchBudget& budget = {},
                             int threads = 1);

/**
 * Word length pattern of the full blocked design (every permutation once per
 * block). Block contrasts sum to zero over balanced blocks, so every mixed
 * entry is exactly zero and the pure part equals the unblocked full design's
 * pattern. Throws SizeLimit for m > 7.
 */
WordLengthPattern wlp_of_full_design(int m, int k);

}  // namespace oofa
