#include "oofa/constructor.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "oofa/errors.hpp"
#include "oofa/galois.hpp"
#include "oofa/parallel.hpp"

namespace oofa {

namespace {

long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::span<const int> ls_row(const LatinSquare& sq, int row) {
  return {sq.cells.data() + static_cast<std::size_t>(row) * sq.m, static_cast<std::size_t>(sq.m)};
}

}  // namespace

SearchState::SearchState(const DesignShape& shape,
                         std::shared_ptr<const std::vector<LatinSquare>> ls_set,
                         const SpectrumAccumulator& base_with_lambda_part,
                         std::vector<std::vector<int>> ls_slots,
                         std::vector<std::vector<std::pair<int, int>>> row_slots)
    : shape_(shape),
      ls_set_(std::move(ls_set)),
      ls_slots_(std::move(ls_slots)),
      row_slots_(std::move(row_slots)),
      acc_(base_with_lambda_part) {
  const int m = shape_.m;
  for (int b = 0; b < shape_.k; ++b) {
    for (int id : ls_slots_[b]) {
      const LatinSquare& sq = (*ls_set_)[id - 1];
      for (int r = 0; r < m; ++r) acc_.add(ls_row(sq, r), b + 1);
    }
    for (const auto& [id, row] : row_slots_[b]) {
      acc_.add(ls_row((*ls_set_)[id - 1], row - 1), b + 1);
    }
  }
}

SearchState SearchState::create(int m, int k, int n_B,
                                std::vector<std::vector<int>> ls_slots,
                                std::vector<std::vector<std::pair<int, int>>> row_slots) {
  const DesignShape shape = decompose_block_size(m, k, n_B);
  auto ls = std::make_shared<const std::vector<LatinSquare>>(full_ls_set(make_field(m)));
  const auto coas = coa_set(*ls);
  SpectrumAccumulator base(m, k);
  for (int b = 0; b < k; ++b) {
    for (int c = 0; c < shape.lambda; ++c) {
      const auto& coa = coas[static_cast<std::size_t>(b) * shape.lambda + c];
      for (int r = 0; r < coa.run_count(); ++r) {
        base.add({coa.rows.data() + static_cast<std::size_t>(r) * m, static_cast<std::size_t>(m)},
                 b + 1);
      }
    }
  }
  return SearchState(shape, std::move(ls), base, std::move(ls_slots), std::move(row_slots));
}

SearchState::Move SearchState::propose(MoveKind kind, Rng& rng) const {
  const int k = shape_.k;
  const int slots = (kind == MoveKind::LsSwap) ? shape_.gamma : shape_.delta;
  if (k < 2 || slots < 1) {
    throw NoMoveAvailable(kind == MoveKind::LsSwap
                              ? "no square slots to exchange between blocks"
                              : "no row slots to exchange between blocks");
  }
  Move mv;
  mv.kind = kind;
  mv.block_a = static_cast<int>(rng.next_below(k));
  mv.block_b = static_cast<int>(rng.next_below(k - 1));
  if (mv.block_b >= mv.block_a) ++mv.block_b;
  mv.slot_a = static_cast<int>(rng.next_below(slots));
  mv.slot_b = static_cast<int>(rng.next_below(slots));
  return mv;
}

void SearchState::apply(const Move& mv) {
  const int m = shape_.m;
  if (mv.kind == MoveKind::LsSwap) {
    int& a = ls_slots_[mv.block_a][mv.slot_a];
    int& b = ls_slots_[mv.block_b][mv.slot_b];
    const LatinSquare& sa = (*ls_set_)[a - 1];
    const LatinSquare& sb = (*ls_set_)[b - 1];
    for (int r = 0; r < m; ++r) {
      acc_.remove(ls_row(sa, r), mv.block_a + 1);
      acc_.add(ls_row(sa, r), mv.block_b + 1);
      acc_.remove(ls_row(sb, r), mv.block_b + 1);
      acc_.add(ls_row(sb, r), mv.block_a + 1);
    }
    std::swap(a, b);
  } else {
    auto& a = row_slots_[mv.block_a][mv.slot_a];
    auto& b = row_slots_[mv.block_b][mv.slot_b];
    acc_.remove(ls_row((*ls_set_)[a.first - 1], a.second - 1), mv.block_a + 1);
    acc_.add(ls_row((*ls_set_)[a.first - 1], a.second - 1), mv.block_b + 1);
    acc_.remove(ls_row((*ls_set_)[b.first - 1], b.second - 1), mv.block_b + 1);
    acc_.add(ls_row((*ls_set_)[b.first - 1], b.second - 1), mv.block_a + 1);
    std::swap(a, b);
  }
}

BlockOofaDesign SearchState::to_design() const {
  const int m = shape_.m;
  const int k = shape_.k;
  std::vector<int> positions;
  std::vector<int> blocks;
  positions.reserve(static_cast<std::size_t>(shape_.n_B) * k * m);
  blocks.reserve(static_cast<std::size_t>(shape_.n_B) * k);
  const auto coas = coa_set(*ls_set_);
  for (int b = 0; b < k; ++b) {
    for (int c = 0; c < shape_.lambda; ++c) {
      const auto& coa = coas[static_cast<std::size_t>(b) * shape_.lambda + c];
      positions.insert(positions.end(), coa.rows.begin(), coa.rows.end());
      blocks.insert(blocks.end(), coa.run_count(), b + 1);
    }
    for (int id : ls_slots_[b]) {
      const LatinSquare& sq = (*ls_set_)[id - 1];
      positions.insert(positions.end(), sq.cells.begin(), sq.cells.end());
      blocks.insert(blocks.end(), m, b + 1);
    }
    for (const auto& [id, row] : row_slots_[b]) {
      const auto r = ls_row((*ls_set_)[id - 1], row - 1);
      positions.insert(positions.end(), r.begin(), r.end());
      blocks.push_back(b + 1);
    }
  }
  return BlockOofaDesign(m, k, std::move(positions), std::move(blocks));
}

std::vector<BlockProvenance> SearchState::provenance() const {
  std::vector<BlockProvenance> out(shape_.k);
  for (int b = 0; b < shape_.k; ++b) {
    for (int c = 0; c < shape_.lambda; ++c) out[b].coas.push_back(b * shape_.lambda + c + 1);
    out[b].squares = ls_slots_[b];
    out[b].rows = row_slots_[b];
  }
  return out;
}

WordLengthPattern wlp_of_full_design(int m, int k) {
  if (m > 7) throw SizeLimit("full-design word length pattern supports m <= 7");
  SpectrumAccumulator acc(m, 1);
  const BlockOofaDesign full = full_design(m, 1);
  for (int i = 0; i < full.runs(); ++i) acc.add(full.row(i), 1);
  WordLengthPattern pure = acc.wlp();
  if (k <= 1) return pure;
  std::vector<double> mixed(pure.pure().size(), 0.0);
  return WordLengthPattern(m, true, pure.pure(), std::move(mixed));
}

ConstructionResult construct(int m, int k, int n_B, const SearchBudget& budget, int threads) {
  if (m <= 3) {
    throw UnsupportedOrder("construction requires m > 3 with m prime or in {4, 8, 9}");
  }
  if (k < 2) throw InfeasibleSize("a blocked construction needs k >= 2 blocks");
  const GaloisField field = make_field(m);
  const DesignShape shape = decompose_block_size(m, k, n_B);
  const long long n_coas = factorial(m - 2);

  const long long klambda = static_cast<long long>(k) * shape.lambda;
  if (klambda > n_coas) {
    throw CandidateExhausted("need " + std::to_string(klambda) + " COAs but only " +
                             std::to_string(n_coas) + " exist for m = " + std::to_string(m));
  }
  const int unit = m * (m - 1);
  const int remainder = shape.gamma * m + shape.delta;
  const long long cover = klambda + (static_cast<long long>(k) * remainder + unit - 1) / unit;
  if (cover > n_coas) {
    throw CandidateExhausted("candidate squares would span " + std::to_string(cover) +
                             " COAs but only " + std::to_string(n_coas) + " exist");
  }

  auto ls = std::make_shared<const std::vector<LatinSquare>>(full_ls_set(field));
  const auto coas = coa_set(*ls);

  SpectrumAccumulator base(m, k);
  for (int b = 0; b < k; ++b) {
    for (int c = 0; c < shape.lambda; ++c) {
      const auto& coa = coas[static_cast<std::size_t>(b) * shape.lambda + c];
      for (int r = 0; r < coa.run_count(); ++r) {
        base.add({coa.rows.data() + static_cast<std::size_t>(r) * m, static_cast<std::size_t>(m)},
                 b + 1);
      }
    }
  }

  ConstructionResult result{BlockOofaDesign(m, k, {}, {}), WordLengthPattern(m, true, {}, {}),
                            {}, 0, budget.seed};

  if (shape.gamma == 0 && shape.delta == 0) {
    SearchState st(shape, ls, base, std::vector<std::vector<int>>(k),
                   std::vector<std::vector<std::pair<int, int>>>(k));
    result.design = st.to_design();
    result.wlp = st.wlp();
    result.blocks = st.provenance();
    return result;
  }

  // candidate squares for the gamma/delta part
  const int first = static_cast<int>(klambda) * (m - 1) + 1;
  const int n_cand = (k * remainder + m - 1) / m;
  std::vector<int> candidates(n_cand);
  std::iota(candidates.begin(), candidates.end(), first);

  struct RestartResult {
    WordLengthPattern wlp{0, true, {}, {}};
    std::vector<std::vector<int>> ls_slots;
    std::vector<std::vector<std::pair<int, int>>> row_slots;
  };
  std::vector<RestartResult> outcomes(budget.restarts);

  parallel_for(0, budget.restarts, threads, [&](int restart) {
    Rng rng = Rng(budget.seed).substream(static_cast<std::uint64_t>(restart));

    // random assignment of the k*gamma squares (Fisher-Yates shuffle of the
    // candidate list; the unused tail feeds the row pool)
    std::vector<int> perm = candidates;
    for (std::size_t i = 0; i + 1 < perm.size(); ++i) {
      const std::size_t j = i + rng.next_below(perm.size() - i);
      std::swap(perm[i], perm[j]);
    }
    std::vector<std::vector<int>> ls_slots(k);
    for (int b = 0; b < k; ++b) {
      ls_slots[b].assign(perm.begin() + static_cast<std::size_t>(b) * shape.gamma,
                         perm.begin() + static_cast<std::size_t>(b + 1) * shape.gamma);
    }

    // row pool: all rows of the squares not used by the square phase
    std::vector<std::pair<int, int>> pool;
    for (std::size_t i = static_cast<std::size_t>(k) * shape.gamma; i < perm.size(); ++i) {
      for (int r = 1; r <= m; ++r) pool.emplace_back(perm[i], r);
    }
    const int need = k * shape.delta;
    for (int i = 0; i < need; ++i) {
      const std::size_t j = i + rng.next_below(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    std::vector<std::vector<std::pair<int, int>>> row_slots(k);
    for (int b = 0; b < k; ++b) {
      row_slots[b].assign(pool.begin() + static_cast<std::size_t>(b) * shape.delta,
                          pool.begin() + static_cast<std::size_t>(b + 1) * shape.delta);
    }

    SearchState st(shape, ls, base, std::move(ls_slots), std::move(row_slots));
    WordLengthPattern incumbent = st.wlp();
    if (shape.gamma > 0) {
      for (int pass = 0; pass < budget.ls_passes; ++pass) {
        const auto mv = st.propose(SearchState::MoveKind::LsSwap, rng);
        st.apply(mv);
        if (st.compare_wlp(incumbent) == Aberration::Less) {
          incumbent = st.wlp();
        } else {
          st.apply(mv);
        }
      }
    }
    if (shape.delta > 0) {
      for (int pass = 0; pass < budget.row_passes; ++pass) {
        const auto mv = st.propose(SearchState::MoveKind::RowSwap, rng);
        st.apply(mv);
        if (st.compare_wlp(incumbent) == Aberration::Less) {
          incumbent = st.wlp();
        } else {
          st.apply(mv);
        }
      }
    }
    outcomes[restart] = RestartResult{std::move(incumbent), st.ls_slots(), st.row_slots()};
  });

  int best = 0;
  for (int r = 1; r < budget.restarts; ++r) {
    if (compare(outcomes[r].wlp, outcomes[best].wlp) == Aberration::Less) best = r;
  }

  SearchState winner(shape, ls, base, outcomes[best].ls_slots, outcomes[best].row_slots);
  result.design = winner.to_design();
  result.wlp = winner.wlp();
  result.blocks = winner.provenance();
  result.iterations_used = static_cast<long long>(budget.restarts) *
                           ((shape.gamma > 0 ? budget.ls_passes : 0) +
                            (shape.delta > 0 ? budget.row_passes : 0));
  return result;
}

}  // namespace oofa
