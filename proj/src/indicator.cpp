#include "oofa/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>

#include "oofa/contrasts.hpp"
#include "oofa/errors.hpp"

namespace oofa {

namespace {

constexpr double kWordTol = 1e-9;  // |a| below kWordTol * a0 is not a word

std::size_t pow_size(int m, int e) {
  std::size_t s = 1;
  for (int i = 0; i < e; ++i) s *= static_cast<std::size_t>(m);
  return s;
}

void check_point(std::span<const int> z, int m) {
  if (static_cast<int>(z.size()) != m) {
    throw InvalidPoint("point has " + std::to_string(z.size()) + " coordinates, expected " +
                       std::to_string(m));
  }
  unsigned seen = 0;
  for (int v : z) {
    if (v < 1 || v > m || (seen & (1u << v))) {
      throw InvalidPoint("point is not a permutation of 1.." + std::to_string(m));
    }
    seen |= 1u << v;
  }
}

void check_block(int b, int k) {
  if (b < 1 || b > k) {
    throw InvalidPoint("block label " + std::to_string(b) + " outside 1.." + std::to_string(k));
  }
}

// Flattened contrast values indexed by level: out[(z-1)*q + u] = p_u(z).
std::vector<double> by_level(const ContrastTable& t) {
  const int q = t.size();
  std::vector<double> out(static_cast<std::size_t>(q) * q);
  for (int z = 1; z <= q; ++z) {
    for (int u = 0; u < q; ++u) out[static_cast<std::size_t>(z - 1) * q + u] = t.at(u, z);
  }
  return out;
}

}  // namespace

namespace detail {

// Precomputed interleaved-group classification of spectrum indices for one
// (m, k): group 2(l-1) collects degree-l indices with s = 0, group 2(l-1)+1
// those with s > 0 (unblocked: group l-1). Degree-0 indices (the constant
// term and the pure block words, which vanish for balanced blocks) are
// excluded. `ordered` lists indices sorted by group so word-length sums can
// walk groups in interleaved order and stop early.
struct GroupMeta {
  int m = 0;
  int k = 1;
  int n_groups = 0;
  std::vector<std::int32_t> ordered;
  std::vector<std::size_t> offsets;  // n_groups + 1 entries into ordered
};

namespace {

std::shared_ptr<const GroupMeta> build_group_meta(int m, int k) {
  auto meta = std::make_shared<GroupMeta>();
  meta->m = m;
  meta->k = k;
  const bool blocked = k > 1;
  const int degrees = m * (m - 1);
  meta->n_groups = blocked ? 2 * degrees : degrees;

  const std::size_t npos = pow_size(m, m);
  const std::size_t total = npos * static_cast<std::size_t>(k);
  std::vector<std::int32_t> group(total, -1);
  std::vector<std::size_t> count(meta->n_groups, 0);

  std::vector<int> digits(m, 0);
  int deg = 0;
  for (std::size_t i = 0; i < npos; ++i) {
    if (deg > 0) {
      for (int s = 0; s < k; ++s) {
        const int g = blocked ? 2 * (deg - 1) + (s > 0 ? 1 : 0) : deg - 1;
        group[i * k + s] = g;
        ++count[g];
      }
    }
    // odometer over base-m digits, least significant last
    for (int j = m - 1; j >= 0; --j) {
      if (++digits[j] < m) {
        ++deg;
        break;
      }
      deg -= m - 1;
      digits[j] = 0;
    }
  }

  meta->offsets.assign(meta->n_groups + 1, 0);
  for (int g = 0; g < meta->n_groups; ++g) meta->offsets[g + 1] = meta->offsets[g] + count[g];
  meta->ordered.resize(meta->offsets.back());
  std::vector<std::size_t> fill(meta->offsets.begin(), meta->offsets.end() - 1);
  for (std::size_t i = 0; i < total; ++i) {
    if (group[i] >= 0) meta->ordered[fill[group[i]]++] = static_cast<std::int32_t>(i);
  }
  return meta;
}

std::shared_ptr<const GroupMeta> group_meta(int m, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const GroupMeta>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{m, k}];
  if (!slot) slot = build_group_meta(m, k);
  return slot;
}

}  // namespace
}  // namespace detail

std::size_t IndicatorSpectrum::index_of(std::span<const int> t, int s) const {
  std::size_t idx = 0;
  for (int d : t) idx = idx * m + static_cast<std::size_t>(d);
  return idx * k + static_cast<std::size_t>(s);
}

double IndicatorSpectrum::coeff(std::span<const int> t, int s) const {
  return a[index_of(t, s)];
}

WordLengthPattern::WordLengthPattern(int m, bool blocked, std::vector<double> pure,
                                     std::vector<double> mixed)
    : m_(m), blocked_(blocked), pure_(std::move(pure)), mixed_(std::move(mixed)) {}

Aberration compare(const WordLengthPattern& w1, const WordLengthPattern& w2, double tol) {
  if (w1.m() != w2.m() || w1.blocked() != w2.blocked()) {
    throw ShapeMismatch("word length patterns have different shape or kind");
  }
  for (std::size_t i = 0; i < w1.interleaved_size(); ++i) {
    const double d = w1.interleaved(i) - w2.interleaved(i);
    if (d < -tol) return Aberration::Less;
    if (d > tol) return Aberration::Greater;
  }
  return Aberration::Equal;
}

SpectrumAccumulator::SpectrumAccumulator(int m, int k) : m_(m), k_(k) {
  if (m < 2) throw SizeLimit("spectrum needs m >= 2");
  if (m > 7) {
    throw SizeLimit("dense spectrum supports m <= 7 (use the streaming wlp path for m in {8,9})");
  }
  const std::size_t npos = pow_size(m, m);
  weight_ = 1.0 / (static_cast<double>(k) * static_cast<double>(npos));
  meta_ = detail::group_meta(m, k);
  a_.assign(npos * static_cast<std::size_t>(k), 0.0);
  pos_by_level_ = by_level(contrast_table(m));
  blk_by_level_ = k > 1 ? by_level(block_contrast_table(k)) : std::vector<double>{1.0};
  scratch_.resize(npos);
}

void SpectrumAccumulator::update(std::span<const int> z, int b, int sign) {
  // tensor expansion of the row's contrast values, in place back to front
  scratch_[0] = 1.0;
  std::size_t len = 1;
  for (int j = 0; j < m_; ++j) {
    const double* c = pos_by_level_.data() + static_cast<std::size_t>(z[j] - 1) * m_;
    for (std::size_t i = len; i-- > 0;) {
      const double v = scratch_[i];
      double* out = scratch_.data() + i * m_;
      for (int u = 0; u < m_; ++u) out[u] = v * c[u];
    }
    len *= m_;
  }
  const double* cb = blk_by_level_.data() + static_cast<std::size_t>(b - 1) * k_;
  const double w = sign * weight_;
  if (k_ == 1) {
    for (std::size_t i = 0; i < len; ++i) a_[i] += scratch_[i] * w;
  } else {
    for (std::size_t i = 0; i < len; ++i) {
      const double v = scratch_[i] * w;
      double* out = a_.data() + i * k_;
      for (int s = 0; s < k_; ++s) out[s] += v * cb[s];
    }
  }
  n_ += sign;
}

IndicatorSpectrum SpectrumAccumulator::snapshot() const {
  IndicatorSpectrum s;
  s.m = m_;
  s.k = k_;
  s.n = n_;
  s.a = a_;
  return s;
}

WordLengthPattern SpectrumAccumulator::wlp() const {
  if (n_ == 0) throw EmptyDesign("word length pattern of an empty design is undefined");
  const double a0 = a_[0];
  const double cut = kWordTol * std::abs(a0);
  const double inv2 = 1.0 / (a0 * a0);
  const int degrees = m_ * (m_ - 1);
  std::vector<double> pure(degrees, 0.0), mixed;
  if (k_ > 1) mixed.assign(degrees, 0.0);
  for (int g = 0; g < meta_->n_groups; ++g) {
    double sum = 0.0;
    for (std::size_t i = meta_->offsets[g]; i < meta_->offsets[g + 1]; ++i) {
      const double v = a_[meta_->ordered[i]];
      if (std::abs(v) > cut) sum += v * v;
    }
    sum *= inv2;
    if (k_ > 1) {
      (g % 2 == 0 ? pure : mixed)[g / 2] = sum;
    } else {
      pure[g] = sum;
    }
  }
  return WordLengthPattern(m_, k_ > 1, std::move(pure), std::move(mixed));
}

Aberration SpectrumAccumulator::compare_wlp(const WordLengthPattern& incumbent,
                                            double tol) const {
  if (n_ == 0) throw EmptyDesign("word length pattern of an empty design is undefined");
  if (incumbent.m() != m_ || incumbent.blocked() != (k_ > 1)) {
    throw ShapeMismatch("incumbent word length pattern has different shape or kind");
  }
  const double a0 = a_[0];
  const double cut = kWordTol * std::abs(a0);
  const double inv2 = 1.0 / (a0 * a0);
  for (int g = 0; g < meta_->n_groups; ++g) {
    double sum = 0.0;
    for (std::size_t i = meta_->offsets[g]; i < meta_->offsets[g + 1]; ++i) {
      const double v = a_[meta_->ordered[i]];
      if (std::abs(v) > cut) sum += v * v;
    }
    const double d = sum * inv2 - incumbent.interleaved(g);
    if (d < -tol) return Aberration::Less;
    if (d > tol) return Aberration::Greater;
  }
  return Aberration::Equal;
}

IndicatorSpectrum spectrum(const BlockOofaDesign& design) {
  SpectrumAccumulator acc(design.m(), design.k());
  for (int i = 0; i < design.runs(); ++i) acc.add(design.row(i), design.block(i));
  return acc.snapshot();
}

double evaluate(const IndicatorSpectrum& spec, std::span<const int> z, int b) {
  check_point(z, spec.m);
  check_block(b, spec.k);
  const ContrastTable pos = contrast_table(spec.m);

  // contract the block mode, then position digits from the last one inward
  std::vector<double> buf;
  const double* src = spec.a.data();
  std::size_t len = spec.a.size();
  if (spec.k > 1) {
    const ContrastTable blk = block_contrast_table(spec.k);
    buf.resize(len / spec.k);
    for (std::size_t i = 0; i < buf.size(); ++i) {
      double acc = 0.0;
      for (int s = 0; s < spec.k; ++s) acc += src[i * spec.k + s] * blk.at(s, b);
      buf[i] = acc;
    }
  } else {
    buf.assign(src, src + len);
  }
  len = buf.size();
  for (int j = spec.m - 1; j >= 0; --j) {
    len /= spec.m;
    for (std::size_t i = 0; i < len; ++i) {
      double acc = 0.0;
      for (int u = 0; u < spec.m; ++u) acc += buf[i * spec.m + u] * pos.at(u, z[j]);
      buf[i] = acc;
    }
  }
  return buf[0];
}

double single_term(std::span<const int> z, int b, std::span<const int> t, int s, int m, int k) {
  check_point(z, m);
  check_block(b, k);
  if (static_cast<int>(t.size()) != m) {
    throw InvalidPoint("term index has " + std::to_string(t.size()) + " digits, expected " +
                       std::to_string(m));
  }
  for (int d : t) {
    if (d < 0 || d >= m) throw InvalidPoint("term degree outside 0.." + std::to_string(m - 1));
  }
  if (s < 0 || s >= k) throw InvalidPoint("block degree outside 0.." + std::to_string(k - 1));
  const ContrastTable pos = contrast_table(m);
  double prod = 1.0;
  for (int j = 0; j < m; ++j) prod *= pos.at(t[j], z[j]);
  if (k > 1) prod *= block_contrast_table(k).at(s, b);
  return prod;
}

IndicatorSpectrum delta_spectrum(const IndicatorSpectrum& spec,
                                 std::span<const std::pair<std::vector<int>, int>> removed,
                                 std::span<const std::pair<std::vector<int>, int>> added) {
  SpectrumAccumulator acc(spec.m, spec.k);
  for (const auto& [z, b] : removed) {
    check_point(z, spec.m);
    check_block(b, spec.k);
  }
  for (const auto& [z, b] : added) {
    check_point(z, spec.m);
    check_block(b, spec.k);
  }
  IndicatorSpectrum out = spec;
  for (const auto& [z, b] : removed) {
    acc.remove(z, b);
    --out.n;
  }
  for (const auto& [z, b] : added) {
    acc.add(z, b);
    ++out.n;
  }
  const std::vector<double>& d = acc.coefficients();
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += d[i];
  return out;
}

WordLengthPattern wlp_from_spectrum(const IndicatorSpectrum& spec) {
  if (spec.n == 0) throw EmptyDesign("word length pattern of an empty design is undefined");
  const auto meta = detail::group_meta(spec.m, spec.k);
  const double a0 = spec.a0();
  const double cut = kWordTol * std::abs(a0);
  const double inv2 = 1.0 / (a0 * a0);
  const int degrees = spec.m * (spec.m - 1);
  std::vector<double> pure(degrees, 0.0), mixed;
  if (spec.k > 1) mixed.assign(degrees, 0.0);
  for (int g = 0; g < meta->n_groups; ++g) {
    double sum = 0.0;
    for (std::size_t i = meta->offsets[g]; i < meta->offsets[g + 1]; ++i) {
      const double v = spec.a[meta->ordered[i]];
      if (std::abs(v) > cut) sum += v * v;
    }
    sum *= inv2;
    if (spec.k > 1) {
      (g % 2 == 0 ? pure : mixed)[g / 2] = sum;
    } else {
      pure[g] = sum;
    }
  }
  return WordLengthPattern(spec.m, spec.k > 1, std::move(pure), std::move(mixed));
}

WordLengthPattern wlp_streaming(const BlockOofaDesign& design, int prefix_depth) {
  const int m = design.m();
  const int k = design.k();
  const int n = design.runs();
  if (n == 0) throw EmptyDesign("word length pattern of an empty design is undefined");
  if (prefix_depth < 1 || prefix_depth >= m) {
    throw SizeLimit("streaming prefix depth must lie in 1..m-1");
  }
  const ContrastTable pos = contrast_table(m);
  const std::vector<double> pos_lv = by_level(pos);
  const std::vector<double> blk_lv =
      k > 1 ? by_level(block_contrast_table(k)) : std::vector<double>{1.0};

  const int suf_digits = m - prefix_depth;
  const std::size_t suf_size = pow_size(m, suf_digits);
  const std::size_t npre = pow_size(m, prefix_depth);
  const double weight = 1.0 / (static_cast<double>(k) * static_cast<double>(pow_size(m, m)));
  const double a0 = static_cast<double>(n) * weight;
  const double cut = kWordTol * a0;
  const double inv2 = 1.0 / (a0 * a0);

  // degree of each suffix index
  std::vector<std::uint8_t> suf_deg(suf_size, 0);
  {
    std::vector<int> digits(suf_digits, 0);
    int deg = 0;
    for (std::size_t i = 0; i < suf_size; ++i) {
      suf_deg[i] = static_cast<std::uint8_t>(deg);
      for (int j = suf_digits - 1; j >= 0; --j) {
        if (++digits[j] < m) {
          ++deg;
          break;
        }
        deg -= m - 1;
        digits[j] = 0;
      }
    }
  }

  const int degrees = m * (m - 1);
  std::vector<double> pure(degrees, 0.0), mixed;
  if (k > 1) mixed.assign(degrees, 0.0);

  std::vector<double> chunk(suf_size * static_cast<std::size_t>(k));
  std::vector<double> tensor(suf_size);
  std::vector<int> pre(prefix_depth, 0);
  int pre_deg = 0;
  for (std::size_t pi = 0; pi < npre; ++pi) {
    std::fill(chunk.begin(), chunk.end(), 0.0);
    for (int r = 0; r < n; ++r) {
      const auto z = design.row(r);
      double pf = weight;
      for (int j = 0; j < prefix_depth; ++j) {
        pf *= pos_lv[static_cast<std::size_t>(z[j] - 1) * m + pre[j]];
      }
      if (pf == 0.0) continue;
      // suffix tensor for this row
      tensor[0] = 1.0;
      std::size_t len = 1;
      for (int j = prefix_depth; j < m; ++j) {
        const double* c = pos_lv.data() + static_cast<std::size_t>(z[j] - 1) * m;
        for (std::size_t i = len; i-- > 0;) {
          const double v = tensor[i];
          double* out = tensor.data() + i * m;
          for (int u = 0; u < m; ++u) out[u] = v * c[u];
        }
        len *= m;
      }
      const double* cb = blk_lv.data() + static_cast<std::size_t>(design.block(r) - 1) * k;
      for (std::size_t i = 0; i < suf_size; ++i) {
        const double v = tensor[i] * pf;
        double* out = chunk.data() + i * k;
        for (int s = 0; s < k; ++s) out[s] += v * cb[s];
      }
    }
    for (std::size_t i = 0; i < suf_size; ++i) {
      const int deg = pre_deg + suf_deg[i];
      if (deg == 0) continue;
      for (int s = 0; s < k; ++s) {
        const double v = chunk[i * k + s];
        if (std::abs(v) > cut) {
          (k > 1 ? (s == 0 ? pure : mixed) : pure)[deg - 1] += v * v * inv2;
        }
      }
    }
    // advance prefix odometer
    for (int j = prefix_depth - 1; j >= 0; --j) {
      if (++pre[j] < m) {
        ++pre_deg;
        break;
      }
      pre_deg -= m - 1;
      pre[j] = 0;
    }
  }
  return WordLengthPattern(m, k > 1, std::move(pure), std::move(mixed));
}

WordLengthPattern wlp(const BlockOofaDesign& design) {
  if (design.runs() == 0) throw EmptyDesign("word length pattern of an empty design is undefined");
  if (design.m() <= 7) {
    SpectrumAccumulator acc(design.m(), design.k());
    for (int i = 0; i < design.runs(); ++i) acc.add(design.row(i), design.block(i));
    return acc.wlp();
  }
  if (design.m() <= 9) return wlp_streaming(design, 3);
  throw SizeLimit("word length pattern supports m <= 9");
}

}  // namespace oofa
