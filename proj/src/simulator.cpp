#include "oofa/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "oofa/contrasts.hpp"
#include "oofa/errors.hpp"
#include "oofa/parallel.hpp"
#include "oofa/rng.hpp"

namespace oofa {

SimulationReport simulate(const SimConfig& config, int threads) {
  const BlockOofaDesign& d = config.design;
  if (!d.blocked()) throw ConfigInvalid("the simulation study needs a blocked design");
  if (config.reps < 1) throw ConfigInvalid("reps must be >= 1");
  if (!(config.sigma_eps > 0.0)) throw ConfigInvalid("sigma_eps must be positive");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ConfigInvalid("alpha must lie in (0,1)");

  const ModelMatrix mm = model_matrix(d, ModelOrder::SecondOrder);
  const int n = mm.rows();
  const int P = mm.cols();
  const int first_pos = 1 + mm.block_columns();
  const int n_pos = P - first_pos;
  const int p = config.active_position_effects;
  if (p < 0 || p > n_pos) {
    throw ConfigInvalid("active position effects must lie in 0.." + std::to_string(n_pos));
  }

  SimulationReport report;
  report.n_active = mm.block_columns() + p;
  report.n_inactive = n_pos - p;
  report.per_rep_power.assign(config.reps, 0.0);
  report.per_rep_type1.assign(config.reps, 0.0);

  const Rng base(config.seed);
  parallel_for(0, config.reps, threads, [&](int rep) {
    Rng rng = base.substream(static_cast<std::uint64_t>(rep));

    // draw the active position terms (partial Fisher-Yates)
    std::vector<int> pos_cols(n_pos);
    std::iota(pos_cols.begin(), pos_cols.end(), first_pos);
    for (int i = 0; i < p; ++i) {
      const std::size_t j = i + rng.next_below(pos_cols.size() - i);
      std::swap(pos_cols[i], pos_cols[j]);
    }

    // effect sizes in units of sigma: magnitude U[2,4], random sign
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(P);
    for (int i = 0; i < p; ++i) {
      const double mag = 2.0 + 2.0 * rng.next_double();
      beta(pos_cols[i]) = rng.next_below(2) ? -mag : mag;
    }
    for (int s = 1; s <= mm.block_columns(); ++s) {
      const double mag = 2.0 + 2.0 * rng.next_double();
      beta(s) = rng.next_below(2) ? -mag : mag;
    }

    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y(i) = rng.next_normal();
    y += mm.X * beta;
    y *= config.sigma_eps;

    const ForwardFit fit = forward_select(mm, y, config.alpha);

    int true_pos = 0, false_pos = 0;
    for (int col : fit.selected) {
      if (col < first_pos) {
        ++true_pos;  // block effects are always active
      } else if (std::find(pos_cols.begin(), pos_cols.begin() + p, col) !=
                 pos_cols.begin() + p) {
        ++true_pos;
      } else {
        ++false_pos;
      }
    }
    report.per_rep_power[rep] =
        report.n_active > 0 ? static_cast<double>(true_pos) / report.n_active : 0.0;
    report.per_rep_type1[rep] =
        report.n_inactive > 0 ? static_cast<double>(false_pos) / report.n_inactive : 0.0;
  });

  report.power = std::accumulate(report.per_rep_power.begin(), report.per_rep_power.end(), 0.0) /
                 config.reps;
  report.type1 = std::accumulate(report.per_rep_type1.begin(), report.per_rep_type1.end(), 0.0) /
                 config.reps;
  return report;
}

std::vector<double> case_study_responses(const BlockOofaDesign& design,
                                         const EffectMap& position_model,
                                         const EffectMap& block_effects, double sigma_eps,
                                         std::uint64_t seed) {
  const ModelMatrix mm = model_matrix(design, ModelOrder::SecondOrder);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(mm.rows());
  for (const auto& [label, coef] : position_model) y += coef * mm.X.col(mm.column_of(label));
  for (const auto& [label, coef] : block_effects) y += coef * mm.X.col(mm.column_of(label));
  Rng rng(seed);
  std::vector<double> out(mm.rows());
  for (int i = 0; i < mm.rows(); ++i) out[i] = y(i) + sigma_eps * rng.next_normal();
  return out;
}

namespace {

// Parsed position term: factors (component, degree).
std::vector<std::pair<int, int>> parse_position_label(const std::string& label, int m) {
  std::vector<std::pair<int, int>> factors;
  std::size_t i = 0;
  while (i < label.size()) {
    if (label[i] != 'Z') throw UnknownLabel("cannot parse effect label '" + label + "'");
    ++i;
    std::size_t j = i;
    while (j < label.size() && std::isdigit(static_cast<unsigned char>(label[j]))) ++j;
    if (j == i || j >= label.size() || label[j] != '^') {
      throw UnknownLabel("cannot parse effect label '" + label + "'");
    }
    const int comp = std::stoi(label.substr(i, j - i));
    if (comp < 1 || comp > m) throw UnknownLabel("component out of range in '" + label + "'");
    ++j;
    int degree = 0;
    if (j < label.size() && label[j] == 'l') {
      degree = 1;
      ++j;
    } else if (j < label.size() && label[j] == 'q') {
      degree = 2;
      ++j;
    } else {
      std::size_t e = j;
      while (e < label.size() && std::isdigit(static_cast<unsigned char>(label[e]))) ++e;
      if (e == j) throw UnknownLabel("cannot parse effect label '" + label + "'");
      degree = std::stoi(label.substr(j, e - j));
      j = e;
    }
    if (degree < 1 || degree >= m) throw UnknownLabel("degree out of range in '" + label + "'");
    factors.emplace_back(comp, degree);
    i = j;
  }
  return factors;
}

}  // namespace

std::vector<std::vector<int>> argmax_sequences(const EffectMap& effects, int m, double tol) {
  const ContrastTable pos = contrast_table(m);
  std::vector<std::pair<double, std::vector<std::pair<int, int>>>> terms;
  for (const auto& [label, coef] : effects) {
    if (label == "Intercept" || label.rfind("B^", 0) == 0) continue;  // held fixed
    terms.emplace_back(coef, parse_position_label(label, m));
  }

  auto predict = [&](const std::vector<int>& z) {
    double total = 0.0;
    for (const auto& [coef, factors] : terms) {
      double prod = coef;
      for (const auto& [comp, degree] : factors) prod *= pos.at(degree, z[comp - 1]);
      total += prod;
    }
    return total;
  };

  std::vector<int> z(m);
  std::iota(z.begin(), z.end(), 1);
  double best = -std::numeric_limits<double>::infinity();
  do {
    best = std::max(best, predict(z));
  } while (std::next_permutation(z.begin(), z.end()));

  std::vector<std::vector<int>> out;
  std::iota(z.begin(), z.end(), 1);
  do {
    if (predict(z) >= best - tol) out.push_back(z);
  } while (std::next_permutation(z.begin(), z.end()));
  return out;
}

EffectMap effect_map(const ForwardFit& fit) {
  EffectMap out;
  for (std::size_t i = 0; i < fit.labels.size(); ++i) out[fit.labels[i]] = fit.fit.estimate(i);
  return out;
}

std::string sequence_label(std::span<const int> z) {
  std::string out;
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (j) out += "->";
    out += "Z" + std::to_string(z[j]);
  }
  return out;
}

std::vector<int> addition_order(std::span<const int> z) {
  std::vector<int> order(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) order[z[j] - 1] = static_cast<int>(j) + 1;
  return order;
}

}  // namespace oofa
