#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "oofa/design.hpp"
#include "oofa/stats.hpp"

namespace oofa {

/// One power/type-I study: p active position effects on a blocked design.
struct SimConfig {
  BlockOofaDesign design;
  int active_position_effects = 1;  // p
  int reps = 1000;                  // I
  double alpha = 0.05;
  double sigma_eps = 1.0;
  std::uint64_t seed = 20240501;
};

struct SimulationReport {
  double power = 0.0;   // PW, mean of per-rep powers
  double type1 = 0.0;   // TY1, mean of per-rep type-I rates
  std::vector<double> per_rep_power;
  std::vector<double> per_rep_type1;
  int n_active = 0;     // (k-1) + p
  int n_inactive = 0;   // inactive position effects
};

/**
 * Monte-Carlo power and type-I-error study on the full second-order
 * block-position model. Per replication: p position effects drawn uniformly
 * without replacement become active with magnitudes U[2*sigma, 4*sigma] and
 * random signs, every block contrast is active with the same law, responses
 * get N(0, sigma^2) noise, and forward selection at alpha decides
 * significance. Power counts recovered active effects (block effects
 * included); the type-I rate counts selected inactive position effects.
 * Effect sizes and noise both scale with sigma_eps, so reports are invariant
 * to it. Replication r uses substream seed ^ r; reproducible for any thread
 * count.
 */
SimulationReport simulate(const SimConfig& config, int threads = 1);

using EffectMap = std::map<std::string, double>;

/**
 * Responses y = model terms + block terms + N(0, sigma^2) noise for a
 * design, with effects keyed by model-matrix labels ("Intercept", "Z2^l",
 * "B^q", "Z1^lZ5^l", ...). Throws UnknownLabel for keys the design's model
 * matrix does not contain.
 */
std::vector<double> case_study_responses(const BlockOofaDesign& design,
                                         const EffectMap& position_model,
                                         const EffectMap& block_effects, double sigma_eps,
                                         std::uint64_t seed);

/**
 * All points of the m-component design space attaining the maximum predicted
 * response under the position terms of an effect map (ties within tol).
 * Intercept and block terms do not influence the ranking and are ignored;
 * block terms are held fixed. Points are returned in lexicographic order.
 */
std::vector<std::vector<int>> argmax_sequences(const EffectMap& effects, int m,
                                               double tol = 1e-9);

/// Effect map of a forward fit (labels to estimates).
EffectMap effect_map(const ForwardFit& fit);

/// Arrow rendering of a design point, e.g. (4,3,2,1,5) -> "Z4->Z3->Z2->Z1->Z5".
std::string sequence_label(std::span<const int> z);

/// Components in order of addition: entry p is the component at position p+1.
std::vector<int> addition_order(std::span<const int> z);

}  // namespace oofa
