#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ilw/symbols.hpp"

namespace ilw {

enum class Regime { deep, shallow };
enum class ResonanceLemma { res1, res2 };

/// Explicit realizations of the comparison relations in the lower-bound
/// hypotheses: a ~ b means 1/(similar) <= a/b <= similar; a >> b means
/// a >= much_greater * b. The size hypothesis admits |n1| >=
/// size_factor * max_{0<=n<=n0} |p'(n)|. The floor is the warn-level on the
/// measured minimum ratio, not a hard bound.
struct ComparisonConstants {
  double similar = 2.0;
  double much_greater = 8.0;
  int n0 = 1;
  double size_factor = 8.0;
  double floor = 0.1;
};

/// Zero-sum integer frequency tuple (n_1, ..., n_{j+1}).
struct FrequencyTuple {
  std::vector<int> entries;

  static FrequencyTuple make(std::vector<int> entries);  // validates zero sum
};

/// Resonance function: sum of dispersion symbol values over the tuple.
/// delta = nullopt selects the limiting symbol of the regime.
double omega(Regime regime, std::optional<double> delta, const FrequencyTuple& tuple);

struct WorstTuple {
  std::optional<double> delta;
  double ratio;
  double omega_value;
  std::vector<int> entries;
};

struct DeltaFloor {
  std::optional<double> delta;
  std::size_t tuple_count = 0;
  double min_ratio = 0.0;       // meaningful only if tuple_count > 0
  std::vector<int> argmin;      // tuple attaining the minimum
  double n1_threshold = 0.0;    // effective lower bound applied to |n1|
};

/// Brute-force floor over the qualifying tuples of one lemma.
struct BoundReport {
  Regime regime;
  ResonanceLemma lemma;
  int k = 0;
  int cap = 0;
  ComparisonConstants constants;
  std::vector<DeltaFloor> per_delta;
  std::vector<WorstTuple> worst;  // lowest ratios across the whole grid
  double min_ratio = 0.0;
  bool indeterminate = false;  // no tuple satisfied the hypotheses
  bool pass = false;           // min_ratio > floor on every delta
};

/// |Omega| >= c |n3||n1| over sorted zero-sum (k+2)-tuples within the cap
/// satisfying |n1| ~ |n2| >= |n3| (and |n3| >> k max_{j>=4} |n_j| for k >= 2)
/// plus the size hypothesis on |n1|. Exhaustive enumeration.
BoundReport check_res1(Regime regime, const std::vector<std::optional<double>>& deltas, int k,
                       int cap, const ComparisonConstants& constants = {}, int threads = 1);

/// |Omega| >= c |n3+n4||n1| over sorted tuples with |n1| ~ |n2| >> |n3| >= |n4|
/// (and |n3+n4| >> k max_{j>=5} |n_j| for k >= 3); n3+n4 = 0 excluded.
BoundReport check_res2(Regime regime, const std::vector<std::optional<double>>& deltas, int k,
                       int cap, const ComparisonConstants& constants = {}, int threads = 1);

std::string regime_name(Regime r);
std::string lemma_name(ResonanceLemma l);

}  // namespace ilw
