#include "ilw/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>

namespace ilw {

namespace {

double symbol_at(Regime regime, std::optional<double> delta, int n) {
  const double xi = static_cast<double>(n);
  return regime == Regime::deep ? deep_symbol(delta, xi) : scaled_symbol(delta, xi);
}

double symbol_derivative_at(Regime regime, std::optional<double> delta, int n) {
  const double xi = static_cast<double>(n);
  return regime == Regime::deep ? deep_symbol_derivative(delta, xi)
                                : scaled_symbol_derivative(delta, xi);
}

struct Candidate {
  double ratio;
  double omega_value;
  std::vector<int> entries;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.ratio != b.ratio) return a.ratio < b.ratio;
  return a.entries < b.entries;
}

// Dispersion values for |n| <= cap, shared across the enumeration of one delta.
struct PTable {
  std::vector<double> vals;  // index n + cap
  int cap;
  double at(int n) const { return vals[static_cast<std::size_t>(n + cap)]; }
};

PTable make_ptable(Regime regime, std::optional<double> delta, int cap) {
  PTable t;
  t.cap = cap;
  t.vals.resize(2 * static_cast<std::size_t>(cap) + 1);
  for (int n = -cap; n <= cap; ++n) t.vals[static_cast<std::size_t>(n + cap)] = symbol_at(regime, delta, n);
  return t;
}

struct EnumResult {
  std::size_t count = 0;
  std::vector<Candidate> candidates;
};

// Enumerates canonical magnitude-sorted signed tuples: magnitudes
// non-increasing, and among equal magnitudes the signs non-increasing
// (+ before -), so each unordered tuple appears exactly once.
//
// The last entry is forced by the zero sum. `lemma` selects the ordering
// hypotheses and the reference product.
class Enumerator {
 public:
  Enumerator(ResonanceLemma lemma, int k, int cap, const ComparisonConstants& cc,
             const PTable& p, double n1_threshold)
      : lemma_(lemma), k_(k), cap_(cap), cc_(cc), p_(p), n1_min_(n1_threshold) {}

  EnumResult run(int a1_lo, int a1_hi) {
    EnumResult res;
    const int len = k_ + 2;
    std::vector<int> tuple(static_cast<std::size_t>(len));
    const int start = std::max(a1_lo, static_cast<int>(std::ceil(n1_min_ - 1e-12)));
    for (int a1 = std::max(1, start); a1 <= a1_hi; ++a1) {
      for (int s1 : {+1, -1}) {
        tuple[0] = s1 * a1;
        descend(tuple, 1, tuple[0], res);
      }
    }
    return res;
  }

 private:
  void descend(std::vector<int>& tuple, int pos, long long partial, EnumResult& res) {
    const int len = k_ + 2;
    const int prev_mag = std::abs(tuple[static_cast<std::size_t>(pos - 1)]);
    if (pos == len - 1) {
      const long long forced = -partial;
      const int mag = static_cast<int>(std::llabs(forced));
      if (mag > prev_mag || mag > cap_) return;
      if (mag == prev_mag) {
        const int prev = tuple[static_cast<std::size_t>(pos - 1)];
        if (prev < 0 && forced > 0) return;  // canonical sign order among ties
      }
      tuple[static_cast<std::size_t>(pos)] = static_cast<int>(forced);
      finish(tuple, res);
      return;
    }
    int hi = prev_mag;
    int lo = 0;
    if (pos == 1) lo = static_cast<int>(std::ceil(std::abs(tuple[0]) / cc_.similar - 1e-12));
    for (int a = hi; a >= lo; --a) {
      for (int s : {+1, -1}) {
        if (a == prev_mag) {
          const int prev = tuple[static_cast<std::size_t>(pos - 1)];
          if (prev < 0 && s > 0) continue;
        }
        if (a == 0 && s < 0) continue;
        tuple[static_cast<std::size_t>(pos)] = s * a;
        descend(tuple, pos + 1, partial + s * a, res);
        if (a == 0) break;
      }
    }
  }

  void finish(std::vector<int>& tuple, EnumResult& res) {
    const auto mag = [&](int i) { return std::abs(tuple[static_cast<std::size_t>(i)]); };
    double reference;
    if (lemma_ == ResonanceLemma::res1) {
      if (mag(2) == 0) return;  // degenerate reference
      if (k_ >= 2) {
        const int a4 = mag(3);
        if (mag(2) < cc_.much_greater * k_ * a4) return;
      }
      reference = static_cast<double>(mag(2)) * mag(0);
    } else {
      if (mag(1) < cc_.much_greater * mag(2)) return;
      const int n34 = tuple[2] + tuple[3];
      if (n34 == 0) return;
      if (k_ >= 3) {
        const int a5 = mag(4);
        if (std::abs(n34) < cc_.much_greater * k_ * a5) return;
      }
      reference = static_cast<double>(std::abs(n34)) * mag(0);
    }
    double om = 0.0;
    for (int v : tuple) om += p_.at(v);
    res.count += 1;
    res.candidates.push_back({std::abs(om) / reference, om, tuple});
  }

  ResonanceLemma lemma_;
  int k_;
  int cap_;
  ComparisonConstants cc_;
  const PTable& p_;
  double n1_min_;
};

BoundReport run_check(ResonanceLemma lemma, Regime regime,
                      const std::vector<std::optional<double>>& deltas, int k, int cap,
                      const ComparisonConstants& cc, int threads) {
  if (lemma == ResonanceLemma::res1 && k < 1)
    throw std::invalid_argument("res1 requires k >= 1");
  if (lemma == ResonanceLemma::res2 && k < 2)
    throw std::invalid_argument("res2 requires k >= 2");
  if (cap < 1 || cap > 128) throw std::invalid_argument("cap must lie in [1, 128]");
  if (deltas.empty()) throw std::invalid_argument("empty delta grid");
  for (const auto& d : deltas) {
    if (!d) continue;
    if (regime == Regime::deep && !(*d >= 2.0))
      throw std::invalid_argument("deep regime requires delta >= 2");
    if (regime == Regime::shallow && !(*d > 0.0 && *d < 1.0))
      throw std::invalid_argument("shallow regime requires 0 < delta < 1");
  }

  BoundReport report;
  report.regime = regime;
  report.lemma = lemma;
  report.k = k;
  report.cap = cap;
  report.constants = cc;

  for (const auto& delta : deltas) {
    const PTable p = make_ptable(regime, delta, cap);
    double thr = 0.0;
    for (int n = 0; n <= cc.n0; ++n)
      thr = std::max(thr, std::abs(symbol_derivative_at(regime, delta, n)));
    const double n1_min = cc.size_factor * thr;

    const int nthreads = std::max(1, threads);
    std::vector<std::future<EnumResult>> futures;
    const int span = cap;
    const int chunk = (span + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const int lo = 1 + t * chunk;
      const int hi = std::min(cap, lo + chunk - 1);
      if (lo > hi) break;
      futures.push_back(std::async(std::launch::async, [=, &p]() {
        Enumerator e(lemma, k, cap, cc, p, n1_min);
        return e.run(lo, hi);
      }));
    }

    DeltaFloor floor;
    floor.delta = delta;
    floor.n1_threshold = n1_min;
    std::vector<Candidate> local;
    for (auto& f : futures) {
      EnumResult r = f.get();
      floor.tuple_count += r.count;
      local.insert(local.end(), r.candidates.begin(), r.candidates.end());
    }
    if (!local.empty()) {
      const auto best = std::min_element(local.begin(), local.end(), candidate_less);
      floor.min_ratio = best->ratio;
      floor.argmin = best->entries;
    }
    for (auto& c : local)
      report.worst.push_back({delta, c.ratio, c.omega_value, std::move(c.entries)});
    report.per_delta.push_back(std::move(floor));
  }

  std::sort(report.worst.begin(), report.worst.end(), [](const WorstTuple& a, const WorstTuple& b) {
    if (a.ratio != b.ratio) return a.ratio < b.ratio;
    if (a.entries != b.entries) return a.entries < b.entries;
    const double da = a.delta ? *a.delta : -1.0;
    const double db = b.delta ? *b.delta : -1.0;
    return da < db;
  });
  if (report.worst.size() > 100) report.worst.resize(100);

  report.indeterminate = true;
  double global_min = 0.0;
  bool pass = true;
  bool first = true;
  for (const auto& df : report.per_delta) {
    if (df.tuple_count == 0) {
      pass = false;
      continue;
    }
    report.indeterminate = false;
    if (first || df.min_ratio < global_min) global_min = df.min_ratio;
    first = false;
    if (!(df.min_ratio > cc.floor)) pass = false;
  }
  report.min_ratio = first ? 0.0 : global_min;
  report.pass = !report.indeterminate && pass;
  return report;
}

}  // namespace

FrequencyTuple FrequencyTuple::make(std::vector<int> entries) {
  long long sum = 0;
  for (int v : entries) sum += v;
  if (sum != 0) throw std::invalid_argument("frequency tuple must sum to zero");
  return FrequencyTuple{std::move(entries)};
}

double omega(Regime regime, std::optional<double> delta, const FrequencyTuple& tuple) {
  long long sum = 0;
  for (int v : tuple.entries) sum += v;
  if (sum != 0) throw std::invalid_argument("frequency tuple must sum to zero");
  if (delta) {
    if (regime == Regime::deep && !(*delta > 0.0))
      throw std::invalid_argument("deep symbol requires delta > 0");
    if (regime == Regime::shallow && !(*delta > 0.0))
      throw std::invalid_argument("shallow symbol requires delta > 0");
  }
  double om = 0.0;
  for (int v : tuple.entries) om += symbol_at(regime, delta, v);
  return om;
}

BoundReport check_res1(Regime regime, const std::vector<std::optional<double>>& deltas, int k,
                       int cap, const ComparisonConstants& constants, int threads) {
  return run_check(ResonanceLemma::res1, regime, deltas, k, cap, constants, threads);
}

BoundReport check_res2(Regime regime, const std::vector<std::optional<double>>& deltas, int k,
                       int cap, const ComparisonConstants& constants, int threads) {
  return run_check(ResonanceLemma::res2, regime, deltas, k, cap, constants, threads);
}

std::string regime_name(Regime r) { return r == Regime::deep ? "deep" : "shallow"; }
std::string lemma_name(ResonanceLemma l) { return l == ResonanceLemma::res1 ? "res1" : "res2"; }

}  // namespace ilw
