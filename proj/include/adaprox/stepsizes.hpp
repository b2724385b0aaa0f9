#pragma once

#include <deque>
#include <string>
#include <vector>

#include "adaprox/estimates.hpp"
#include "adaprox/types.hpp"

namespace adaprox {

/// One displacement / gradient-difference pair with its cached products.
struct PairEntry {
  Vector s;
  Vector y;
  double gamma = 0.0;  // stepsize that produced the displacement
  double dot_sy = 0.0;
  double norm_s_sq = 0.0;
  double norm_y_sq = 0.0;
};

/// Ring buffer of the last m pairs (s^i, y^i), oldest first, plus the
/// previous iteration's Barzilai-Borwein values needed by the
/// least-normalized-secant-error rule.
class PairHistory {
 public:
  explicit PairHistory(int memory);

  void push(Vector s, Vector y, double gamma);

  /// Stores the BB values computed from the newest pair so the next
  /// iteration can read them as "previous-step" values.
  void record_bb(double bb_long_value, double bb_short_value);

  int size() const { return static_cast<int>(entries_.size()); }
  int memory() const { return memory_; }
  bool full() const { return size() == memory_; }

  /// i = 0 is the oldest retained pair; i = size()-1 the newest.
  const PairEntry& entry(int i) const { return entries_[static_cast<size_t>(i)]; }
  const PairEntry& latest() const { return entries_.back(); }
  const PairEntry& previous() const { return entries_[entries_.size() - 2]; }

  /// NaN until record_bb has been called at least once.
  double last_bb_long() const { return last_bb_long_; }
  double last_bb_short() const { return last_bb_short_; }

 private:
  std::deque<PairEntry> entries_;
  int memory_;
  double last_bb_long_ = kNaN;
  double last_bb_short_ = kNaN;
};

/// How Anderson-style stepsizes are geometrically averaged when nu < 1.
/// Aggregate applies the short-BB repair to windowed sums; PerPair averages
/// the per-pair nu-averaged short-BB values with weights ||y^i||^2.
enum class AaNuMode { Aggregate, PerPair };

/// Fast stepsize oracles.  Every rule returns a proposed stepsize or +inf
/// to abstain; abstention hands the iteration to the safeguard alone.

/// Long BB stepsize 1/ell.  Abstains when ell <= 0.
double bb_long(const LocalEstimates& est);

/// Short BB stepsize 1/(c^nu L^(1-nu)); equals 1/c when nu = 1.
/// Abstains when c is not finite and positive, or L = 0.
double bb_short(const LocalEstimates& est, double nu);

/// Picks long or short BB by the inverse secant error on the previous pair:
/// long when gamma_k > <s^k, s^(k-1)> / <y^k, y^(k-1)>, short otherwise.
/// Abstains with fewer than 2 pairs or when the comparator is undefined.
double martinez(const PairHistory& hist, const LocalEstimates& est, double gamma_k, double nu);

/// Least-normalized-secant-error cascade over the current and previous BB
/// values; falls through to comparing the scaled secant residuals.
/// Abstains when the current pair's short BB or the previous-step BB values
/// are unavailable.
double lnse(const PairHistory& hist, const LocalEstimates& est, double nu);

/// Windowed Anderson-style scalar stepsize sum<s,y> / sum||y||^2 over the
/// retained pairs (up to m; fewer during warmup); nu < 1 applies the
/// geometric averaging selected by mode.
/// Abstains when the window is empty, sum||y||^2 = 0, or sum<s,y> <= 0.
double anderson(const PairHistory& hist, double nu, AaNuMode mode = AaNuMode::Aggregate);

/// The identity rule: always abstains, recovering the plain adaptive update.
inline double plain_adapg() { return kInf; }

/// Rule selector, matching the CLI strings
/// adapg | bb-long | bb-short | martinez | lnse | aa.
enum class RuleKind { AdaPG, BBLong, BBShort, Martinez, Lnse, Anderson };

RuleKind rule_from_name(const std::string& name);
const char* rule_name(RuleKind rule);

/// All selectable rules in canonical order.
const std::vector<RuleKind>& all_rules();

/// Dispatches to the rule; est must describe hist.latest().
double propose_fast(RuleKind rule, const PairHistory& hist, const LocalEstimates& est,
                    double gamma_k, double nu, AaNuMode aa_mode);

}  // namespace adaprox
