#include "adaprox/stepsizes.hpp"

#include <cmath>
#include <utility>

namespace adaprox {

PairHistory::PairHistory(int memory) : memory_(memory) {
  if (memory < 1) throw ConfigError("pair history needs memory >= 1");
}

void PairHistory::push(Vector s, Vector y, double gamma) {
  PairEntry entry;
  entry.dot_sy = y.dot(s);
  entry.norm_s_sq = s.squaredNorm();
  entry.norm_y_sq = y.squaredNorm();
  entry.gamma = gamma;
  entry.s = std::move(s);
  entry.y = std::move(y);
  entries_.push_back(std::move(entry));
  if (size() > memory_) entries_.pop_front();
}

void PairHistory::record_bb(double bb_long_value, double bb_short_value) {
  last_bb_long_ = bb_long_value;
  last_bb_short_ = bb_short_value;
}

double bb_long(const LocalEstimates& est) {
  if (!(est.ell > 0.0)) return kInf;
  return 1.0 / est.ell;
}

double bb_short(const LocalEstimates& est, double nu) {
  if (!std::isfinite(est.c) || est.c <= 0.0) return kInf;
  if (nu == 1.0) return 1.0 / est.c;
  if (est.big_l <= 0.0) return kInf;
  return 1.0 / (std::pow(est.c, nu) * std::pow(est.big_l, 1.0 - nu));
}

double martinez(const PairHistory& hist, const LocalEstimates& est, double gamma_k, double nu) {
  if (hist.size() < 2) return kInf;
  const PairEntry& cur = hist.latest();
  const PairEntry& prev = hist.previous();
  const double yy = cur.y.dot(prev.y);
  if (yy == 0.0) return kInf;
  const double ratio = cur.s.dot(prev.s) / yy;
  return gamma_k > ratio ? bb_long(est) : bb_short(est, nu);
}

double lnse(const PairHistory& hist, const LocalEstimates& est, double nu) {
  const double cur_long = bb_long(est);
  const double cur_short = bb_short(est, nu);
  if (!std::isfinite(cur_long) || !std::isfinite(cur_short)) return kInf;
  const double prev_long = hist.last_bb_long();
  const double prev_short = hist.last_bb_short();
  if (!std::isfinite(prev_long) || !std::isfinite(prev_short)) return kInf;

  if (cur_long + cur_short <= 2.0 * prev_short) return cur_long;
  if (1.0 / cur_long + 1.0 / cur_short >= 2.0 / prev_long) return cur_short;

  // Tie-break on the scaled secant residuals of the current pair.
  const PairEntry& cur = hist.latest();
  const double norm_s = std::sqrt(cur.norm_s_sq);
  const double norm_y = std::sqrt(cur.norm_y_sq);
  const double err_long = (cur.s - cur_long * cur.y).norm() / norm_s;
  const double err_short = (cur.y - cur.s / cur_short).norm() / norm_y;
  return err_long <= err_short ? cur_long : cur_short;
}

double anderson(const PairHistory& hist, double nu, AaNuMode mode) {
  if (hist.size() == 0) return kInf;
  double sum_sy = 0.0;
  double sum_yy = 0.0;
  double sum_ss = 0.0;
  for (int i = 0; i < hist.size(); ++i) {
    const PairEntry& e = hist.entry(i);
    if (e.norm_s_sq == 0.0) continue;  // defensive: cannot occur in a run
    sum_sy += e.dot_sy;
    sum_yy += e.norm_y_sq;
    sum_ss += e.norm_s_sq;
  }
  if (sum_yy <= 0.0 || sum_sy <= 0.0 || sum_ss <= 0.0) return kInf;
  if (nu == 1.0) return sum_sy / sum_yy;

  if (mode == AaNuMode::Aggregate) {
    // Short-BB averaging applied to the windowed aggregates.
    const double c_bar = sum_yy / sum_sy;
    const double l_bar = std::sqrt(sum_yy / sum_ss);
    return 1.0 / (std::pow(c_bar, nu) * std::pow(l_bar, 1.0 - nu));
  }

  // Weighted average (weights ||y^i||^2) of per-pair averaged short-BB values.
  double weighted = 0.0;
  for (int i = 0; i < hist.size(); ++i) {
    const PairEntry& e = hist.entry(i);
    if (e.norm_s_sq == 0.0) continue;
    if (e.dot_sy <= 0.0 || e.norm_y_sq <= 0.0) return kInf;
    const double c_i = e.norm_y_sq / e.dot_sy;
    const double l_i = std::sqrt(e.norm_y_sq / e.norm_s_sq);
    weighted += e.norm_y_sq / (std::pow(c_i, nu) * std::pow(l_i, 1.0 - nu));
  }
  return weighted / sum_yy;
}

RuleKind rule_from_name(const std::string& name) {
  if (name == "adapg") return RuleKind::AdaPG;
  if (name == "bb-long") return RuleKind::BBLong;
  if (name == "bb-short") return RuleKind::BBShort;
  if (name == "martinez") return RuleKind::Martinez;
  if (name == "lnse") return RuleKind::Lnse;
  if (name == "aa") return RuleKind::Anderson;
  throw ConfigError("unknown rule '" + name +
                    "' (expected adapg, bb-long, bb-short, martinez, lnse, or aa)");
}

const char* rule_name(RuleKind rule) {
  switch (rule) {
    case RuleKind::AdaPG:
      return "adapg";
    case RuleKind::BBLong:
      return "bb-long";
    case RuleKind::BBShort:
      return "bb-short";
    case RuleKind::Martinez:
      return "martinez";
    case RuleKind::Lnse:
      return "lnse";
    case RuleKind::Anderson:
      return "aa";
  }
  return "adapg";
}

const std::vector<RuleKind>& all_rules() {
  static const std::vector<RuleKind> rules = {RuleKind::AdaPG,    RuleKind::BBLong,
                                              RuleKind::BBShort,  RuleKind::Martinez,
                                              RuleKind::Lnse,     RuleKind::Anderson};
  return rules;
}

double propose_fast(RuleKind rule, const PairHistory& hist, const LocalEstimates& est,
                    double gamma_k, double nu, AaNuMode aa_mode) {
  switch (rule) {
    case RuleKind::AdaPG:
      return plain_adapg();
    case RuleKind::BBLong:
      return bb_long(est);
    case RuleKind::BBShort:
      return bb_short(est, nu);
    case RuleKind::Martinez:
      return martinez(hist, est, gamma_k, nu);
    case RuleKind::Lnse:
      return lnse(hist, est, nu);
    case RuleKind::Anderson:
      return anderson(hist, nu, aa_mode);
  }
  return kInf;
}

}  // namespace adaprox
