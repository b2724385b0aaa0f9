// End-to-end acceptance checks.  Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any line fails.  Tolerances are pinned here
// on purpose: loosening them is a deliberate code change, not a knob.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "adaprox/diagnostics.hpp"
#include "adaprox/estimates.hpp"
#include "adaprox/io.hpp"
#include "adaprox/problems.hpp"
#include "adaprox/solver.hpp"
#include "adaprox/stepsizes.hpp"
#include "adaprox/trace.hpp"
#include "adaprox/types.hpp"

using namespace adaprox;

namespace {

struct Criterion {
  std::string label;
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;
};

void fail(Criterion& c, const std::string& msg) {
  c.pass = false;
  if (!c.detail.empty()) c.detail += "; ";
  c.detail += msg;
}

void expect(Criterion& c, bool ok, const std::string& msg) {
  if (!ok) fail(c, msg);
}

bool close(double a, double b, double tol = 1e-12) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double value : values) v[i++] = value;
  return v;
}

long support_size(const Vector& x) {
  long n = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) n += x[i] != 0.0;
  return n;
}

struct FamilySetup {
  std::string label;
  CompositeProblem problem;
  double tol;
  double nu;
};

std::vector<FamilySetup> make_families() {
  std::vector<FamilySetup> families;

  InstanceParams lasso;
  lasso.rows = 200;
  lasso.cols = 500;
  lasso.seed = 45;
  lasso.lambda = 0.1;
  families.push_back({"lasso", make_lasso(lasso), 1e-9, 1.0});

  InstanceParams logreg;
  logreg.rows = 200;
  logreg.cols = 50;
  logreg.seed = 1;
  families.push_back({"logreg", make_logistic(logreg), 1e-9, 1.0});

  InstanceParams cubic;
  cubic.rows = 100;
  cubic.cols = 50;
  cubic.seed = 1;
  cubic.cubic_m = 0.01;
  families.push_back({"cubic", make_cubic(cubic), 1e-8, 1.0});

  InstanceParams pnorm;
  pnorm.rows = 100;
  pnorm.cols = 50;
  pnorm.seed = 1;
  pnorm.p = 1.5;
  families.push_back({"pnorm", make_pnorm(pnorm), 1e-6, 0.5});

  return families;
}

Trace solve(const CompositeProblem& problem, RuleKind rule, double tol, double nu,
            bool snapshots = false) {
  SolverConfig config;
  config.rule = rule;
  config.tol = tol;
  config.nu = nu;
  config.max_iters = 20000;
  config.record_snapshots = snapshots;
  return run(problem, config);
}

std::string ranking_line(const std::string& label,
                         const std::map<RuleKind, long>& evals) {
  std::vector<std::pair<long, RuleKind>> order;
  for (const auto& [rule, count] : evals) {
    order.emplace_back(count < 0 ? std::numeric_limits<long>::max() : count, rule);
  }
  std::sort(order.begin(), order.end());
  std::ostringstream line;
  line << "ranking " << label << ":";
  for (const auto& [count, rule] : order) {
    line << ' ' << rule_name(rule) << '=';
    if (count == std::numeric_limits<long>::max()) {
      line << ">20000";
    } else {
      line << count;
    }
  }
  return line.str();
}

}  // namespace

int main() {
  std::vector<Criterion> criteria;
  const std::vector<FamilySetup> families = make_families();

  // Shared run cache: family label -> rule -> trace (no snapshots).
  std::map<std::string, std::map<RuleKind, Trace>> traces;

  // C1: every rule on every family solves and passes the certificate check.
  Criterion c1{"C1 certificate holds for every rule on every family"};
  {
    const auto start = std::chrono::steady_clock::now();
    for (const FamilySetup& fam : families) {
      for (RuleKind rule : all_rules()) {
        Trace trace;
        try {
          trace = solve(fam.problem, rule, fam.tol, fam.nu);
        } catch (const std::exception& e) {
          fail(c1, fam.label + "/" + rule_name(rule) + " threw: " + e.what());
          continue;
        }
        try {
          const RecipeReport report = check_recipe(trace, 1.2, fam.nu);
          expect(c1, report.p1_min_slack >= -1e-12,
                 fam.label + "/" + rule_name(rule) + " P1 slack " +
                     fmt(report.p1_min_slack));
          expect(c1, report.p2_min_slack >= -1e-12,
                 fam.label + "/" + rule_name(rule) + " P2 slack " +
                     fmt(report.p2_min_slack));
          expect(c1, report.p3_empirical_lambda_min > 0.0,
                 fam.label + "/" + rule_name(rule) + " lambda_min " +
                     fmt(report.p3_empirical_lambda_min));
        } catch (const std::exception& e) {
          fail(c1, fam.label + "/" + rule_name(rule) + " check threw: " + e.what());
        }
        traces[fam.label][rule] = std::move(trace);
      }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    expect(c1, seconds < 30.0, "runtime " + fmt(seconds) + "s exceeds 30s");
    c1.notes.push_back("24 solve+check passes in " + fmt(seconds) + "s");
  }
  criteria.push_back(std::move(c1));

  // C2: on the lasso instance every rule reaches residual 1e-8 within the
  // 20000-evaluation budget, and the recovered support matches a tighter
  // pre-solve exactly.
  Criterion c2{"C2 lasso budget and exact support recovery"};
  ReferenceOptimum lasso_ref;
  {
    const FamilySetup& fam = families[0];
    lasso_ref = presolve_reference(fam.problem, fam.tol);
    const long ref_support = support_size(lasso_ref.x);
    std::ostringstream evals_note;
    evals_note << "evals to 1e-8:";
    for (RuleKind rule : all_rules()) {
      const Trace& trace = traces[fam.label][rule];
      const long evals = evals_to_residual(trace, 1e-8);
      evals_note << ' ' << rule_name(rule) << '=' << evals;
      expect(c2, evals >= 1 && evals <= 20000,
             std::string(rule_name(rule)) + " needed " + std::to_string(evals) +
                 " evals for residual 1e-8");
      const long got_support = support_size(trace.x_final);
      expect(c2, got_support == ref_support,
             std::string(rule_name(rule)) + " support " + std::to_string(got_support) +
                 " != presolve support " + std::to_string(ref_support));
    }
    c2.notes.push_back(evals_note.str());
    c2.notes.push_back("presolve support " + std::to_string(ref_support) + " of " +
                       std::to_string(lasso_ref.x.size()) + " coordinates");
  }
  criteria.push_back(std::move(c2));

  // C3/C4/C5 share one snapshot run of the plain rule per family plus a
  // 100x-tighter pre-solve reference.
  Criterion c3{"C3 rate bound P_K^min <= U1 / sum(gamma) on all families"};
  Criterion c4{"C4 Lyapunov sequence non-increasing on plain-rule runs"};
  Criterion c5{"C5 Holder instance converges with tail slope <= -0.4"};
  {
    for (const FamilySetup& fam : families) {
      Trace trace;
      ReferenceOptimum ref;
      try {
        trace = solve(fam.problem, RuleKind::AdaPG, fam.tol, fam.nu, true);
        ref = fam.label == "lasso" ? lasso_ref : presolve_reference(fam.problem, fam.tol);
      } catch (const std::exception& e) {
        fail(c3, fam.label + " setup threw: " + e.what());
        fail(c4, fam.label + " setup threw: " + e.what());
        continue;
      }
      RecipeReport report;
      try {
        report = check_trace(trace, 1.2, fam.nu, ref);
      } catch (const std::exception& e) {
        fail(c3, fam.label + " check threw: " + e.what());
        fail(c4, fam.label + " check threw: " + e.what());
        continue;
      }
      expect(c3, report.rate_checked, fam.label + " rate check did not run");
      expect(c3, report.rate_bound_holds,
             fam.label + " worst gap " + fmt(report.rate_worst_gap));
      c3.notes.push_back(fam.label + ": worst gap " + fmt(report.rate_worst_gap) +
                         " over " + std::to_string(trace.iterations()) + " rows");

      expect(c4, report.lyapunov_checked, fam.label + " Lyapunov check did not run");
      expect(c4, report.lyapunov_monotone,
             fam.label + " worst violation " + fmt(report.lyapunov_worst_violation));
      c4.notes.push_back(fam.label + ": worst violation " +
                         fmt(report.lyapunov_worst_violation));

      if (fam.label == "pnorm") {
        expect(c5, trace.status == TerminationStatus::Converged,
               "pnorm run did not reach residual 1e-6");
        expect(c5, std::isfinite(report.rate_tail_slope),
               "tail slope unavailable");
        expect(c5, report.rate_tail_slope <= -0.4,
               "tail slope " + fmt(report.rate_tail_slope) + " > -0.4");
        c5.notes.push_back("converged in " + std::to_string(trace.iterations()) +
                           " iterations, tail slope " + fmt(report.rate_tail_slope));
      }
    }
  }
  criteria.push_back(std::move(c3));
  criteria.push_back(std::move(c4));
  criteria.push_back(std::move(c5));

  // C6: closed-form toys.
  Criterion c6{"C6 toy problems match closed forms"};
  {
    // One-dimensional quadratic from x0 = 1 ends within 1e-9 of zero.
    const CompositeProblem quad = make_lasso(Matrix::Identity(1, 1), Vector::Zero(1), 0.0);
    SolverConfig config;
    config.tol = 1e-10;
    config.x0 = vec({1.0});
    const Trace qtrace = run(quad, config);
    expect(c6, qtrace.status == TerminationStatus::Converged, "quadratic did not converge");
    expect(c6, std::abs(qtrace.x_final[0]) <= 1e-9,
           "quadratic endpoint " + fmt(qtrace.x_final[0]));

    // Separable instance: identity design solves coordinatewise by
    // soft-thresholding b at the regularization weight.
    const Vector b = vec({3.0, -0.4, 0.0, 1.2});
    const CompositeProblem sep = make_lasso(Matrix::Identity(4, 4), b, 1.0);
    SolverConfig sconfig;
    sconfig.tol = 1e-12;
    const Trace strace = run(sep, sconfig);
    expect(c6, strace.status == TerminationStatus::Converged, "separable did not converge");
    const Vector expected = vec({2.0, 0.0, 0.0, 0.2});
    for (Eigen::Index i = 0; i < expected.size(); ++i) {
      expect(c6, std::abs(strace.x_final[i] - expected[i]) <= 1e-10,
             "coordinate " + std::to_string(i) + " = " + fmt(strace.x_final[i]) +
                 ", want " + fmt(expected[i]));
    }
  }
  criteria.push_back(std::move(c6));

  // C7: the windowed secant rule should need no more gradient evaluations
  // than the plain rule to reach residual 1e-8 on the lasso and logistic
  // instances.  The full ranking is reported either way.
  Criterion c7{"C7 windowed secant rule beats the plain rule on both instances"};
  {
    for (const std::string label : {std::string("lasso"), std::string("logreg")}) {
      std::map<RuleKind, long> evals;
      for (RuleKind rule : all_rules()) {
        evals[rule] = evals_to_residual(traces[label][rule], 1e-8);
      }
      c7.notes.push_back(ranking_line(label, evals));
      const long aa = evals[RuleKind::Anderson];
      const long plain = evals[RuleKind::AdaPG];
      expect(c7, aa >= 1, label + ": aa never reached residual 1e-8");
      expect(c7, plain >= 1, label + ": adapg never reached residual 1e-8");
      if (aa >= 1 && plain >= 1) {
        expect(c7, aa <= plain,
               label + ": aa needs " + std::to_string(aa) + " evals vs adapg " +
                   std::to_string(plain));
      }
    }
  }
  criteria.push_back(std::move(c7));

  // C8: re-verify the per-operation examples at 1e-12.
  Criterion c8{"C8 operation examples reproduce pinned values"};
  {
    // Local curvature estimates.
    {
      const LocalEstimates est = local_estimates(vec({2, 0}), vec({1, 0}), 1.0, 1.0);
      expect(c8, close(est.ell, 0.5) && close(est.big_l, 0.5) && close(est.c, 0.5),
             "collinear estimates");
      expect(c8, close(est.scaled_lambda, 1.0), "collinear scaled lambda");

      const LocalEstimates diag = local_estimates(vec({1, 1}), vec({1, 0}), 1.0, 1.0);
      expect(c8,
             close(diag.ell, 0.5) && close(diag.big_l, 1.0 / std::sqrt(2.0)) &&
                 close(diag.c, 1.0),
             "orthogonal-component estimates");

      const LocalEstimates scaled = local_estimates(vec({1, 1}), vec({1, 0}), 1.0, 0.5);
      expect(c8, close(scaled.scaled_ell, 0.5 * std::pow(2.0, 0.25)), "scaled ell");
      expect(c8, close(scaled.scaled_lambda, std::pow(2.0, -0.25)), "scaled lambda");
    }

    // Safeguard candidate stepsize.
    expect(c8, close(adapg_candidate(1.0, 1.0, 1.0, 1.0, 1.0), std::sqrt(2.0)),
           "candidate pi=1 growth");
    expect(c8, close(adapg_candidate(1.0, 1.0, 1.0, 2.0, 1.0), 1.0 / std::sqrt(6.0)),
           "candidate pi=1 curvature");
    expect(c8, close(adapg_candidate(1.0, 1.0, 1.0, 1.0, 1.2), std::sqrt(11.0 / 6.0)),
           "candidate pi=1.2 exact cancellation");

    // Safeguard selection.
    {
      auto [g1, b1] = safeguarded_gamma(0.5, 2.0);
      expect(c8, close(g1, 0.5) && b1 == Branch::Safe, "safeguard picks safe");
      auto [g2, b2] = safeguarded_gamma(2.0, 0.5);
      expect(c8, close(g2, 0.5) && b2 == Branch::Fast, "safeguard picks fast");
      auto [g3, b3] = safeguarded_gamma(1.0, kInf);
      expect(c8, close(g3, 1.0) && b3 == Branch::Safe, "safeguard on abstention");
    }

    // Proximal gradient step.
    {
      CompositeProblem identity_prox;
      identity_prox.prox = [](const Vector& x, double) { return x; };
      expect(c8,
             close(prox_gradient_step(identity_prox, vec({1, 1}), vec({1, 0}), 0.5)[0],
                   0.5) &&
                 close(prox_gradient_step(identity_prox, vec({1, 1}), vec({1, 0}),
                                          0.5)[1],
                       1.0),
             "plain gradient step");

      const CompositeProblem l1 = make_lasso(Matrix::Zero(1, 1), Vector::Zero(1), 1.0);
      expect(c8, close(prox_gradient_step(l1, vec({3.0}), vec({0.0}), 1.0)[0], 2.0),
             "soft-threshold step");

      CompositeProblem nonneg;
      nonneg.prox = [](const Vector& x, double) { return x.cwiseMax(0.0).eval(); };
      expect(c8, close(prox_gradient_step(nonneg, vec({-2.0}), vec({0.0}), 1.0)[0], 0.0),
             "projection step");
    }

    // Fixed-point residual.
    expect(c8, close(fixed_point_residual(vec({1, 0}), vec({1, 0}), 0.5), 1.0),
           "residual collinear");
    expect(c8, close(fixed_point_residual(vec({1, 0}), vec({2, 0}), 0.5), 0.0),
           "residual exact secant");
    expect(c8, close(fixed_point_residual(vec({0, 2}), vec({0, 0.5}), 1.0), 1.5),
           "residual mixed");

    // Stepsize rules.
    {
      LocalEstimates est;
      est.ell = 0.5;
      expect(c8, close(bb_long(est), 2.0), "long secant stepsize");
      est.ell = 0.0;
      expect(c8, bb_long(est) == kInf, "long secant abstains");

      est = local_estimates(vec({1, 1}), vec({1, 0}), 1.0, 1.0);
      expect(c8, close(bb_short(est, 1.0), 1.0), "short secant stepsize");
      expect(c8, close(bb_short(est, 0.5), std::pow(2.0, 0.25)), "short secant nu=0.5");

      PairHistory collinear(4);
      collinear.push(vec({1, 0}), vec({0.5, 0}), 1.0);
      collinear.push(vec({1, 0}), vec({0.5, 0}), 1.0);
      const LocalEstimates col_est =
          local_estimates(vec({1, 0}), vec({0.5, 0}), 1.0, 1.0);
      expect(c8, close(martinez(collinear, col_est, 5.0, 1.0), 2.0),
             "alternating rule, ratio above gamma");
      expect(c8, close(martinez(collinear, col_est, 3.0, 1.0), 2.0),
             "alternating rule, ratio below gamma");

      PairHistory cascade(4);
      cascade.push(vec({1, 1}), vec({1, 0}), 1.0);
      cascade.record_bb(2.0, 2.0);
      expect(c8,
             close(lnse(cascade, local_estimates(vec({1, 1}), vec({1, 0}), 1.0, 1.0),
                        1.0),
                   2.0),
             "cascade branch 1");

      PairHistory window(2);
      window.push(vec({1, 0}), vec({1, 0}), 1.0);
      window.push(vec({0, 1}), vec({0, 2}), 1.0);
      expect(c8, close(anderson(window, 1.0), 0.6), "windowed average");
      expect(c8, plain_adapg() == kInf, "plain rule abstains");
    }

    // Lyapunov hand value and constant-stepsize ratio slack.
    {
      Trace trace;
      trace.x0 = vec({1.0});
      trace.phi0 = 0.5;
      StepRecord rec;
      rec.k = 1;
      rec.gamma = 1.0;
      rec.rho = 1.0;
      rec.objective = 0.5;
      rec.snapshot = vec({1.0});
      trace.records.push_back(rec);
      ReferenceOptimum ref;
      ref.x = vec({0.0});
      ref.objective = 0.0;
      expect(c8, close(lyapunov_sequence(trace, ref, 1.0)[0], 1.5), "Lyapunov hand value");

      Trace constant;
      for (long k = 1; k <= 3; ++k) {
        StepRecord row;
        row.k = k;
        row.gamma = 1.0;
        row.rho = 1.0;
        constant.records.push_back(row);
      }
      for (double slack : p1_slacks(constant, 1.0)) {
        expect(c8, close(slack, 1.0), "constant-stepsize ratio slack");
      }
    }

    // Dataset text format and config validation.
    {
      std::istringstream in("+1 1:0.5 3:-2.0\n-1\n");
      const LibsvmData data = read_libsvm(in);
      expect(c8,
             data.labels.size() == 2 && data.labels[0] == 1.0 && data.labels[1] == -1.0 &&
                 data.a.rows() == 2 && data.a.cols() == 3 && data.a(0, 0) == 0.5 &&
                 data.a(0, 2) == -2.0 && data.a.row(1).norm() == 0.0,
             "sparse text parse");

      bool monotone_rejected = false;
      try {
        std::istringstream bad("1 2:1 1:1\n");
        read_libsvm(bad);
      } catch (const ParseError&) {
        monotone_rejected = true;
      }
      expect(c8, monotone_rejected, "nonmonotone index accepted");

      bool pi_rejected = false;
      try {
        parse_run_spec_json(
            R"({"problem": {"family": "lasso", "rows": 4, "cols": 4},
                "solver": {"pi": 2.5}})",
            "<acceptance>");
      } catch (const ConfigError&) {
        pi_rejected = true;
      }
      expect(c8, pi_rejected, "pi = 2.5 accepted");

      bool nu_rejected = false;
      try {
        parse_run_spec_json(
            R"({"problem": {"family": "lasso", "rows": 4, "cols": 4},
                "solver": {"nu": 0}})",
            "<acceptance>");
      } catch (const ConfigError&) {
        nu_rejected = true;
      }
      expect(c8, nu_rejected, "nu = 0 accepted");
    }
  }
  criteria.push_back(std::move(c8));

  int passed = 0;
  for (const Criterion& criterion : criteria) {
    if (criterion.pass) {
      std::cout << criterion.label << ": PASS";
      ++passed;
    } else {
      std::cout << criterion.label << ": FAIL (" << criterion.detail << ")";
    }
    std::cout << '\n';
    for (const std::string& note : criterion.notes) {
      std::cout << "  " << note << '\n';
    }
  }
  std::cout << passed << "/" << criteria.size() << " criteria passed\n";
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
