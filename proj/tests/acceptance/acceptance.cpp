// Acceptance suite: one PASS/FAIL line per criterion, each with a runtime cap.
// Exit status is the number of failed criteria (0 when all pass).

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/oracle.hpp"
#include "possib/convergence.hpp"
#include "possib/lln.hpp"
#include "possib/moments.hpp"
#include "possib/scenario.hpp"
#include "support/corpus.hpp"
#include "support/fixtures.hpp"

#ifndef POSSIB_CLI
#error "POSSIB_CLI must name the possib executable"
#endif

namespace {

using namespace possib;
using possib::testing::load;

constexpr std::size_t kCorpusSize = 1000;

struct Outcome {
  bool ok = true;
  std::string detail;
  std::vector<std::string> failures;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (failures.size() < 5) failures.push_back(what);
    }
  }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// The randomized corpus shared by criteria 2-4: |Omega| <= 20, n <= 50.
const std::vector<testing::RandomCase>& corpus() {
  static const std::vector<testing::RandomCase> cases = [] {
    std::mt19937_64 rng(20240917);
    std::vector<testing::RandomCase> out;
    for (std::size_t c = 0; c < kCorpusSize; ++c) out.push_back(testing::random_case(rng));
    return out;
  }();
  return cases;
}

std::vector<double> raw(const Variable& x) { return {x.values().begin(), x.values().end()}; }

Outcome moment_exactness() {
  Outcome o;
  const auto s = load("s1.yaml");
  const auto& d = s.distribution;
  const auto x1 = s.variable(1), x2 = s.variable(2);
  const std::vector<Variable> xs{x1, x2};
  const auto m2 = max_aggregate(xs, 2);
  const std::vector<double> w(d.weights().begin(), d.weights().end());
  const auto om1 = oracle::moments(raw(x1), w), om2 = oracle::moments(raw(x2), w);
  const auto omm = oracle::moments(oracle::pointwise_max({raw(x1), raw(x2)}, 2), w);
  struct Row {
    const char* name;
    double got, oracle, expected;
  };
  const Row rows[] = {
      {"E_sup(X1)", expectation_sup(x1, d), om1.expectation, 2.0},
      {"Var_sup(X1)", variance_sup(x1, d), om1.variance, 9.0},
      {"E_sup(X2)", expectation_sup(x2, d), om2.expectation, 5.0},
      {"Var_sup(X2)", variance_sup(x2, d), om2.variance, 8.0},
      {"P({b,c})", induced_measure(d, Event::of(s.space, std::vector<std::string>{"b", "c"})),
       oracle::measure(s, {"b", "c"}), 0.5},
      {"E_sup(M2)", expectation_sup(m2, d), omm.expectation, 5.0},
      {"Var_sup(M2)", variance_sup(m2, d), omm.variance, 2.25},
  };
  for (const auto& r : rows) {
    o.check(near(r.got, r.expected, 1e-12), std::string(r.name) + "=" + num(r.got));
    o.check(near(r.got, r.oracle, 1e-12), std::string(r.name) + " oracle " + num(r.oracle));
  }
  o.detail = "7 quantities against literals and oracle";
  return o;
}

Outcome identity_of_max_expectation() {
  Outcome o;
  std::size_t checks = 0;
  for (const auto& c : corpus()) {
    std::vector<std::vector<double>> rows;
    for (const auto& x : c.xs) rows.push_back(raw(x));
    for (std::size_t n = 1; n <= c.xs.size(); ++n) {
      const auto sides = max_expectation_identity(c.xs, c.dist, n);
      const double oracle_lhs = oracle::moments(oracle::pointwise_max(rows, n), c.weights).expectation;
      double oracle_rhs = -INFINITY;
      for (std::size_t k = 0; k < n; ++k) oracle_rhs = std::max(oracle_rhs, oracle::moments(rows[k], c.weights).expectation);
      o.check(near(sides.lhs, sides.rhs, 1e-9), "identity off at n=" + std::to_string(n));
      o.check(near(sides.lhs, oracle_lhs, 1e-9) && near(sides.rhs, oracle_rhs, 1e-9), "oracle mismatch");
      ++checks;
    }
  }
  o.detail = std::to_string(corpus().size()) + " cases, " + std::to_string(checks) + " (case, n) pairs";
  return o;
}

Outcome chebyshev_corpus() {
  Outcome o;
  std::size_t checks = 0;
  double worst = INFINITY;
  for (const auto& c : corpus()) {
    for (const auto& x : c.xs) {
      const auto om = oracle::moments(raw(x), c.weights);
      for (double r : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        const auto chk = chebyshev_check(x, c.dist, r);
        std::vector<bool> members(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) members[i] = std::abs(x[i] - om.expectation) >= r;
        const double oracle_actual = oracle::measure(c.weights, members);
        const double oracle_bound = om.variance / (r * r);
        o.check(chk.actual <= chk.bound + 1e-12, "violation at r=" + num(r));
        o.check(oracle_actual <= oracle_bound + 1e-12, "oracle violation at r=" + num(r));
        worst = std::min(worst, chk.bound - chk.actual);
        ++checks;
      }
    }
  }
  o.detail = std::to_string(checks) + " (X, r) pairs, min margin " + num(worst);
  return o;
}

Outcome variance_contraction() {
  Outcome o;
  std::size_t checks = 0, psi_cases = 0;
  const auto psi = PsiFunction::power(1.0);
  for (const auto& c : corpus()) {
    const Scenario s = testing::table_scenario(c);
    const auto traj = compute_max_trajectory(s, c.xs.size());
    const auto hyp = check_psi_condition(traj.term_variance, psi, std::nullopt);
    const bool gated = hyp.satisfied == Satisfied::kYes;
    psi_cases += gated;
    for (std::size_t n = 1; n <= c.xs.size(); ++n) {
      const double nn = static_cast<double>(n);
      const double var_a = traj.average_variance[n - 1];
      o.check(var_a <= traj.running_max_variance[n - 1] / (nn * nn) + 1e-9, "contraction at n=" + std::to_string(n));
      if (gated) o.check(var_a <= hyp.constant / psi(n) + 1e-9, "C/psi bound at n=" + std::to_string(n));
      ++checks;
    }
  }
  // Affine scenarios satisfy the psi condition far more often than random tables.
  std::mt19937_64 rng(4);
  for (int c = 0; c < 200; ++c) {
    const Scenario s = testing::random_affine_scenario(rng);
    const auto traj = compute_max_trajectory(s, s.horizon);
    const auto hyp = check_psi_condition(traj.term_variance, psi, std::nullopt);
    if (hyp.satisfied != Satisfied::kYes) continue;
    ++psi_cases;
    for (std::size_t n = 1; n <= s.horizon; ++n) {
      o.check(traj.average_variance[n - 1] <= hyp.constant / psi(n) + 1e-9, "affine C/psi bound");
      ++checks;
    }
  }
  o.detail = std::to_string(checks) + " (case, n) pairs, " + std::to_string(psi_cases) + " cases with C/psi(n)";
  return o;
}

Outcome measure_axioms() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::size_t trajectories = 0;
  for (const auto& c : corpus()) {
    const auto none = Event::none(c.space), all = Event::all(c.space);
    o.check(induced_measure(c.dist, none) == 0.0, "P(empty) != 0");
    o.check(induced_measure(c.dist, all) == 1.0, "P(Omega) != 1");
    for (int t = 0; t < 5; ++t) {
      const auto a = testing::random_event(rng, c.space), b = testing::random_event(rng, c.space);
      const double pa = induced_measure(c.dist, a), pb = induced_measure(c.dist, b);
      const double pu = induced_measure(c.dist, a | b);
      o.check(pu == std::max(pa, pb), "maxitivity");
      o.check(pu <= pa + pb, "subadditivity");
      o.check(induced_measure(c.dist, a & b) <= pa, "monotonicity");
    }
    std::vector<Event> events;
    for (std::size_t n = 0; n < c.xs.size(); ++n) events.push_back(testing::random_event(rng, c.space));
    const EventTrajectory traj(c.space, events);
    const auto measures = measure_trajectory(traj, c.dist);
    const auto tails = tail_sup_sequence(measures);
    const auto limsups = limsup_events(traj);
    for (std::size_t m = 1; m <= tails.size(); ++m) {
      if (m > 1) o.check(tails[m - 1] <= tails[m - 2], "tail sup increased");
      o.check(induced_measure(c.dist, limsups[m - 1]) <= tails[m - 1], "limsup above tail sup");
    }
    if (traj.horizon() >= 2) o.check(borel_cantelli_check(traj, c.dist).inequality_holds, "Borel-Cantelli report");
    ++trajectories;
  }
  std::size_t chains = 0;
  for (const auto& c : corpus()) {
    if (chains == 100) break;
    // A_1 <= A_2 <= ...: the measure of the union is the limit of the measures.
    Event acc = Event::none(c.space);
    double sup = 0.0, prev = 0.0;
    std::uniform_int_distribution<std::size_t> pick(0, c.space->size() - 1);
    for (int step = 0; step < 30; ++step) {
      acc |= Event::of_indices(c.space, std::vector<std::size_t>{pick(rng)});
      const double p = induced_measure(c.dist, acc);
      o.check(p >= prev, "chain measure decreased");
      prev = p;
      sup = std::max(sup, p);
    }
    o.check(induced_measure(c.dist, acc) == sup, "continuity from below");
    ++chains;
  }
  o.detail = std::to_string(trajectories) + " trajectories, " + std::to_string(chains) + " chains";
  return o;
}

Outcome s2_end_to_end() {
  Outcome o;
  const auto s = load("s2.yaml");
  const auto traj = compute_max_trajectory(s, 10000);
  const auto hyp = check_psi_condition(std::span(traj.term_variance).first(1000), PsiFunction::power(1.0), std::nullopt);
  o.check(hyp.satisfied == Satisfied::kYes, "psi condition not satisfied");
  o.check(near(hyp.constant, 0.5, 1e-12), "C=" + num(hyp.constant));
  const std::size_t b = s.space->require_index("b");
  for (std::size_t n : {4, 100, 10000}) {
    const double y = traj.deviations[n - 1][b];
    o.check(near(y, -1.0 / std::sqrt(static_cast<double>(n)), 1e-9), "Y_" + std::to_string(n) + "(b)=" + num(y));
  }
  const Variable zero = Variable::constant(s.space, 0.0);
  const auto measures = measure_trajectory(
      deviation_trajectory(std::span(traj.deviations).first(1000), zero, 0.05), s.distribution);
  for (std::size_t n = 1; n <= 1000; ++n)
    o.check(measures[n - 1] == (n <= 400 ? 0.5 : 0.0), "P(B_n) at n=" + std::to_string(n));
  const std::vector<double> eps{0.05};
  const auto r = run_lln(s, theorem_params(s), 1000, eps);
  o.check(r.in_measure.decided == Decision::kHolds, "in-measure verdict");
  o.check(r.almost_everywhere.decided == Decision::kHolds, "a.e. verdict");
  o.check(r.bounds_respected, "bound curve violated");
  o.detail = "C=" + num(hyp.constant) + ", verdicts " + to_string(r.in_measure.decided) + "/" +
             to_string(r.almost_everywhere.decided);
  return o;
}

Outcome running_sup_discrimination() {
  Outcome o;
  const auto s = load("s2.yaml");
  const auto one = check_running_sup_power(s, 1.0, 1000);
  const auto half = check_running_sup_power(s, 0.5, 1000);
  o.check(one.satisfied == Satisfied::kYes, "delta=1 not satisfied");
  o.check(near(one.constant, 0.5, 1e-12), "delta=1 C=" + num(one.constant));
  o.check(half.satisfied == Satisfied::kNo, std::string("delta=0.5 ") + to_string(half.satisfied));
  o.check(near(half.constant, 0.5 * std::sqrt(1000.0), 1e-9), "delta=0.5 running sup " + num(half.constant));
  o.detail = std::string("delta=1 ") + to_string(one.satisfied) + " C=" + num(one.constant) + "; delta=0.5 " +
             to_string(half.satisfied);
  return o;
}

Outcome series_and_remark() {
  Outcome o;
  constexpr std::size_t kN = 100000;
  const auto s = load("s3.yaml");
  const auto traj = compute_max_trajectory(s, kN);
  for (std::size_t k = 1; k <= kN; ++k) o.check(traj.term_variance[k - 1] == 0.5, "Var_sup(X_k) != 0.5");
  const auto hyp = check_series(traj.term_variance, 1.5);
  const double sum = hyp.partial_sums.back();
  const auto oracle_sum = static_cast<double>(oracle::power_series(0.5, 1.5, kN));
  o.check(hyp.satisfied == Satisfied::kYes, "series condition not satisfied");
  o.check(near(sum, oracle_sum, 1e-9), "partial sum " + num(sum) + " vs oracle " + num(oracle_sum));
  o.check(sum < 1.31, "partial sum above 1.31");
  const std::vector<double> eps{0.001};
  const auto r = run_lln(s, theorem_params(s), kN, eps);
  o.check(r.remark.satisfied() && r.remark.mu == 1.0, "remark mu=" + num(r.remark.mu));
  const std::size_t b = s.space->require_index("b");
  const double gap = std::abs(traj.averages[kN - 1][b] - 1.0);
  o.check(near(gap, 1.0 / kN, 1e-12), "|M_N/N - 1| at b = " + num(gap));
  o.check(r.mean_verdict && r.mean_verdict->decided == Decision::kHolds, "M_n/n -> mu verdict");
  o.detail = "partial sum " + num(sum) + ", mu=" + num(r.remark.mu);
  return o;
}

Outcome implication_across_corpus() {
  Outcome o;
  std::size_t cases = 0, holds_in_measure = 0;
  auto check = [&](const Scenario& s, std::size_t horizon) {
    const auto traj = compute_max_trajectory(s, horizon);
    ConvergenceOptions opts;
    opts.eps_grid = s.eps_grid;
    const auto imp = in_measure_implies_ae(deviation_sample(s, traj), Variable::constant(s.space, 0.0),
                                           s.distribution, opts);
    o.check(imp.consistent(), "in measure holds but a.e. fails");
    holds_in_measure += imp.in_measure.decided == Decision::kHolds;
    ++cases;
  };
  for (const char* name : {"s1.yaml", "s2.yaml", "s2_series.yaml", "s3.yaml", "constant.yaml", "seeded.yaml"}) {
    const auto s = load(name);
    check(s, s.horizon);
  }
  for (const auto& c : corpus()) check(testing::table_scenario(c), c.xs.size());
  std::mt19937_64 rng(9);
  for (int c = 0; c < 500; ++c) {
    const auto s = testing::random_affine_scenario(rng);
    check(s, s.horizon);
  }
  auto seeded = load("seeded.yaml");
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    std::get<SeededUniform>(seeded.generator).seed = seed;
    check(seeded, 500);
  }
  o.detail = std::to_string(cases) + " scenarios, " + std::to_string(holds_in_measure) + " with in-measure holds";
  return o;
}

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(POSSIB_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome cli_determinism() {
  Outcome o;
  const std::string s2 = testing::scenario_path("s2.yaml");
  const auto a = run_cli("lln " + s2 + " --no-timestamp --format json");
  const auto b = run_cli("lln " + s2 + " --no-timestamp --format json");
  o.check(!a.out.empty() && a.out == b.out, "json output differs between runs");
  o.check(a.code == 0, "S2 exit " + std::to_string(a.code));
  const auto series = run_cli("lln " + s2 + " --theorem 3.5 --delta 1.5 --no-timestamp --format json");
  o.check(series.code != 0, "series hypothesis on S2 exited 0");
  const auto forced = run_cli("lln " + s2 + " --theorem 3.5 --delta 1.5 --force --no-timestamp --format json");
  o.check(forced.code == 0, "--force exit " + std::to_string(forced.code));
  o.detail = "exit codes " + std::to_string(a.code) + "/" + std::to_string(series.code) + "/" +
             std::to_string(forced.code) + ", " + std::to_string(a.out.size()) + " bytes";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "moment exactness on s1", 1.0, moment_exactness},
      {2, "max-expectation identity", 10.0, identity_of_max_expectation},
      {3, "maxitive Chebyshev inequality", 10.0, chebyshev_corpus},
      {4, "variance contraction", 10.0, variance_contraction},
      {5, "measure axioms and Borel-Cantelli", 10.0, measure_axioms},
      {6, "psi-rate law end to end on s2", 5.0, s2_end_to_end},
      {7, "running-sup condition on s2", 10.0, running_sup_discrimination},
      {8, "series condition and mean remark on s3", 10.0, series_and_remark},
      {9, "in measure implies almost everywhere", 10.0, implication_across_corpus},
      {10, "CLI determinism and exit codes", 10.0, cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) o.check(false, "runtime " + num(secs) + " s over the " + num(c.limit_seconds) + " s cap");
    failed += !o.ok;
    std::ostringstream line;
    line.precision(3);
    line << (o.ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << std::fixed << secs << " s)";
    if (!o.detail.empty()) line << ": " << o.detail;
    std::cout << line.str() << "\n";
    for (const auto& f : o.failures) std::cout << "     " << f << "\n";
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed;
}
