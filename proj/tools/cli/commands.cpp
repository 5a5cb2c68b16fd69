#include "cli/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <future>

#include "possib/error.hpp"
#include "possib/lln.hpp"
#include "possib/moments.hpp"
#include "possib/scenario.hpp"

#ifndef POSSIB_VERSION
#define POSSIB_VERSION "0.0.0"
#endif

namespace possib::cli {
namespace {

constexpr double kMarginSlack = 1e-12;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string verdict_value(Decision d) { return to_string(d); }

std::string verdict_value(Satisfied s) {
  switch (s) {
    case Satisfied::kYes: return "holds";
    case Satisfied::kNo: return "fails";
    case Satisfied::kUndecided: break;
  }
  return "undecided";
}

std::string describe(const ConvergenceVerdict& v, const SampleSpace& space) {
  std::string out = v.exact ? "" : "horizon " + std::to_string(v.horizon);
  auto add = [&out](const std::string& part) { out += (out.empty() ? "" : "; ") + part; };
  if (v.witness) {
    add("witness outcome=" + space.label(v.witness->outcome) + " n=" + std::to_string(v.witness->n) +
           " deviation=" + format_number(v.witness->value));
  }
  if (!v.note.empty()) add(v.note);
  return out;
}

std::string join_labels(const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? "," : "") + labels[i];
  return out;
}

struct Loaded {
  Scenario scenario;
  ReportDocument doc;
};

Loaded load(const std::string& path, const GlobalOptions& global) {
  Loaded l{load_scenario(path), {}};
  Scenario& s = l.scenario;
  ReportDocument& doc = l.doc;
  if (global.horizon) {
    if (*global.horizon == 0) throw DomainError("--horizon must be at least 1");
    s.horizon = *global.horizon;
  }
  if (global.eps) {
    if (global.eps->empty()) throw DomainError("--eps needs at least one value");
    for (double e : *global.eps)
      if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("--eps values must be positive");
    s.eps_grid = *global.eps;
  }
  if (global.seed) {
    if (auto* g = std::get_if<SeededUniform>(&s.generator)) {
      g->seed = *global.seed;
    } else {
      doc.warnings.push_back("--seed has no effect on a " + std::string(family_name(s.generator)) + " generator");
    }
  }
  doc.version = tool_version();
  doc.command = global.argv;
  doc.scenario_digest = document_digest(serialize_scenario(s));
  if (global.timestamp) doc.timestamp = utc_now();
  return l;
}

void warn_undecided(ReportDocument& doc) {
  std::string names;
  for (const auto& v : doc.verdicts)
    if (v.value == "undecided") names += (names.empty() ? "" : ", ") + v.name;
  if (!names.empty()) doc.warnings.push_back("undecided: " + names);
}

}  // namespace

std::string tool_version() { return POSSIB_VERSION; }

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view item(text.data() + pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || p != item.data() + item.size()) {
      throw DomainError("not a number: '" + std::string(item) + "'");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

CommandResult run_eval(const std::string& scenario_path, const EvalOptions& opts, const GlobalOptions& global) {
  if (!opts.k && !opts.event) throw DomainError("eval needs --k and/or --event");
  auto [s, doc] = load(scenario_path, global);
  const auto& space = *s.space;
  if (opts.k) {
    if (*opts.k == 0) throw DomainError("--k must be at least 1");
    const Variable x = s.variable(*opts.k);
    auto& values = doc.table("variable", {"outcome", "lambda", "value"});
    for (std::size_t i = 0; i < space.size(); ++i) values.add_row({space.label(i), s.distribution[i], x[i]});
    const auto e = expectation_sup_witness(x, s.distribution);
    const auto v = variance_sup_witness(x, s.distribution);
    doc.table("moments", {"k", "E_sup", "E_sup_at", "Var_sup", "Var_sup_at"})
        .add_row({static_cast<std::int64_t>(*opts.k), e.value, space.label(e.index), v.value, space.label(v.index)});
  }
  if (opts.event) {
    std::vector<std::string> labels;
    const std::string& text = *opts.event;
    std::size_t pos = 0;
    while (!text.empty() && pos <= text.size()) {
      std::size_t end = text.find(',', pos);
      if (end == std::string::npos) end = text.size();
      std::string label = text.substr(pos, end - pos);
      while (!label.empty() && label.front() == ' ') label.erase(label.begin());
      while (!label.empty() && label.back() == ' ') label.pop_back();
      labels.push_back(std::move(label));
      pos = end + 1;
    }
    const Event ev = Event::of(s.space, labels);
    doc.table("event", {"event", "size", "P"})
        .add_row({join_labels(ev.member_labels()), static_cast<std::int64_t>(ev.count()),
                  induced_measure(s.distribution, ev)});
  }
  return {std::move(doc), kExitOk};
}

CommandResult run_chebyshev(const std::string& scenario_path, const ChebyshevOptions& opts,
                            const GlobalOptions& global) {
  if (opts.r_grid.empty()) throw DomainError("--r needs at least one value");
  if (opts.k == 0) throw DomainError("--k must be at least 1");
  auto [s, doc] = load(scenario_path, global);
  const Variable x = s.variable(opts.k);
  auto& table = doc.table("chebyshev", {"k", "r", "measured", "bound", "margin", "event"});
  bool ok = true;
  for (double r : opts.r_grid) {
    const auto c = chebyshev_check(x, s.distribution, r);
    const double margin = c.bound - c.actual;
    if (margin < -kMarginSlack) ok = false;
    table.add_row({static_cast<std::int64_t>(opts.k), r, c.actual, c.bound, margin,
                   join_labels(c.deviation_event.member_labels())});
  }
  doc.verdict("chebyshev", ok ? "holds" : "fails", "measured <= Var_sup/r^2 at every r");
  return {std::move(doc), ok ? kExitOk : kExitVerification};
}

CommandResult run_lln(const std::string& scenario_path, const LlnOptions& opts, const GlobalOptions& global) {
  auto [s, doc] = load(scenario_path, global);
  auto& lln = s.lln;
  if (opts.theorem) lln.theorem = parse_theorem(*opts.theorem);
  if (opts.delta) lln.delta = *opts.delta;
  if (opts.constant) lln.constant = *opts.constant;
  if (opts.psi_family || opts.psi_delta || opts.psi_scale) {
    const auto family = opts.psi_family ? parse_psi_family(*opts.psi_family)
                        : lln.psi       ? lln.psi->family()
                                        : PsiFunction::Family::kPower;
    if (family == PsiFunction::Family::kTable) throw DomainError("a psi table can only be given in the scenario file");
    const bool same = lln.psi && lln.psi->family() == family;
    const auto delta = opts.psi_delta ? *opts.psi_delta : same ? lln.psi->delta() : 0.0;
    if (!opts.psi_delta && !same) throw DomainError("--psi-delta is required when switching the psi family");
    const double scale = opts.psi_scale ? *opts.psi_scale : same ? lln.psi->scale() : 1.0;
    lln.psi = family == PsiFunction::Family::kPower ? PsiFunction::power(delta, scale)
                                                   : PsiFunction::log_power(delta, scale);
  }
  if (opts.theorem || opts.delta || opts.constant || opts.psi_family || opts.psi_delta || opts.psi_scale) {
    doc.scenario_digest = document_digest(serialize_scenario(s));
  }
  TheoremParams params = theorem_params(s);
  params.per_term_route = opts.per_term;
  const LLNReport r = possib::run_lln(s, params, s.horizon, s.eps_grid, global.force);
  const auto& hyp = r.hypothesis;
  const auto& space = *s.space;
  const std::size_t n_max = r.horizon;

  auto& summary = doc.table("parameters", {"name", "value"});
  summary.add_row({"theorem", std::string(to_string(params.theorem))});
  if (params.theorem == Theorem::kPsiCondition) {
    summary.add_row({"psi_family", std::string(to_string(params.psi->family()))});
    summary.add_row({"psi_delta", params.psi->delta()});
    summary.add_row({"psi_scale", params.psi->scale()});
  } else {
    summary.add_row({"delta", *params.delta});
  }
  summary.add_row({"C", hyp.constant});
  summary.add_row({"C_inferred", std::string(hyp.constant_inferred ? "true" : "false")});
  summary.add_row({"gate", std::string(to_string(r.gate))});
  summary.add_row({"horizon", static_cast<std::int64_t>(n_max)});
  if (r.remark.satisfied()) summary.add_row({"mu", r.remark.mu});

  // Hypothesis rows: the quantity the condition bounds and the bound at C.
  const auto variances = term_variances(s, n_max);
  const bool series = params.theorem == Theorem::kSeries;
  auto& ht = series ? doc.table("hypothesis", {"n", "measured", "bound", "margin", "partial_sum"})
                    : doc.table("hypothesis", {"n", "measured", "bound", "margin"});
  double running = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double nn = static_cast<double>(n);
    running = std::max(running, variances[n - 1]);
    double measured = running;
    double bound = 0.0;
    switch (params.theorem) {
      case Theorem::kPsiCondition: bound = hyp.constant * (nn * nn / (*params.psi)(n)); break;
      case Theorem::kRunningSupPower: bound = hyp.constant * std::pow(nn, *params.delta); break;
      case Theorem::kSeries:
        measured = variances[n - 1] / std::pow(nn, *params.delta);
        bound = hyp.constant;
        break;
    }
    std::vector<Cell> row{static_cast<std::int64_t>(n), measured, bound, bound - measured};
    if (series) row.emplace_back(hyp.partial_sums[n - 1]);
    ht.add_row(std::move(row));
  }

  auto& vt = doc.table("variance", {"n", "measured", "bound", "margin"});
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double m = r.average_variance[n - 1], b = r.variance_bound[n - 1];
    vt.add_row({static_cast<std::int64_t>(n), m, b, b - m});
  }
  auto& ct = doc.table("chebyshev_curve", {"eps", "n", "measured", "bound", "margin"});
  for (const auto& curve : r.curves) {
    for (std::size_t n = 1; n <= n_max; ++n) {
      const double m = curve.measured[n - 1], b = curve.bound[n - 1];
      ct.add_row({curve.eps, static_cast<std::int64_t>(n), m, b, b - m});
    }
  }
  std::vector<std::string> dev_cols{"n"};
  for (std::size_t i : r.positive_outcomes) dev_cols.push_back("Y(" + space.label(i) + ")");
  auto& dt = doc.table("deviation", std::move(dev_cols));
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<Cell> row{static_cast<std::int64_t>(n)};
    for (const auto& path : r.deviation_paths) row.emplace_back(path[n - 1]);
    dt.add_row(std::move(row));
  }

  doc.verdict("hypothesis", verdict_value(hyp.satisfied), std::string("gate ") + to_string(r.gate));
  doc.verdict("chebyshev_bound", r.bounds_respected ? "holds" : "fails");
  doc.verdict("variance_contraction", r.variance_contraction_ok ? "holds" : "fails");
  doc.verdict("in_measure", verdict_value(r.in_measure.decided), describe(r.in_measure, space));
  doc.verdict("almost_everywhere", verdict_value(r.almost_everywhere.decided), describe(r.almost_everywhere, space));
  if (r.mean_verdict) {
    doc.verdict("mean", verdict_value(r.mean_verdict->decided),
                "M_n/n -> " + format_number(r.remark.mu) + "; " + describe(*r.mean_verdict, space));
  }
  for (const auto& note : hyp.notes) doc.notes.push_back(note);
  if (r.gate == HypothesisGate::kOverridden) doc.warnings.push_back("hypothesis not established; overridden by --force");
  warn_undecided(doc);

  bool ok = r.gate != HypothesisGate::kRejected && r.bounds_respected && r.variance_contraction_ok;
  for (const auto& v : doc.verdicts)
    if (v.name != "hypothesis" && v.value == "fails") ok = false;
  return {std::move(doc), ok ? kExitOk : kExitVerification};
}

namespace {

struct EpsilonRun {
  std::vector<double> measures;
  std::vector<double> tail;
  std::vector<Event> limsup;
  BorelCantelliReport bc;
};

}  // namespace

CommandResult run_converge(const std::string& scenario_path, const GlobalOptions& global) {
  auto [s, doc] = load(scenario_path, global);
  const auto& space = *s.space;
  const MaxTrajectory traj = compute_max_trajectory(s, s.horizon);
  const SequenceSample ys = deviation_sample(s, traj);
  const Variable zero = Variable::constant(s.space, 0.0);

  std::vector<std::future<EpsilonRun>> jobs;
  for (double eps : s.eps_grid) {
    jobs.push_back(std::async(std::launch::async, [&, eps] {
      const EventTrajectory events = deviation_trajectory(ys.terms, zero, eps);
      EpsilonRun run;
      run.measures = measure_trajectory(events, s.distribution);
      run.tail = tail_sup_sequence(run.measures);
      run.limsup = limsup_events(events);
      run.bc = borel_cantelli_check(events, s.distribution);
      return run;
    }));
  }
  ConvergenceOptions options;
  options.eps_grid = s.eps_grid;
  const ImplicationReport imp = in_measure_implies_ae(ys, zero, s.distribution, options);

  auto& table = doc.table("borel_cantelli", {"eps", "n", "event_measure", "measured", "bound", "margin", "limsup_event"});
  bool ok = true;
  for (std::size_t e = 0; e < jobs.size(); ++e) {
    const double eps = s.eps_grid[e];
    const EpsilonRun run = jobs[e].get();
    for (std::size_t n = 1; n <= run.measures.size(); ++n) {
      const double m = run.bc.rows[n - 1].limsup_measure, b = run.tail[n - 1];
      table.add_row({eps, static_cast<std::int64_t>(n), run.measures[n - 1], m, b, b - m,
                     join_labels(run.limsup[n - 1].member_labels())});
    }
    const std::string tag = "(" + format_number(eps) + ")";
    doc.verdict("borel_cantelli" + tag, run.bc.inequality_holds ? "holds" : "fails");
    doc.verdict("vanishes" + tag, verdict_value(run.bc.vanishes),
                run.bc.vanish_index ? "tail sup zero from m=" + std::to_string(*run.bc.vanish_index) : "");
    ok = ok && run.bc.inequality_holds;
  }
  doc.verdict("in_measure", verdict_value(imp.in_measure.decided), describe(imp.in_measure, space));
  doc.verdict("almost_everywhere", verdict_value(imp.almost_everywhere.decided),
              describe(imp.almost_everywhere, space));
  doc.verdict("implication", imp.consistent() ? "holds" : "fails", "in measure => almost everywhere");
  ok = ok && imp.consistent();
  warn_undecided(doc);
  return {std::move(doc), ok ? kExitOk : kExitVerification};
}

}  // namespace possib::cli
