#include <iostream>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "cli/commands.hpp"

namespace cli = possib::cli;

int main(int argc, char** argv) {
  CLI::App app{"Maxitive measures, sup-based moments and max laws of large numbers on finite spaces", "possib"};
  app.set_version_flag("--version", cli::tool_version());
  app.require_subcommand(1);

  cli::GlobalOptions global;
  for (int i = 1; i < argc; ++i) global.argv.emplace_back(argv[i]);
  std::string format = "table";
  std::size_t stride = 1;
  std::string eps_text;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  bool no_timestamp = false;

  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));
  auto* horizon_opt = app.add_option("--horizon", horizon, "Horizon N (overrides run.horizon)");
  auto* eps_opt = app.add_option("--eps", eps_text, "Comma-separated epsilon grid (overrides run.eps_grid)");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for a seeded-uniform generator");
  app.add_flag("--force", global.force, "Run the law-of-large-numbers check even if its hypothesis is not met");
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp from the report");
  app.add_option("--stride", stride, "Print every stride-th table row (table format only)")->check(CLI::PositiveNumber);

  std::string path;
  auto scenario_arg = [&path](CLI::App* sub) {
    sub->add_option("scenario", path, "Scenario file (YAML or JSON)")->required();
    sub->fallthrough();
  };

  cli::EvalOptions eval;
  std::size_t eval_k = 0;
  std::string eval_event;
  auto* eval_cmd = app.add_subcommand("eval", "E_sup and Var_sup of X_k, and/or the measure of an event");
  scenario_arg(eval_cmd);
  auto* k_opt = eval_cmd->add_option("--k", eval_k, "Index k of the variable X_k");
  auto* event_opt = eval_cmd->add_option("--event", eval_event, "Comma-separated outcome labels (\"\" is empty)");

  cli::ChebyshevOptions cheb;
  std::string r_text;
  auto* cheb_cmd = app.add_subcommand("chebyshev", "Sweep both sides of the Chebyshev inequality over r");
  scenario_arg(cheb_cmd);
  cheb_cmd->add_option("--k", cheb.k, "Index k of the variable X_k")->capture_default_str();
  auto* r_opt = cheb_cmd->add_option("--r", r_text, "Comma-separated radii (default 0.1,0.5,1,3,10)");

  cli::LlnOptions lln;
  auto* lln_cmd = app.add_subcommand("lln", "Check a law of large numbers for M_n = max(X_1..X_n)");
  scenario_arg(lln_cmd);
  lln_cmd->add_option("--theorem", lln.theorem, "Hypothesis: 3.3 (psi), 3.4 (running sup), 3.5 (series)");
  lln_cmd->add_option("--delta", lln.delta, "delta for 3.4 / 3.5");
  lln_cmd->add_option("--C", lln.constant, "Constant C (inferred when absent)");
  lln_cmd->add_option("--psi", lln.psi_family, "Psi family: power or log-power");
  lln_cmd->add_option("--psi-delta", lln.psi_delta, "Psi exponent");
  lln_cmd->add_option("--psi-scale", lln.psi_scale, "Psi scale");
  lln_cmd->add_flag("--per-term", lln.per_term, "Also check the per-term sufficient condition for 3.3");

  auto* conv_cmd = app.add_subcommand("converge", "Measure trajectories, tail sups and both convergence verdicts");
  scenario_arg(conv_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }

  try {
    if (*horizon_opt) global.horizon = horizon;
    if (*eps_opt) global.eps = cli::parse_number_list(eps_text);
    if (*seed_opt) global.seed = seed;
    global.timestamp = !no_timestamp;

    cli::CommandResult result;
    if (*eval_cmd) {
      if (*k_opt) eval.k = eval_k;
      if (*event_opt) eval.event = eval_event;
      result = cli::run_eval(path, eval, global);
    } else if (*cheb_cmd) {
      if (*r_opt) cheb.r_grid = cli::parse_number_list(r_text);
      result = cli::run_chebyshev(path, cheb, global);
    } else if (*lln_cmd) {
      result = cli::run_lln(path, lln, global);
    } else {
      result = cli::run_converge(path, global);
    }
    const auto fmt = format == "json" ? cli::Format::kJson : format == "csv" ? cli::Format::kCsv : cli::Format::kTable;
    std::cout << cli::render(result.document, fmt, stride);
    if (fmt != cli::Format::kTable)
      for (const auto& w : result.document.warnings) std::cerr << "warning: " << w << "\n";
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return cli::kExitUsage;
}
