#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blowup/analysis.hpp"
#include "blowup/config.hpp"
#include "blowup/errors.hpp"
#include "blowup/io.hpp"
#include "blowup/ode_blowup.hpp"
#include "blowup/runner.hpp"

namespace {

struct ScenarioArgs {
  std::string config_path;
  std::vector<std::string> sets;
};

int run_scenario(const std::string& scenario, const ScenarioArgs& args) {
  const std::string text = args.config_path.empty() ? std::string() : blowup::read_text(args.config_path);
  std::vector<std::string> overrides = args.sets;
  overrides.push_back("run.scenario=" + scenario);
  const blowup::RunConfig config = blowup::parse_config(text, overrides);
  const blowup::RunOutcome out = blowup::run(config);
  if (config.scenario == blowup::Scenario::verify && out.report.contains("suites")) {
    for (const auto& s : out.report["suites"]) {
      std::cout << "[" << s["id"].get<int>() << "] " << s["name"].get<std::string>() << ": "
                << s["status"].get<std::string>() << "  (" << s["message"].get<std::string>() << ")\n";
    }
  }
  std::cout << "status " << out.report["status"].get<std::string>() << ", report "
            << (out.directory / "report.json").string() << "\n";
  if (out.report.contains("error")) std::cerr << "error: " << out.report["error"].get<std::string>() << "\n";
  return out.exit_code;
}

int run_rate_fit(const std::string& csv, std::optional<double> t_hat, const std::vector<std::string>& sets,
                 blowup::RateFitOptions fo) {
  const blowup::CsvTable table = blowup::read_csv(csv);
  const std::size_t ct = table.column("t");
  const std::size_t cs = table.column("sup");
  std::vector<blowup::SupSample> history;
  for (const auto& row : table.rows) history.push_back({row[ct], row[cs]});
  if (history.empty()) throw blowup::ConfigError(csv + ": no samples");
  if (!t_hat) {
    // Extrapolate from the last sample with the ODE tail, which needs the exponents.
    std::vector<std::string> overrides = sets;
    overrides.push_back("run.scenario=ode");
    const blowup::RunConfig config = blowup::parse_config("", overrides);
    t_hat = history.back().t + blowup::time_to_blowup(history.back().sup, config.params);
  }
  const blowup::RateFit fit = blowup::fit_rate(history, *t_hat, fo);
  const nlohmann::json doc = {{"T_hat", *t_hat}, {"alpha_hat", fit.alpha_hat}, {"beta_hat", fit.beta_hat},
                              {"log_kappa_hat", fit.log_kappa_hat}, {"residual", fit.residual},
                              {"samples", fit.samples}, {"s_window", {fit.s_lo, fit.s_hi}},
                              {"alpha_band", {fit.alpha_lo, fit.alpha_hi}},
                              {"beta_band", {fit.beta_lo, fit.beta_hi}}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blow-up laboratory for u_t = Δu + |u|^{p-1}u log^a(2+u^2)"};
  app.require_subcommand(1);

  std::map<std::string, ScenarioArgs> args;
  for (const char* name : {"ode", "physical", "similarity", "verify"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " scenario");
    ScenarioArgs& a = args[name];
    sub->add_option("config", a.config_path, "config file ([section] key = value)")->check(CLI::ExistingFile);
    sub->add_option("--set", a.sets, "override, e.g. --set params.a=1")->allow_extra_args(false);
  }

  auto* fit = app.add_subcommand("rate-fit", "fit log M = alpha s - beta log s + c to a t,sup CSV");
  std::string csv;
  double t_hat = 0.0;
  std::vector<std::string> fit_sets;
  blowup::RateFitOptions fo;
  fit->add_option("csv", csv, "CSV with columns t and sup")->required()->check(CLI::ExistingFile);
  auto* t_hat_opt = fit->add_option("--t-hat", t_hat, "blow-up time; extrapolated from the last sample when absent");
  fit->add_option("--set", fit_sets, "params used for the extrapolation, e.g. --set params.p=3")
      ->allow_extra_args(false);
  fit->add_option("--window-fraction", fo.window_fraction, "fraction of in-range samples kept")
      ->capture_default_str();
  fit->add_option("--tau-min", fo.tau_min)->capture_default_str();
  fit->add_option("--tau-max", fo.tau_max)->capture_default_str();
  fit->add_option("--min-samples", fo.min_samples)->capture_default_str();
  fit->add_option("--t-perturbation", fo.T_perturbation, "T_hat shift for the exponent band")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& [name, a] : args) {
      if (app.got_subcommand(name)) return run_scenario(name, a);
    }
    if (app.got_subcommand(fit)) {
      std::optional<double> th;
      if (t_hat_opt->count() > 0) th = t_hat;
      return run_rate_fit(csv, th, fit_sets, fo);
    }
  } catch (const blowup::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
