#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "forksched/analytic.hpp"
#include "forksched/baseline.hpp"
#include "forksched/errors.hpp"
#include "forksched/format.hpp"
#include "forksched/json_io.hpp"
#include "forksched/optimize.hpp"
#include "forksched/simulate.hpp"
#include "forksched/singlefork.hpp"
#include "forksched/tables.hpp"
#include "json.hpp"

namespace {

using namespace forksched;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw validation_error("cannot open output file: " + out_path);
  f << text;
}

std::vector<double> parse_beta_grid(const std::string& spec) {
  const auto first = spec.find(':');
  const auto second = spec.find(':', first == std::string::npos ? 0 : first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw validation_error("--beta-grid expects a:b:steps (log-spaced)");
  try {
    const double a = std::stod(spec.substr(0, first));
    const double b = std::stod(spec.substr(first + 1, second - first - 1));
    const int steps = std::stoi(spec.substr(second + 1));
    return log_grid(a, b, steps);
  } catch (const validation_error&) {
    throw;
  } catch (const std::exception&) {
    throw validation_error("--beta-grid expects numeric a:b:steps");
  }
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw validation_error("cannot open scenario file: " + path);
  try {
    nlohmann::json j;
    f >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("scenario parse error: " + std::string(e.what()));
  }
}

struct ScenarioDoc {
  Scenario scenario;
  bool has_grid = false;
  std::vector<double> t1s;
  std::vector<int> n0s;
  std::vector<ForkSchedule> schedules;
};

ScenarioDoc load_scenario_doc(const std::string& path) {
  nlohmann::json j = load_json_file(path);
  if (!j.is_object())
    throw validation_error("scenario must be a JSON object");
  nlohmann::json grid;
  if (j.contains("grid")) {
    grid = j.at("grid");
    j.erase("grid");
  }
  ScenarioDoc doc{scenario_from_json(j)};
  if (grid.is_null()) return doc;

  if (!grid.is_object())
    throw validation_error("grid must be a JSON object");
  for (const auto& item : grid.items())
    if (item.key() != "t1" && item.key() != "n0" && item.key() != "schedules")
      throw validation_error("grid: unknown key '" + item.key() + "'");
  if (grid.contains("schedules") &&
      (grid.contains("t1") || grid.contains("n0")))
    throw validation_error("grid: schedules cannot be combined with t1/n0");

  if (grid.contains("t1")) {
    if (!grid["t1"].is_array() || grid["t1"].empty())
      throw validation_error("grid: t1 must be a non-empty array");
    for (const auto& v : grid["t1"]) {
      if (!v.is_number() || !(v.get<double>() > 0.0))
        throw validation_error("grid: t1 entries must be positive numbers");
      doc.t1s.push_back(v.get<double>());
    }
  }
  if (grid.contains("n0")) {
    if (!grid["n0"].is_array() || grid["n0"].empty())
      throw validation_error("grid: n0 must be a non-empty array");
    for (const auto& v : grid["n0"]) {
      if (!v.is_number_integer() || v.get<long long>() < 1)
        throw validation_error("grid: n0 entries must be positive integers");
      doc.n0s.push_back(static_cast<int>(v.get<long long>()));
    }
  }
  if (grid.contains("schedules")) {
    if (!grid["schedules"].is_array() || grid["schedules"].empty())
      throw validation_error("grid: schedules must be a non-empty array");
    for (const auto& stages : grid["schedules"])
      doc.schedules.push_back(
          schedule_from_json(nlohmann::json{{"stages", stages}}));
  }
  doc.has_grid = true;
  return doc;
}

struct GridRow {
  int n0;
  double t1;
  bool has_t1;
  ForkSchedule schedule;
};

std::vector<GridRow> expand_grid(const ScenarioDoc& doc) {
  std::vector<GridRow> rows;
  if (!doc.schedules.empty()) {
    for (const ForkSchedule& s : doc.schedules) {
      const bool has_t1 = s.stages.size() > 1;
      rows.push_back({s.stages[0].n, has_t1 ? s.stages[1].t : 0.0, has_t1, s});
    }
    return rows;
  }
  const ForkSchedule& base = doc.scenario.schedule;
  if (base.stages.size() != 2)
    throw validation_error(
        "grid over t1/n0 needs a two-stage base schedule to vary");
  const int total = base.total_servers();
  const std::vector<double> t1s =
      doc.t1s.empty() ? std::vector<double>{base.stages[1].t} : doc.t1s;
  const std::vector<int> n0s =
      doc.n0s.empty() ? std::vector<int>{base.stages[0].n} : doc.n0s;
  for (double t1 : t1s) {
    for (int n0 : n0s) {
      if (n0 > total)
        throw validation_error("grid: n0 exceeds the schedule's server total");
      std::vector<Stage> stages{{0.0, n0}};
      if (n0 < total) stages.push_back({t1, total - n0});
      rows.push_back({n0, t1, true, ForkSchedule(std::move(stages))});
    }
  }
  return rows;
}

std::string grid_prefix(const GridRow& row) {
  std::string out = std::to_string(row.n0) + ",";
  if (row.has_t1) out += format_shortest(row.t1);
  out += ",\"" + stages_json_string(row.schedule) + "\"";
  return out;
}

std::string frontier_csv_row(double beta, double es, double ew, double joint,
                             const std::string& stages_json) {
  return format_shortest(beta) + "," + format_shortest(es) + "," +
         format_shortest(ew) + "," + format_shortest(joint) + ",\"" +
         stages_json + "\"\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "forksched: replication-schedule analysis, simulation, and "
      "optimization for straggler mitigation"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "Closed-form metrics for a scenario (shifted_exp only)");
  std::string an_scenario, an_out;
  analyze->add_option("--scenario", an_scenario, "Scenario JSON file")
      ->required();
  analyze->add_option("--out", an_out, "Write output to this file");
  analyze->callback([&]() {
    const ScenarioDoc doc = load_scenario_doc(an_scenario);
    const auto* se = std::get_if<ShiftedExp>(&doc.scenario.dist);
    if (!se)
      throw validation_error(
          "analyze covers the shifted_exp family only; use simulate for "
          "other distributions");
    if (!doc.has_grid) {
      const double es =
          mean_completion_time(doc.scenario.schedule, se->c, se->mu,
                               doc.scenario.K);
      const double ew = mean_utilization_cost(doc.scenario.schedule, se->c,
                                              se->mu, doc.scenario.lambda);
      emit("ES=" + format_sig10(es) + "\nEW=" + format_sig10(ew) + "\n",
           an_out);
      return;
    }
    std::string csv = "n0,t1,stages,ES,EW\n";
    for (const GridRow& row : expand_grid(doc)) {
      const double es =
          mean_completion_time(row.schedule, se->c, se->mu, doc.scenario.K);
      const double ew = mean_utilization_cost(row.schedule, se->c, se->mu,
                                              doc.scenario.lambda);
      csv += grid_prefix(row) + "," + format_shortest(es) + "," +
             format_shortest(ew) + "\n";
    }
    emit(csv, an_out);
  });

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "Monte Carlo metrics for a scenario");
  std::string sim_scenario, sim_out;
  long long sim_runs = 100000;
  std::uint64_t sim_seed = 12345;
  int sim_threads = 1;
  simulate->add_option("--scenario", sim_scenario, "Scenario JSON file")
      ->required();
  simulate->add_option("--runs", sim_runs, "Independent runs (default 100000)");
  simulate->add_option("--seed", sim_seed, "RNG seed (default 12345)")
      ->envname("FORKSCHED_SEED");
  simulate->add_option("--threads", sim_threads,
                       "Worker threads; does not change results");
  simulate->add_option("--out", sim_out, "Write output to this file");
  simulate->callback([&]() {
    const ScenarioDoc doc = load_scenario_doc(sim_scenario);
    if (!doc.has_grid) {
      const EmpiricalMetrics em =
          estimate_metrics(doc.scenario, sim_runs, sim_seed, sim_threads);
      emit("S_hat=" + format_sig10(em.S_hat) + "\nW_hat=" +
               format_sig10(em.W_hat) + "\nS_se=" + format_sig10(em.S_se) +
               "\nW_se=" + format_sig10(em.W_se) + "\nruns=" +
               std::to_string(em.runs) + "\nseed=" + std::to_string(em.seed) +
               "\n",
           sim_out);
      return;
    }
    std::string csv = "n0,t1,stages,S_hat,W_hat,S_se,W_se,runs,seed\n";
    for (const GridRow& row : expand_grid(doc)) {
      const Scenario cell{doc.scenario.K, doc.scenario.lambda,
                          doc.scenario.dist, row.schedule};
      const EmpiricalMetrics em =
          estimate_metrics(cell, sim_runs, sim_seed, sim_threads);
      csv += grid_prefix(row) + "," + format_shortest(em.S_hat) + "," +
             format_shortest(em.W_hat) + "," + format_shortest(em.S_se) + "," +
             format_shortest(em.W_se) + "," + std::to_string(em.runs) + "," +
             std::to_string(em.seed) + "\n";
    }
    emit(csv, sim_out);
  });

  // optimize-single
  auto* osingle = app.add_subcommand(
      "optimize-single",
      "Cost-optimal initial server count for a single-fork design");
  double os_c = 0, os_mu = 0, os_t1 = 0, os_lambda = 1.0;
  int os_n = 0;
  std::string os_out;
  osingle->add_option("--c", os_c, "Startup shift")->required();
  osingle->add_option("--mu", os_mu, "Exponential rate")->required();
  osingle->add_option("--N", os_n, "Servers per task")->required();
  osingle->add_option("--t1", os_t1, "Forking time")->required();
  osingle->add_option("--lambda", os_lambda, "Cost rate (default 1)");
  osingle->add_option("--out", os_out, "Write output to this file");
  osingle->callback([&]() {
    const InitialServerChoice ch =
        optimal_initial_servers(os_c, os_mu, os_n, os_t1, os_lambda);
    const double v3 = v3_threshold(os_c * os_mu, os_n);
    emit("n0_star=" + std::to_string(ch.n0_star) + "\nx_star=" +
             format_sig10(ch.x_star) + "\nv3=" + format_sig10(v3) +
             "\nEW_at_n0_star=" + format_sig10(ch.cost) + "\n",
         os_out);
  });

  // thresholds
  auto* thresh = app.add_subcommand(
      "thresholds", "Regime thresholds of the normalized forking time");
  double th_c = 0, th_mu = 0;
  int th_n = 0;
  std::string th_out;
  thresh->add_option("--c", th_c, "Startup shift")->required();
  thresh->add_option("--mu", th_mu, "Exponential rate")->required();
  thresh->add_option("--N", th_n, "Servers per task")->required();
  thresh->add_option("--out", th_out, "Write output to this file");
  thresh->callback([&]() {
    const ThresholdReport r = full_thresholds(th_c * th_mu, th_n);
    emit("v0=" + format_sig10(r.v0) + "\nv1=" + format_sig10(r.v1) + "\nv2=" +
             format_sig10(r.v2) + "\nv2_branch=" +
             (r.v2_closed_form ? std::string("closed_form")
                               : std::string("implicit")) +
             "\nv3=" + format_sig10(r.v3) + "\nv3_above_one=" +
             (r.v3_above_one ? std::string("true") : std::string("false")) +
             "\nx_prime=" + format_sig10(r.x_prime) + "\n",
         th_out);
  });

  // optimize-multi
  auto* omulti = app.add_subcommand(
      "optimize-multi", "Joint-cost minimization at one tradeoff weight");
  double om_c = 0, om_mu = 0, om_lambda = 1.0, om_beta = 0;
  int om_k = 0;
  OptimizerOptions om_opts;
  std::string om_out;
  omulti->add_option("--c", om_c, "Startup shift")->required();
  omulti->add_option("--mu", om_mu, "Exponential rate")->required();
  omulti->add_option("--lambda", om_lambda, "Cost rate (default 1)");
  omulti->add_option("--K", om_k, "Parallel tasks")->required();
  omulti->add_option("--beta", om_beta, "Tradeoff weight")->required();
  omulti->add_option("--m", om_opts.m, "Forking stages (default 4)");
  omulti->add_option("--restarts", om_opts.restarts, "Restarts (default 8)");
  omulti->add_option("--iters", om_opts.max_iter,
                     "Iteration cap (default 2000)");
  omulti->add_option("--n-max", om_opts.n_max,
                     "Relaxed batch cap (default 1e4)");
  omulti->add_option("--tol", om_opts.tol, "Simplex tolerance (default 1e-8)");
  omulti->add_option("--seed", om_opts.seed, "Restart seed (default 1)")
      ->envname("FORKSCHED_SEED");
  omulti->add_option("--out", om_out, "Write output to this file");
  omulti->callback([&]() {
    const TradeoffPoint p =
        optimize_multifork(om_c, om_mu, om_lambda, om_k, om_beta, om_opts);
    emit("beta,ES,EW,joint,stages_json\n" +
             frontier_csv_row(p.beta, p.metrics.mean_completion,
                              p.metrics.mean_utilization, p.joint,
                              stages_json_string(p.schedule)),
         om_out);
  });

  // tradeoff
  auto* tradeoff = app.add_subcommand(
      "tradeoff", "Frontier sweep over a log-spaced beta grid");
  double td_c = 0, td_mu = 0, td_lambda = 1.0;
  int td_k = 0;
  OptimizerOptions td_opts;
  std::string td_grid, td_out;
  tradeoff->add_option("--c", td_c, "Startup shift")->required();
  tradeoff->add_option("--mu", td_mu, "Exponential rate")->required();
  tradeoff->add_option("--lambda", td_lambda, "Cost rate (default 1)");
  tradeoff->add_option("--K", td_k, "Parallel tasks")->required();
  tradeoff->add_option("--beta-grid", td_grid, "a:b:steps, log-spaced")
      ->required();
  tradeoff->add_option("--m", td_opts.m, "Forking stages (default 4)");
  tradeoff->add_option("--restarts", td_opts.restarts, "Restarts (default 8)");
  tradeoff->add_option("--iters", td_opts.max_iter,
                       "Iteration cap (default 2000)");
  tradeoff->add_option("--n-max", td_opts.n_max,
                       "Relaxed batch cap (default 1e4)");
  tradeoff->add_option("--tol", td_opts.tol,
                       "Simplex tolerance (default 1e-8)");
  tradeoff->add_option("--seed", td_opts.seed, "Restart seed (default 1)")
      ->envname("FORKSCHED_SEED");
  tradeoff->add_option("--out", td_out, "Write output to this file");
  tradeoff->callback([&]() {
    const TradeoffSweep sweep = tradeoff_sweep(
        td_c, td_mu, td_lambda, td_k, parse_beta_grid(td_grid), td_opts);
    std::string csv = "beta,ES,EW,joint,stages_json\n";
    for (const TradeoffPoint& p : sweep.frontier)
      csv += frontier_csv_row(p.beta, p.metrics.mean_completion,
                              p.metrics.mean_utilization, p.joint,
                              stages_json_string(p.schedule));
    emit(csv, td_out);
  });

  // baseline
  auto* base = app.add_subcommand(
      "baseline", "Checkpoint-replication comparator metrics and frontier");
  double bl_c = 0, bl_mu = 0, bl_lambda = 1.0, bl_p = 0, bl_r = 0, bl_t1 = 0;
  double bl_gamma = kEulerGamma;
  int bl_k = 0, bl_n = 0;
  std::string bl_grid, bl_out;
  base->add_option("--K", bl_k, "Parallel tasks")->required();
  base->add_option("--c", bl_c, "Startup shift")->required();
  base->add_option("--mu", bl_mu, "Exponential rate")->required();
  base->add_option("--lambda", bl_lambda, "Cost rate (default 1)");
  base->add_option("--gamma-em", bl_gamma,
                   "Euler-Mascheroni value (default 0.5772156649; the "
                   "published tables used 0.577)");
  auto* opt_p = base->add_option("--p", bl_p, "Unfinished fraction at fork");
  auto* opt_r = base->add_option("--r", bl_r, "Replicas per unfinished task");
  auto* opt_n = base->add_option("--N", bl_n, "Map: servers per task");
  auto* opt_t1 = base->add_option("--t1", bl_t1, "Map: forking time");
  auto* opt_grid =
      base->add_option("--beta-grid", bl_grid, "a:b:steps frontier sweep");
  base->add_option("--out", bl_out, "Write output to this file");
  base->callback([&]() {
    if (*opt_grid) {
      const std::vector<BaselinePoint> frontier = baseline_frontier(
          bl_k, bl_c, bl_mu, bl_lambda, parse_beta_grid(bl_grid), bl_gamma);
      std::string csv = "beta,ES,EW,joint,stages_json\n";
      for (const BaselinePoint& b : frontier) {
        const double t1 = bl_c + (1.0 - b.p) / bl_mu;
        csv += frontier_csv_row(b.beta, b.ES, b.EW, b.joint,
                                "[[0,1],[" + format_shortest(t1) + "," +
                                    format_shortest(b.r) + "]]");
      }
      emit(csv, bl_out);
      return;
    }
    if (*opt_p && *opt_r) {
      const Metrics m = baseline_metrics(
          BaselineParams{bl_p, bl_r, bl_k, bl_c, bl_mu, bl_gamma}, bl_lambda);
      emit("ES=" + format_sig10(m.mean_completion) + "\nEW=" +
               format_sig10(m.mean_utilization) + "\n",
           bl_out);
      return;
    }
    if (*opt_n && *opt_t1) {
      const BaselineParams bp =
          map_schedule_to_baseline(bl_n, bl_t1, bl_c, bl_mu, bl_k, bl_gamma);
      const Metrics m = baseline_metrics(bp, bl_lambda);
      emit("p=" + format_sig10(bp.p) + "\nr=" + format_sig10(bp.r) + "\nES=" +
               format_sig10(m.mean_completion) + "\nEW=" +
               format_sig10(m.mean_utilization) + "\n",
           bl_out);
      return;
    }
    throw validation_error(
        "baseline needs --p with --r, or --N with --t1, or --beta-grid");
  });

  // two-fork-grid
  auto* grid2 = app.add_subcommand(
      "two-fork-grid", "Exhaustive two-fork allocation sweep");
  double tf_t = 0, tf_s = 0, tf_c = 0, tf_mu = 0, tf_lambda = 1.0;
  int tf_n = 0, tf_k = 0, tf_threads = 1;
  long long tf_runs = 100000;
  std::uint64_t tf_seed = 12345;
  std::string tf_eval = "analytic", tf_out;
  grid2->add_option("--N", tf_n, "Servers per task")->required();
  grid2->add_option("--t", tf_t, "First forking instant")->required();
  grid2->add_option("--s", tf_s, "Second forking instant")->required();
  grid2->add_option("--c", tf_c, "Startup shift")->required();
  grid2->add_option("--mu", tf_mu, "Exponential rate")->required();
  grid2->add_option("--lambda", tf_lambda, "Cost rate (default 1)");
  grid2->add_option("--K", tf_k, "Parallel tasks")->required();
  grid2
      ->add_option("--evaluator", tf_eval,
                   "analytic (gaps >= c) or simulate")
      ->check(CLI::IsMember({"analytic", "simulate"}));
  grid2->add_option("--runs", tf_runs, "Simulate evaluator runs");
  grid2->add_option("--seed", tf_seed, "Simulate evaluator seed")
      ->envname("FORKSCHED_SEED");
  grid2->add_option("--threads", tf_threads,
                    "Worker threads; does not change results");
  grid2->add_option("--out", tf_out, "Write output to this file");
  grid2->callback([&]() {
    TwoForkOptions opts;
    opts.evaluator = tf_eval == "simulate" ? GridEvaluator::simulate
                                           : GridEvaluator::analytic;
    opts.runs = tf_runs;
    opts.seed = tf_seed;
    opts.threads = tf_threads;
    const std::vector<TwoForkCell> cells =
        two_fork_grid(tf_n, tf_t, tf_s, tf_c, tf_mu, tf_lambda, tf_k, opts);
    std::string csv = "m0,m1,stages,ES,EW,S_se,W_se\n";
    for (const TwoForkCell& cell : cells)
      csv += std::to_string(cell.m0) + "," + std::to_string(cell.m1) + ",\"" +
             stages_json_string(cell.schedule) + "\"," +
             format_shortest(cell.ES) + "," + format_shortest(cell.EW) + "," +
             format_shortest(cell.S_se) + "," + format_shortest(cell.W_se) +
             "\n";
    emit(csv, tf_out);
  });

  // reproduce
  auto* repro = app.add_subcommand(
      "reproduce", "Emit a reference-figure CSV table (fig2|fig3|fig4|fig7)");
  std::string rp_which, rp_grid, rp_out;
  double rp_gamma = 0.577;
  OptimizerOptions rp_opts;
  repro->add_option("figure", rp_which, "One of fig2, fig3, fig4, fig7")
      ->required();
  repro->add_option("--gamma-em", rp_gamma,
                    "fig4 comparator gamma (default 0.577, figure-exact)");
  repro->add_option("--beta-grid", rp_grid,
                    "fig7 proposed sweep override (a:b:steps)");
  repro->add_option("--seed", rp_opts.seed, "fig7 optimizer seed (default 1)")
      ->envname("FORKSCHED_SEED");
  repro->add_option("--out", rp_out, "Write output to this file");
  repro->callback([&]() {
    if (rp_which == "fig2") {
      emit(fig2_table(), rp_out);
    } else if (rp_which == "fig3") {
      emit(fig3_table(), rp_out);
    } else if (rp_which == "fig4") {
      emit(fig4_table(rp_gamma), rp_out);
    } else if (rp_which == "fig7") {
      const std::vector<double> proposed =
          rp_grid.empty() ? log_grid(2e-4, 3.0, 48) : parse_beta_grid(rp_grid);
      emit(fig7_table(rp_opts, proposed, log_grid(1e-4, 10.0, 60)), rp_out);
    } else {
      throw validation_error(
          "reproduce: figure must be one of fig2, fig3, fig4, fig7");
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
