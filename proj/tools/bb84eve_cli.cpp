// Command-line front end: tradeoff curves, Monte Carlo runs, optimizer
// searches, verification suites, and strategy dumps.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <bb84eve/bb84eve.hpp>

namespace {

using bb84eve::detail::round12;
using ordered_json = nlohmann::ordered_json;
using clock_type = std::chrono::steady_clock;

// All numeric JSON output is rounded to 12 significant digits so repeated
// invocations produce byte-identical files. Strategy dumps are exempt: they
// must round-trip exactly.
int write_text(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return 0;
  }
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs) {
    std::cerr << "error: cannot open output file '" << path << "'\n";
    return 2;
  }
  ofs << content;
  if (!ofs) {
    std::cerr << "error: failed writing '" << path << "'\n";
    return 2;
  }
  return 0;
}

int run_tradeoff(double d_min, double d_max, double step, const std::string& out,
                 const std::string& format) {
  const std::vector<bb84eve::TradeoffRow> rows = bb84eve::tradeoff_curve(d_min, d_max, step);

  std::string payload;
  if (format == "csv") {
    std::ostringstream oss;
    bb84eve::write_tradeoff_csv(oss, rows);
    payload = oss.str();
  } else {
    ordered_json arr = ordered_json::array();
    for (const bb84eve::TradeoffRow& r : rows) {
      ordered_json row;
      row["d"] = round12(r.d);
      row["g_bound"] = round12(r.g_bound);
      row["i_eve_nats"] = round12(r.i_eve_nats);
      row["i_eve_bits"] = round12(r.i_eve_bits);
      row["i_ab_nats"] = round12(r.i_ab_nats);
      row["s_chsh"] = round12(r.s_chsh);
      row["secure"] = r.secure;
      arr.push_back(std::move(row));
    }
    payload = arr.dump(2) + "\n";
  }

  const bb84eve::ThresholdResult th = bb84eve::threshold();
  std::fprintf(stderr, "threshold: d* = %s (listener bound meets the key channel; chsh crosses 2)\n",
               bb84eve::detail::g12(th.closed_form).c_str());
  return write_text(out, payload);
}

int run_simulate(double d, std::uint64_t n, std::uint64_t seed, int workers,
                 const std::string& attack, const std::string& out) {
  bb84eve::ProtocolConfig cfg;
  cfg.d = d;
  cfg.rounds = n;
  cfg.seed = seed;
  cfg.workers = workers;
  cfg.attack = attack == "on";

  const auto t0 = clock_type::now();
  const bb84eve::TranscriptSummary sum = bb84eve::run(cfg);
  const double wall = std::chrono::duration<double>(clock_type::now() - t0).count();

  ordered_json j;
  j["config"] = {{"d", round12(cfg.d)},
                 {"n", cfg.rounds},
                 {"seed", cfg.seed},
                 {"workers", cfg.workers},
                 {"attack", cfg.attack}};
  j["n_sifted"] = sum.n_sifted;
  j["sifted_fraction"] = round12(sum.sifted_fraction);
  j["bob_error_rate"] = round12(sum.bob_error_rate);
  if (sum.eve_guess_accuracy) j["eve_guess_accuracy"] = round12(*sum.eve_guess_accuracy);
  if (sum.eve_mi_plugin_nats) j["eve_mi_plugin_nats"] = round12(*sum.eve_mi_plugin_nats);
  ordered_json per;
  for (bb84eve::Basis b : {bb84eve::Basis::XY, bb84eve::Basis::UV}) {
    const bb84eve::BasisSummary& bs = sum.per_basis[static_cast<std::size_t>(b)];
    ordered_json jb;
    jb["n_sifted"] = bs.n_sifted;
    jb["bob_error_rate"] = round12(bs.bob_error_rate);
    if (bs.eve_guess_accuracy) jb["eve_guess_accuracy"] = round12(*bs.eve_guess_accuracy);
    if (bs.eve_mi_plugin_nats) jb["eve_mi_plugin_nats"] = round12(*bs.eve_mi_plugin_nats);
    per[bb84eve::name(b)] = std::move(jb);
  }
  j["per_basis"] = std::move(per);

  std::fprintf(stderr, "simulate: %llu rounds in %.3f s\n",
               static_cast<unsigned long long>(cfg.rounds), wall);
  return write_text(out, j.dump(2) + "\n");
}

int run_optimize(int probe_dim, double d, int restarts, std::uint64_t seed,
                 const std::string& out) {
  bb84eve::SearchConfig cfg;
  cfg.probe_dim = probe_dim;
  cfg.d_target = d;
  cfg.restarts = restarts;
  cfg.seed = seed;

  const auto t0 = clock_type::now();
  const bb84eve::SearchResult res = bb84eve::run_search(cfg);
  const double wall = std::chrono::duration<double>(clock_type::now() - t0).count();

  ordered_json j;
  j["config"] = {{"probe_dim", cfg.probe_dim},
                 {"d_target", round12(cfg.d_target)},
                 {"restarts", cfg.restarts},
                 {"seed", cfg.seed},
                 {"max_iters", cfg.max_iters},
                 {"tolerance", round12(cfg.tolerance)},
                 {"penalty_weight", round12(cfg.penalty_weight)}};
  j["i_achieved"] = round12(res.i_achieved);
  j["d_achieved"] = round12(res.d_achieved);
  j["gap_to_bound"] = round12(res.gap_to_bound);
  j["bound_at_d"] = round12(bb84eve::info_bound(res.d_achieved));
  j["converged"] = res.converged;
  j["best_restart"] = res.best_restart;
  j["max_bound_violation"] = round12(res.max_bound_violation);
  ordered_json objs = ordered_json::array();
  for (double o : res.restart_objectives) objs.push_back(round12(o));
  j["restart_objectives"] = std::move(objs);

  std::fprintf(stderr, "optimize: %d restarts in %.3f s\n", cfg.restarts, wall);
  const int write_rc = write_text(out, j.dump(2) + "\n");
  if (write_rc != 0) return write_rc;
  return res.converged ? 0 : 3;
}

int run_verify(const std::string& suite) {
  std::vector<bb84eve::Check> checks;
  if (suite == "bounds") {
    checks = bb84eve::verify_bounds();
  } else if (suite == "equality") {
    checks = bb84eve::verify_equality();
  } else if (suite == "symmetry") {
    checks = bb84eve::verify_symmetry();
  } else {
    checks = bb84eve::verify_all();
  }
  std::size_t width = 0;
  for (const bb84eve::Check& c : checks) width = std::max(width, c.name.size());
  for (const bb84eve::Check& c : checks) {
    std::printf("[%s] %-*s %s\n", c.pass ? "PASS" : "FAIL", static_cast<int>(width),
                c.name.c_str(), c.detail.c_str());
  }
  const bool ok = bb84eve::all_pass(checks);
  std::printf("%zu checks, %s\n", checks.size(), ok ? "all passed" : "FAILURES PRESENT");
  return ok ? 0 : 1;
}

int run_strategy_dump(double dxy, double duv, const std::string& out) {
  const bb84eve::ProbeInteraction probe = bb84eve::build_optimal(dxy, duv);
  const ordered_json j = bb84eve::strategy_to_json(bb84eve::as_strategy(probe));
  return write_text(out, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal individual-attack toolkit for BB84 quantum key distribution"};
  app.require_subcommand(1);

  double d_min = 0.0, d_max = 0.5, step = 0.01;
  std::string tr_out, tr_format = "csv";
  CLI::App* tradeoff = app.add_subcommand("tradeoff", "Emit the information-disturbance curve");
  tradeoff->add_option("--d-min", d_min, "Lower end of the disturbance range")
      ->capture_default_str();
  tradeoff->add_option("--d-max", d_max, "Upper end of the disturbance range")
      ->capture_default_str();
  tradeoff->add_option("--step", step, "Grid step")->capture_default_str();
  tradeoff->add_option("--out", tr_out, "Output path (default: stdout)");
  tradeoff->add_option("--format", tr_format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  double sim_d = 0.1;
  std::uint64_t sim_n = 100000, sim_seed = 1;
  int sim_workers = 1;
  std::string sim_attack = "on", sim_out;
  CLI::App* simulate = app.add_subcommand("simulate", "Run the Monte Carlo protocol simulation");
  simulate->add_option("--d", sim_d, "Attack strength (per-basis disturbance)")
      ->check(CLI::Range(0.0, 0.5))
      ->capture_default_str();
  simulate->add_option("--n", sim_n, "Number of signals")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
  simulate->add_option("--workers", sim_workers, "Worker thread count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--attack", sim_attack, "Attack on or off")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  simulate->add_option("--out", sim_out, "Output path (default: stdout)");

  int opt_dim = 4, opt_restarts = 8;
  double opt_d = 0.1;
  std::uint64_t opt_seed = 1;
  std::string opt_out;
  CLI::App* optimize = app.add_subcommand("optimize", "Search for an optimal strategy numerically");
  optimize->add_option("--probe-dim", opt_dim, "Listener probe dimension")
      ->check(CLI::IsMember({2, 4}))
      ->capture_default_str();
  optimize->add_option("--d", opt_d, "Target average disturbance")
      ->check(CLI::Range(0.0, 0.5))
      ->capture_default_str();
  optimize->add_option("--restarts", opt_restarts, "Random restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  optimize->add_option("--seed", opt_seed, "RNG seed")->capture_default_str();
  optimize->add_option("--out", opt_out, "Output path (default: stdout)");

  std::string ver_suite = "all";
  CLI::App* verify = app.add_subcommand("verify", "Run the verification suites");
  verify->add_option("--suite", ver_suite, "Which suite to run")
      ->check(CLI::IsMember({"bounds", "equality", "symmetry", "all"}))
      ->capture_default_str();

  double dump_dxy = 0.1, dump_duv = 0.1;
  std::string dump_format = "json", dump_out;
  CLI::App* dump = app.add_subcommand("strategy-dump", "Serialize the optimal strategy");
  dump->add_option("--dxy", dump_dxy, "Disturbance in the computational basis")
      ->check(CLI::Range(0.0, 0.5))
      ->capture_default_str();
  dump->add_option("--duv", dump_duv, "Disturbance in the conjugate basis")
      ->check(CLI::Range(0.0, 0.5))
      ->capture_default_str();
  dump->add_option("--format", dump_format, "Output format")
      ->check(CLI::IsMember({"json"}))
      ->capture_default_str();
  dump->add_option("--out", dump_out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(tradeoff)) return run_tradeoff(d_min, d_max, step, tr_out, tr_format);
    if (app.got_subcommand(simulate))
      return run_simulate(sim_d, sim_n, sim_seed, sim_workers, sim_attack, sim_out);
    if (app.got_subcommand(optimize))
      return run_optimize(opt_dim, opt_d, opt_restarts, opt_seed, opt_out);
    if (app.got_subcommand(verify)) return run_verify(ver_suite);
    if (app.got_subcommand(dump)) return run_strategy_dump(dump_dxy, dump_duv, dump_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
