#include <catch2/catch_amalgamated.hpp>

#include <bb84eve/measurement.hpp>
#include <bb84eve/optimizer.hpp>
#include <bb84eve/probe.hpp>
#include <bb84eve/strategy_io.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

using namespace bb84eve;

namespace {

std::string scratch_dir() {
  static const std::string dir = [] {
    std::string d = "/tmp/bb84eve_tests_" + std::to_string(::getpid());
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string scratch(const std::string& stem) { return scratch_dir() + "/" + stem; }

int run_cli(const std::string& args, const std::string& stdout_path = "/dev/null",
            const std::string& stderr_path = "/dev/null") {
  const std::string cmd =
      std::string(BB84EVE_CLI_PATH) + " " + args + " > " + stdout_path + " 2> " + stderr_path;
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool strategies_bitwise_equal(const Strategy& a, const Strategy& b) {
  if (a.probe_dim != b.probe_dim) return false;
  for (int i = 0; i < a.image_x.dim(); ++i)
    if (a.image_x[i] != b.image_x[i] || a.image_y[i] != b.image_y[i]) return false;
  for (int m = 0; m < 2; ++m) {
    const Povm& pa = m == 0 ? a.meas_xy : a.meas_uv;
    const Povm& pb = m == 0 ? b.meas_xy : b.meas_uv;
    if (pa.elements.size() != pb.elements.size()) return false;
    for (std::size_t l = 0; l < pa.elements.size(); ++l)
      for (int r = 0; r < pa.dim(); ++r)
        for (int c = 0; c < pa.dim(); ++c)
          if (pa.elements[l].at(r, c) != pb.elements[l].at(r, c)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("strategy serialization round-trips bit for bit") {
  SplitMix64 rng(71);
  std::vector<Strategy> cases;
  cases.push_back(as_strategy(build_optimal(0.1, 0.1)));
  cases.push_back(as_strategy(build_optimal(0.0, 0.0)));
  cases.push_back(as_strategy(build_optimal(0.2, 0.1)));
  for (int k = 0; k < 10; ++k) cases.push_back(random_strategy(rng, k % 2 == 0 ? 2 : 4));

  for (const Strategy& s : cases) {
    const Strategy back = strategy_from_json(strategy_to_json(s));
    CHECK(strategies_bitwise_equal(s, back));
  }

  // Through a file, including the text layer.
  const std::string path = scratch("strategy_roundtrip.json");
  save_strategy(path, cases.front());
  CHECK(strategies_bitwise_equal(load_strategy(path), cases.front()));
}

TEST_CASE("corrupt strategy documents are rejected") {
  const Strategy s = as_strategy(build_optimal(0.1, 0.1));
  nlohmann::json good = strategy_to_json(s);

  nlohmann::json wrong_dim = good;
  wrong_dim["probe_dim"] = 3;
  CHECK_THROWS(strategy_from_json(wrong_dim));

  nlohmann::json missing = good;
  missing.erase("povm_uv");
  CHECK_THROWS(strategy_from_json(missing));

  nlohmann::json skewed = good;
  skewed["images"]["x"]["re"][0] = 7.0;  // breaks normalization
  CHECK_THROWS(strategy_from_json(skewed));

  nlohmann::json bad_uv = good;
  bad_uv["images"]["u"] = bad_uv["images"]["v"];  // no longer the required combination
  CHECK_THROWS(strategy_from_json(bad_uv));

  CHECK_THROWS(load_strategy(scratch("does_not_exist.json")));
}

TEST_CASE("cli reports usage errors and help consistently") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("tradeoff --help") == 0);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("no-such-command") == 2);
  CHECK(run_cli("tradeoff --d-max 0.7") == 2);
  CHECK(run_cli("tradeoff --step -0.01") == 2);
  CHECK(run_cli("simulate --d 0.7") == 2);
  CHECK(run_cli("simulate --n 0") == 2);
  CHECK(run_cli("optimize --probe-dim 3") == 2);
  CHECK(run_cli("verify --suite nonsense") == 2);
  CHECK(run_cli("strategy-dump --format yaml") == 2);
}

TEST_CASE("tradeoff subcommand writes the fixed curve deterministically") {
  const std::string out = scratch("curve.csv");
  const std::string err = scratch("curve.stderr");
  REQUIRE(run_cli("tradeoff --out " + out, "/dev/null", err) == 0);

  const std::string text = slurp(out);
  CHECK(text.rfind("d,g_bound,i_eve_nats,i_eve_bits,i_ab_nats,s_chsh,secure\n", 0) == 0);
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 52);  // header + 51 rows

  CHECK(slurp(err).find("threshold: d* = 0.146446609407") != std::string::npos);

  const std::string out2 = scratch("curve2.csv");
  REQUIRE(run_cli("tradeoff --out " + out2) == 0);
  CHECK(slurp(out2) == text);

  // Same rows in JSON form.
  const std::string jout = scratch("curve.json");
  REQUIRE(run_cli("tradeoff --format json --out " + jout) == 0);
  const nlohmann::json rows = nlohmann::json::parse(slurp(jout));
  REQUIRE(rows.is_array());
  REQUIRE(rows.size() == 51);
  CHECK(rows[0]["d"].get<double>() == 0.0);
  CHECK(rows[0]["secure"].get<bool>() == true);
  CHECK(rows[50]["secure"].get<bool>() == false);
  CHECK(rows[10]["d"].get<double>() == 0.1);
  CHECK(std::abs(rows[10]["s_chsh"].get<double>() - 2.26274169980) < 1e-10);
}

TEST_CASE("simulate subcommand is reproducible and honors the attack switch") {
  const std::string out = scratch("sim.json");
  REQUIRE(run_cli("simulate --n 20000 --seed 3 --out " + out) == 0);
  const std::string text = slurp(out);

  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j["config"]["n"].get<std::uint64_t>() == 20000);
  CHECK(j["config"]["seed"].get<std::uint64_t>() == 3);
  CHECK(j["config"]["attack"].get<bool>() == true);
  CHECK(j.contains("n_sifted"));
  CHECK(j.contains("bob_error_rate"));
  CHECK(j.contains("eve_guess_accuracy"));
  CHECK(j.contains("eve_mi_plugin_nats"));
  CHECK(j["per_basis"].contains("xy"));
  CHECK(j["per_basis"].contains("uv"));

  const std::string out2 = scratch("sim2.json");
  REQUIRE(run_cli("simulate --n 20000 --seed 3 --out " + out2) == 0);
  CHECK(slurp(out2) == text);

  const std::string quiet = scratch("sim_noattack.json");
  REQUIRE(run_cli("simulate --n 20000 --seed 3 --attack off --out " + quiet) == 0);
  const nlohmann::json q = nlohmann::json::parse(slurp(quiet));
  CHECK(q["bob_error_rate"].get<double>() == 0.0);
  CHECK_FALSE(q.contains("eve_guess_accuracy"));
  CHECK_FALSE(q.contains("eve_mi_plugin_nats"));
  CHECK_FALSE(q["per_basis"]["xy"].contains("eve_mi_plugin_nats"));
}

TEST_CASE("optimize subcommand reports convergence through its exit code") {
  const std::string out = scratch("opt.json");
  const int code = run_cli("optimize --probe-dim 2 --d 0.1 --restarts 2 --seed 2024 --out " + out);
  REQUIRE((code == 0 || code == 3));

  const nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j["config"]["probe_dim"].get<int>() == 2);
  CHECK(j["config"]["d_target"].get<double>() == 0.1);
  CHECK(j["converged"].get<bool>() == (code == 0));
  CHECK(j.contains("i_achieved"));
  CHECK(j.contains("d_achieved"));
  CHECK(j.contains("gap_to_bound"));
  CHECK(j.contains("bound_at_d"));
  CHECK(j["restart_objectives"].size() == 2);
  CHECK(j["gap_to_bound"].get<double>() > 0.0);
}

TEST_CASE("verify subcommand passes its own suites") {
  const std::string out = scratch("verify.txt");
  REQUIRE(run_cli("verify", out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("[PASS]") != std::string::npos);
  CHECK(text.find("[FAIL]") == std::string::npos);
  CHECK(text.find("all passed") != std::string::npos);

  CHECK(run_cli("verify --suite bounds") == 0);
  CHECK(run_cli("verify --suite equality") == 0);
  CHECK(run_cli("verify --suite symmetry") == 0);
}

TEST_CASE("strategy-dump emits a loadable attack description") {
  const std::string out = scratch("dump.json");
  REQUIRE(run_cli("strategy-dump --dxy 0.2 --duv 0.1 --out " + out) == 0);

  const Strategy s = load_strategy(out);
  CHECK(s.probe_dim == 4);
  CHECK(std::abs(disturbance(s, Basis::XY) - 0.2) < 1e-12);
  CHECK(std::abs(disturbance(s, Basis::UV) - 0.1) < 1e-12);
  CHECK(is_valid_povm(s.meas_xy));
  CHECK(is_valid_povm(s.meas_uv));

  // Degenerate corners stay serializable.
  const std::string corner = scratch("dump_corner.json");
  REQUIRE(run_cli("strategy-dump --dxy 0 --duv 0 --out " + corner) == 0);
  CHECK(std::abs(avg_disturbance(load_strategy(corner))) < 1e-12);
}
