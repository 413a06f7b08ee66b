#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "ionsense/csv.hpp"
#include "ionsense/fit.hpp"

namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int exit_code;
  std::string output;
};

// Runs the CLI with stdout+stderr captured to a file.
CommandResult run_cli(const std::string& args, const fs::path& workdir) {
  const fs::path out = workdir / "cmd_output.txt";
  const std::string cmd = "cd '" + workdir.string() + "' && '" +
                          std::string(IONSENSE_CLI_PATH) + "' " + args + " > '" +
                          out.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  CommandResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  res.output = ss.str();
  return res;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ionsense_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("sensitivity subcommand prints the closed forms") {
  const fs::path dir = fresh_dir("sensitivity");
  CommandResult res = run_cli(
      "sensitivity --probe jc --omega 1.8e5 --g 4e3 --z 14.5e-9 --heating 10",
      dir);
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("2.41314218144e-24") != std::string::npos);
  CHECK(res.output.find("optimal t = 0.05") != std::string::npos);

  res = run_cli(
      "sensitivity --probe jc --omega 1.8e5 --g 4e3 --z 14.5e-9 --time 0.02",
      dir);
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("2.31422549912e-24") != std::string::npos);

  // Neither a time nor a heating rate: nothing to compute.
  res = run_cli("sensitivity --probe jc --omega 1.8e5 --g 4e3 --z 14.5e-9", dir);
  CHECK(res.exit_code == 2);
}

TEST_CASE("simulate subcommand writes a fittable signal") {
  const fs::path dir = fresh_dir("simulate");
  fs::copy_file(fs::path(IONSENSE_CONFIG_DIR) / "fig1a.cfg", dir / "fig1a.cfg");
  CommandResult res = run_cli("simulate --config fig1a.cfg", dir);
  CHECK(res.exit_code == 0);
  REQUIRE(fs::exists(dir / "fig1a_signal.csv"));
  CHECK(fs::exists(dir / "fig1a_signal.csv.meta.json"));
  CHECK(fs::exists(dir / "fig1a_signal.svg"));

  const ionsense::CsvTable table =
      ionsense::read_csv((dir / "fig1a_signal.csv").string());
  REQUIRE(table.column_index("t_seconds") == 0);
  REQUIRE(table.column_index("p_up") == 1);
  REQUIRE(table.column_index("tail_x") == 2);

  std::vector<double> t, p;
  for (const auto& row : table.rows) {
    t.push_back(row[0]);
    p.push_back(row[1]);
  }
  const auto fit = ionsense::fit_damped_cosine(t, p);
  CHECK(fit.omega == doctest::Approx(32.35213240941705).epsilon(0.03));
}

TEST_CASE("identical configs give byte-identical output") {
  const fs::path dir_a = fresh_dir("determinism_a");
  const fs::path dir_b = fresh_dir("determinism_b");
  for (const auto& dir : {dir_a, dir_b}) {
    fs::copy_file(fs::path(IONSENSE_CONFIG_DIR) / "fig3.cfg", dir / "fig3.cfg");
    CommandResult res = run_cli("simulate --config fig3.cfg", dir);
    REQUIRE(res.exit_code == 0);
  }
  CHECK(read_file(dir_a / "fig3_signal.csv") ==
        read_file(dir_b / "fig3_signal.csv"));
}

TEST_CASE("config errors exit with code 2") {
  const fs::path dir = fresh_dir("config_errors");

  std::ofstream(dir / "bad_key.cfg") << "probe = jc\n[params]\nbogus = 1\n";
  CHECK(run_cli("simulate --config bad_key.cfg", dir).exit_code == 2);

  std::ofstream(dir / "bad_value.cfg") << "probe = maybe\n";
  CHECK(run_cli("simulate --config bad_value.cfg", dir).exit_code == 2);

  CHECK(run_cli("simulate --config missing.cfg", dir).exit_code == 2);

  // Sweep config without any range.
  std::ofstream(dir / "no_range.cfg")
      << "probe = jc\n[params]\ng = 4e3\nomega = 1.7e5\nz = 14.5e-9\n"
      << "force = 20e-24\n[grid]\nstart = 0\nstop = 0.01\npoints = 2\n"
      << "[sweep]\nmetrics = sensitivity_shot\n[output]\ncsv = out.csv\n";
  CHECK(run_cli("sweep --config no_range.cfg", dir).exit_code == 2);

  // Empty range is a parse error.
  std::ofstream(dir / "empty_range.cfg")
      << "probe = jc\n[sweep]\nparams.g = 5e3:1e3:4e3\n";
  CHECK(run_cli("sweep --config empty_range.cfg", dir).exit_code == 2);

  CHECK(run_cli("reproduce --figure fig9", dir).exit_code == 2);
}

TEST_CASE("sweep subcommand produces the contrast table") {
  const fs::path dir = fresh_dir("sweep");
  std::ofstream(dir / "contrast.cfg")
      << "probe = jc\n[params]\ng = 4e3\nomega = 1.7e5\nz = 14.5e-9\n"
      << "force = 20e-24\ndrive = 1e4\n[initial]\nstate = thermal\n"
      << "[grid]\nstart = 0\nstop = 0.0971\npoints = 2\n[space]\ncutoff = 20\n"
      << "[sweep]\ninitial.nbar = 0:1:2\nmetrics = contrast_undriven\n"
      << "[output]\ncsv = contrast.csv\n";
  CommandResult res = run_cli("sweep --config contrast.cfg", dir);
  CHECK(res.exit_code == 0);
  const ionsense::CsvTable table = ionsense::read_csv((dir / "contrast.csv").string());
  REQUIRE(table.rows.size() == 3);
  CHECK(table.columns[0] == "initial.nbar");
  CHECK(table.columns[1] == "contrast_undriven");
  // Contrast degrades with temperature.
  CHECK(table.rows[0][1] > table.rows[1][1]);
  CHECK(table.rows[1][1] > table.rows[2][1]);
}

TEST_CASE("verify-sw subcommand") {
  const fs::path dir = fresh_dir("verify");
  CommandResult res = run_cli("verify-sw --kind qr", dir);
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("double commutator") != std::string::npos);
  CHECK(res.output.find("PASS") != std::string::npos);
  CHECK(res.output.find("FAIL") == std::string::npos);
}

TEST_CASE("estimate subcommand round trip through files") {
  const fs::path dir = fresh_dir("estimate");
  fs::copy_file(fs::path(IONSENSE_CONFIG_DIR) / "fig3.cfg", dir / "fig3.cfg");
  REQUIRE(run_cli("simulate --config fig3.cfg", dir).exit_code == 0);

  CommandResult res = run_cli(
      "estimate --probe qr --g 4e3 --omega 1.7e5 --z 14.5e-9 "
      "--signal fig3_signal.csv",
      dir);
  CHECK(res.exit_code == 0);
  const auto pos = res.output.find("force_newton = ");
  REQUIRE(pos != std::string::npos);
  const double force = std::stod(res.output.substr(pos + 15));
  CHECK(force == doctest::Approx(20e-24).epsilon(0.03));
}

TEST_CASE("reproduce subcommand writes figure data") {
  const fs::path dir = fresh_dir("reproduce");
  CommandResult res = run_cli("reproduce --figure fig4b --outdir out", dir);
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(dir / "out" / "fig4b.csv"));
  CHECK(fs::exists(dir / "out" / "fig4b.svg"));

  REQUIRE(run_cli("reproduce --figure fig2 --outdir out", dir).exit_code == 0);
  const ionsense::CsvTable fig2 =
      ionsense::read_csv((dir / "out" / "fig2_analytic.csv").string());
  const int tc = fig2.column_index("t_seconds");
  const int sc = fig2.column_index("sens_omega_180k");
  REQUIRE(tc >= 0);
  REQUIRE(sc >= 0);
  double closest = 1e9, value = 0.0;
  for (const auto& row : fig2.rows) {
    if (std::abs(row[tc] - 0.02) < closest) {
      closest = std::abs(row[tc] - 0.02);
      value = row[sc];
    }
  }
  CHECK(value == doctest::Approx(2.314225499117334e-24).epsilon(0.01));

  REQUIRE(run_cli("reproduce --figure fig1a --outdir out", dir).exit_code == 0);
  const ionsense::CsvTable fig1a =
      ionsense::read_csv((dir / "out" / "fig1a.csv").string());
  const int dc = fig1a.column_index("p_up_driven_exact");
  const int ic = fig1a.column_index("p_up_ideal");
  REQUIRE(dc >= 0);
  REQUIRE(ic >= 0);
  double max_dev = 0.0;
  for (const auto& row : fig1a.rows) {
    max_dev = std::max(max_dev, std::abs(row[dc] - row[ic]));
  }
  CHECK(max_dev <= 0.05);
}

TEST_CASE("sw residual sweep fixture reports the cubic scaling") {
  const fs::path dir = fresh_dir("sw_sweep");
  fs::copy_file(fs::path(IONSENSE_CONFIG_DIR) / "sw_residual_sweep.cfg",
                dir / "sw_residual_sweep.cfg");
  REQUIRE(run_cli("sweep --config sw_residual_sweep.cfg", dir).exit_code == 0);
  const ionsense::CsvTable table =
      ionsense::read_csv((dir / "sw_residual.csv").string());
  REQUIRE(table.rows.size() == 4);
  std::vector<double> lg, lr;
  for (const auto& row : table.rows) {
    lg.push_back(std::log(row[0]));
    lr.push_back(std::log(row[1]));
  }
  CHECK(ionsense::fit_line(lg, lr).slope == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("cpmg protocol config runs end to end") {
  const fs::path dir = fresh_dir("cpmg");
  std::ofstream(dir / "cpmg.cfg")
      << "probe = jt\n[params]\ng = 4e3\nomega = 1.7e5\nz = 12e-9\n"
      << "force_x = 20e-24\nforce_y = 15e-24\n[initial]\nstate = fock\n"
      << "[protocol]\nkind = cpmg\norder = 2\n"
      << "[grid]\nstart = 0\nstop = 0.02\npoints = 9\n"
      << "[space]\ncutoff_x = 6\ncutoff_y = 6\n[output]\ncsv = cpmg.csv\n";
  CommandResult res = run_cli("simulate --config cpmg.cfg", dir);
  CHECK(res.exit_code == 0);
  const ionsense::CsvTable table = ionsense::read_csv((dir / "cpmg.csv").string());
  REQUIRE(table.rows.size() == 9);
  CHECK(table.column_index("tail_y") == 3);
  for (const auto& row : table.rows) {
    CHECK(row[1] >= -1e-9);
    CHECK(row[1] <= 1.0 + 1e-9);
  }
}

TEST_CASE("lindblad protocol config runs end to end") {
  const fs::path dir = fresh_dir("lindblad");
  std::ofstream(dir / "damped.cfg")
      << "probe = jc\n[params]\ng = 4e3\nomega = 1.7e5\nz = 14.5e-9\n"
      << "force = 20e-24\nheating = 10\n[initial]\nstate = thermal\nnbar = 0.3\n"
      << "[protocol]\nkind = lindblad\n"
      << "[grid]\nstart = 0.002\nstop = 0.05\npoints = 8\n"
      << "[space]\ncutoff = 10\n[output]\ncsv = damped.csv\n";
  CommandResult res = run_cli("simulate --config damped.cfg", dir);
  CHECK(res.exit_code == 0);
  const ionsense::CsvTable table = ionsense::read_csv((dir / "damped.csv").string());
  REQUIRE(table.rows.size() == 8);
}

TEST_CASE("transverse estimate from two phase traces") {
  const fs::path dir = fresh_dir("estimate_jt");
  auto write_cfg = [&](const std::string& name, double phi,
                       const std::string& csv) {
    std::ofstream(dir / name)
        << "probe = jt\n[params]\ng = 4e3\nomega = 1.7e5\nz = 12e-9\n"
        << "force_x = 20e-24\nforce_y = 15e-24\n[initial]\n"
        << "state = superposition\nc_up = 0.70710678118654752\n"
        << "c_down = 0.70710678118654752\nphi = " << phi << "\n"
        << "[grid]\nstart = 0.001\nstop = 0.045\npoints = 40\n"
        << "[space]\ncutoff_x = 8\ncutoff_y = 8\n[output]\ncsv = " << csv << "\n";
  };
  write_cfg("phi_a.cfg", 0.4, "phi_a.csv");
  write_cfg("phi_b.cfg", 2.0, "phi_b.csv");
  REQUIRE(run_cli("simulate --config phi_a.cfg", dir).exit_code == 0);
  REQUIRE(run_cli("simulate --config phi_b.cfg", dir).exit_code == 0);

  CommandResult res = run_cli(
      "estimate --probe jt --g 4e3 --omega 1.7e5 --z 12e-9 "
      "--signal phi_a.csv --phi 0.4 --signal phi_b.csv --phi 2.0",
      dir);
  CHECK(res.exit_code == 0);
  const auto pos = res.output.find("force_magnitude_newton = ");
  REQUIRE(pos != std::string::npos);
  const double force = std::stod(res.output.substr(pos + 25));
  CHECK(force == doctest::Approx(25e-24).epsilon(0.05));

  // One phi per signal is mandatory for this probe.
  CHECK(run_cli("estimate --probe jt --g 4e3 --omega 1.7e5 --z 12e-9 "
                "--signal phi_a.csv",
                dir).exit_code == 2);
}

TEST_CASE("worker cap from the environment keeps sweeps deterministic") {
  const fs::path dir = fresh_dir("threads");
  std::ofstream(dir / "sweep.cfg")
      << "probe = jc\n[params]\ng = 4e3\nomega = 1.8e5\nz = 14.5e-9\n"
      << "force = 20e-24\n[grid]\nstart = 0\nstop = 0.02\npoints = 2\n"
      << "[sweep]\nparams.heating = 1:1:4\nmetrics = sensitivity_heating\n"
      << "[output]\ncsv = sweep.csv\n";

  const std::string base = "sweep --config sweep.cfg";
  REQUIRE(run_cli(base, dir).exit_code == 0);
  const std::string parallel = read_file(dir / "sweep.csv");

  const fs::path out = dir / "cmd_output.txt";
  const std::string serial_cmd = "cd '" + dir.string() +
                                 "' && SIM_THREADS=1 '" +
                                 std::string(IONSENSE_CLI_PATH) + "' " + base +
                                 " > '" + out.string() + "' 2>&1";
  REQUIRE(std::system(serial_cmd.c_str()) == 0);
  CHECK(read_file(dir / "sweep.csv") == parallel);

  const ionsense::CsvTable table = ionsense::read_csv((dir / "sweep.csv").string());
  REQUIRE(table.rows.size() == 4);
  // Heating-limited sensitivity grows with the heating rate.
  CHECK(table.rows[3][1] > table.rows[0][1]);
}
