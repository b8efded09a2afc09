#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Row {
  double omega;
  double intensity;
};

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("curvex_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(CURVEX_CLI_PATH) + " " + args + " --out " + out.string() +
                          " > " + (out / "stdout.txt").string() + " 2> " +
                          (out / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<Row> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  CHECK(line == "omega_cm1,intensity");
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    rows.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return rows;
}

std::vector<double> local_maxima(const std::vector<Row>& rows) {
  std::vector<double> peaks;
  for (std::size_t j = 1; j + 1 < rows.size(); ++j)
    if (rows[j].intensity > rows[j - 1].intensity && rows[j].intensity > rows[j + 1].intensity)
      peaks.push_back(rows[j].omega);
  return peaks;
}

}  // namespace

TEST_CASE("default absorption run") {
  const auto dir = scratch("default");
  REQUIRE(run("absorption", dir) == 0);
  for (const char* name : {"absorption_coupled.csv", "absorption_uncoupled.csv"}) {
    const auto rows = read_csv(dir / name);
    CHECK(rows.size() == 401);
    CHECK(rows.front().omega == 9500.0);
    CHECK(rows.back().omega == 13500.0);
  }
  CHECK(fs::exists(dir / "absorption_coupled.meta.txt"));
  CHECK(slurp(dir / "absorption_coupled.csv") != slurp(dir / "absorption_uncoupled.csv"));
}

TEST_CASE("reruns are byte identical and sidecars reproduce the run") {
  const auto a = scratch("rerun_a");
  const auto b = scratch("rerun_b");
  const auto c = scratch("rerun_c");
  REQUIRE(run("raman --gamma 300", a) == 0);
  REQUIRE(run("raman --gamma 300", b) == 0);
  CHECK(slurp(a / "raman_coupled.csv") == slurp(b / "raman_coupled.csv"));
  CHECK(slurp(a / "raman_uncoupled.csv") == slurp(b / "raman_uncoupled.csv"));
  REQUIRE(run("raman --config " + (a / "raman_coupled.meta.txt").string(), c) == 0);
  CHECK(slurp(a / "raman_coupled.csv") == slurp(c / "raman_coupled.csv"));
}

TEST_CASE("zero coupling writes identical coupled and uncoupled spectra") {
  const auto dir = scratch("k0");
  REQUIRE(run("absorption --k0 0", dir) == 0);
  CHECK(slurp(dir / "absorption_coupled.csv") == slurp(dir / "absorption_uncoupled.csv"));
}

TEST_CASE("narrow damping resolves the vibronic progression") {
  const auto dir = scratch("narrow");
  REQUIRE(run("absorption --gamma 20 --k0 0", dir) == 0);
  const auto peaks = local_maxima(read_csv(dir / "absorption_uncoupled.csv"));
  REQUIRE(peaks.size() >= 3);
  CHECK(peaks[0] == 10700.0);
  CHECK(peaks[1] == 11100.0);
  CHECK(peaks[2] == 11500.0);
}

TEST_CASE("Raman vanishes for an undisplaced allowed curve") {
  const auto dir = scratch("undisplaced");
  REQUIRE(run("raman --nf 1 --displacement 0", dir) == 0);
  for (const auto& r : read_csv(dir / "raman_uncoupled.csv")) CHECK(r.intensity < 1e-20);
}

TEST_CASE("second overtone profile") {
  const auto dir = scratch("nf2");
  REQUIRE(run("raman --nf 2", dir) == 0);
  const auto rows = read_csv(dir / "raman_coupled.csv");
  CHECK(rows.size() == 401);
  CHECK(slurp(dir / "raman_coupled.meta.txt").find("final_state = 2") != std::string::npos);
}

TEST_CASE("configuration errors exit with status 2") {
  const auto dir = scratch("errors");
  CHECK(run("absorption --set model.mass_amu=-1", dir) == 2);
  CHECK(run("absorption --set model.unknown=1", dir) == 2);
  const auto ini = dir / "bad.ini";
  std::ofstream(ini) << "[model]\n# comment\ngamma_cm1 = wide\n";
  CHECK(run("absorption --config " + ini.string(), dir) == 2);
  CHECK(slurp(dir / "stderr.txt").find("line 3") != std::string::npos);
}

TEST_CASE("quick validation passes on the defaults") {
  const auto dir = scratch("validate");
  CHECK(run("validate --quick", dir) == 0);
  CHECK(slurp(dir / "stdout.txt").find("FAIL") == std::string::npos);
}

TEST_CASE("greens probe") {
  const auto dir = scratch("probe");
  REQUIRE(run("greens-probe --set scan.step_cm1=100", dir) == 0);
  std::ifstream in(dir / "greens_probe.csv");
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 41);
}
