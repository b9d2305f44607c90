#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "isingcorr/correlate.hpp"
#include "isingcorr/region.hpp"
#include "isingcorr/region_io.hpp"
#include "support.hpp"

using namespace isingcorr;
using namespace testsupport;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(ISINGCORR_CLI_PATH) + " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[512];
  while (std::fgets(buffer, sizeof buffer, pipe)) result.out += buffer;
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/isingcorr_test_" + name + ".json";
  std::ofstream out(path);
  out << content;
  return path;
}

const char* kSquareJson =
    R"({"n": 2, "tau": [3, 4, 1, 2], "theta": [0.0, 0.7853981633974483, 1.5707963267948966, 2.356194490192345]})";

}  // namespace

TEST_CASE("region files parse in all accepted combinations") {
  const Region from_tau_theta = parse_region_json(kSquareJson);
  CHECK(from_tau_theta.n() == 2);

  const Region from_vectors =
      parse_region_json(R"({"vectors": [[1, 0], [0, 1], [-1, 0], [0, -1]]})");
  CHECK(from_vectors.matching().pairing() == std::vector<int>{3, 4, 1, 2});

  const Region from_theta = parse_region_json(
      R"({"theta": [0.0, 0.7853981633974483, 1.5707963267948966, 2.356194490192345]})");
  CHECK(from_theta.matching().pairing() == std::vector<int>{3, 4, 1, 2});

  const Region staple = staple_region();
  std::string staple_json = R"({"tau": [10, 12, 9, 6, 8, 4, 11, 5, 3, 1, 7, 2], "vectors": [)";
  const auto vs = boundary_vectors(staple);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) staple_json += ", ";
    staple_json += "[" + format_double(vs[i][0]) + ", " + format_double(vs[i][1]) + "]";
  }
  staple_json += "]}";
  const Region from_tau_vectors = parse_region_json(staple_json);
  CHECK(from_tau_vectors.matching().pairing() == staple.matching().pairing());
  CHECK(max_abs_diff(correlations(from_tau_vectors), correlations(staple)) <= 1e-9);
}

TEST_CASE("region file validation failures carry their codes") {
  CHECK_THROWS_WITH_AS(parse_region_json("{"), doctest::Contains("parse"), Error);
  CHECK_THROWS_WITH_AS(parse_region_json(R"({"n": 1})"), doctest::Contains("parse"), Error);
  CHECK_THROWS_WITH_AS(
      parse_region_json(R"({"tau": [1, 2], "theta": [0.0, 1.5707963267948966]})"),
      doctest::Contains("fixed-point"), Error);
  CHECK_THROWS_WITH_AS(
      parse_region_json(R"({"tau": [2, 1], "theta": [0.0, 0.5]})"),
      doctest::Contains("theta-pair"), Error);
}

TEST_CASE("correlation matrices round-trip through their JSON form") {
  const CorrelationMatrix m = correlations(staple_region());
  const CorrelationMatrix back = correlations_from_json(correlations_to_json(m));
  REQUIRE(back.n() == m.n());
  for (int j = 1; j <= m.n(); ++j)
    for (int k = 1; k <= m.n(); ++k) CHECK(back(j, k) == m(j, k));
}

TEST_CASE("cli: correlations of the square region") {
  const std::string file = write_temp("square", kSquareJson);
  const RunResult csv = run_cli("correlations " + file + " --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(csv.out.find("j,k,correlation") != std::string::npos);
  CHECK(csv.out.find("1,2,0.41421356") != std::string::npos);

  const RunResult json = run_cli("correlations " + file);
  CHECK(json.exit_code == 0);
  const CorrelationMatrix parsed = correlations_from_json(json.out);
  CHECK(parsed(1, 2) == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-15));
}

TEST_CASE("cli: output bytes are deterministic") {
  const std::string file = write_temp("square2", kSquareJson);
  const RunResult a = run_cli("correlations " + file + " --basis samples --seed 3");
  const RunResult b = run_cli("correlations " + file + " --basis samples --seed 3");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("cli: staple region needs the derivative basis") {
  std::string staple_json = R"({"tau": [10, 12, 9, 6, 8, 4, 11, 5, 3, 1, 7, 2], "theta": )";
  staple_json += "[0, " + format_double(kPi / 4) + ", 0, " + format_double(-kPi / 4) + ", 0, " +
                 format_double(kPi / 4) + ", " + format_double(kPi / 4) + ", " +
                 format_double(kPi / 2) + ", " + format_double(kPi / 2) + ", " +
                 format_double(kPi / 2) + ", " + format_double(3 * kPi / 4) + ", " +
                 format_double(3 * kPi / 4) + "]}";
  const std::string file = write_temp("staple", staple_json);

  const RunResult with_derivative = run_cli("correlations " + file + " --basis derivative");
  CHECK(with_derivative.exit_code == 0);
  const CorrelationMatrix parsed = correlations_from_json(with_derivative.out);
  CHECK(parsed.n() == 6);
  CHECK(max_abs_diff(parsed, correlations(staple_region())) <= 1e-12);

  // the rank-deficient fourier route is a numerical failure, exit 3
  const RunResult with_fourier = run_cli("correlations " + file + " --basis fourier");
  CHECK(with_fourier.exit_code == 3);

  const RunResult check = run_cli("check " + file);
  CHECK(check.exit_code == 0);
  CHECK(check.out.find("oracle-agreement: pass") != std::string::npos);
}

TEST_CASE("cli: validation failures exit 2 and name the invariant") {
  const std::string file =
      write_temp("fixed_point", R"({"tau": [1, 2], "theta": [0.0, 1.5707963267948966]})");
  const RunResult r = run_cli("correlations " + file);
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("fixed-point") != std::string::npos);

  const std::string corrupted =
      write_temp("corrupt_theta", R"({"tau": [3, 4, 1, 2], "theta": [0.0, 0.785, 1.65, 2.356]})");
  const RunResult oracle = run_cli("oracle " + corrupted);
  CHECK(oracle.exit_code == 2);
}

TEST_CASE("cli: regular command in both modes") {
  const RunResult closed = run_cli("regular 2 --format csv");
  CHECK(closed.exit_code == 0);
  CHECK(closed.out.find("1,1\n") != std::string::npos);
  CHECK(closed.out.find("2,0.41421356") != std::string::npos);

  const RunResult n3 = run_cli("regular 3 --format csv");
  CHECK(n3.out.find("2,0.33333333") != std::string::npos);
  CHECK(n3.out.find("3,0.33333333") != std::string::npos);

  const RunResult pipeline = run_cli("regular 6 --mode pipeline");
  CHECK(pipeline.exit_code == 0);

  const RunResult bad = run_cli("regular 0");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: oracle agreement on reference regions") {
  const std::string file = write_temp("square3", kSquareJson);
  const RunResult square = run_cli("oracle " + file + " --placements 5");
  CHECK(square.exit_code == 0);
  CHECK(square.out.find("max_abs_difference") != std::string::npos);

  const std::string hex = write_temp(
      "hex", R"({"tau": [4, 5, 6, 1, 2, 3], "theta": [0.0, 0.5235987755982988, 1.0471975511965976, 1.5707963267948966, 2.0943951023931953, 2.617993877991494]})");
  const RunResult hex_run = run_cli("oracle " + hex);
  CHECK(hex_run.exit_code == 0);
}

TEST_CASE("cli: scaling limit table") {
  const RunResult r = run_cli("limit 0.5 --n-list 64 128 256 512");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("n,scaled_correlation,limit,abs_error") != std::string::npos);
  CHECK(r.out.find("512,") != std::string::npos);
  CHECK(r.out.find(",1,") != std::string::npos);  // 1/sin(pi/2)

  const RunResult bad = run_cli("limit 1.5");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: check passes on the square") {
  const std::string file = write_temp("square4", kSquareJson);
  const RunResult r = run_cli("check " + file);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("orthogonality: pass") != std::string::npos);
  CHECK(r.out.find("doubled-times-k-identity: pass") != std::string::npos);
  CHECK(r.out.find("basis-equivalence: pass") != std::string::npos);
  CHECK(r.out.find("crossing-removal-identity: pass") != std::string::npos);
  CHECK(r.out.find("oracle-agreement: pass") != std::string::npos);
  CHECK(r.out.find("placement-spread: pass") != std::string::npos);

  const RunResult corrupt = run_cli("check /tmp/isingcorr_missing_file.json");
  CHECK(corrupt.exit_code == 2);
}
