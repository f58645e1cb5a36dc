#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fkdv/config.hpp"
#include "fkdv/errors.hpp"
#include "fkdv/io.hpp"
#include "fkdv/transform.hpp"

using namespace fkdv;
namespace fs = std::filesystem;

namespace {

const std::string kMinimal =
    "[sim]\n"
    "alpha=0.5\n"
    "n=4096\n"
    "length=200\n"
    "dt=1e-3\n"
    "t_final=1\n"
    "ic=gaussian(0.2,1,0)\n";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fkdv_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string error_of(const std::string& text) {
  try {
    RunConfig rc = parse_config(text);
    finalize(rc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FKDV_BIN) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) { return read_text(p.string()); }

}  // namespace

TEST_CASE("minimal config parses") {
  RunConfig rc = parse_config(kMinimal);
  finalize(rc);
  CHECK(rc.sim.alpha == 0.5);
  CHECK(rc.sim.n == 4096);
  CHECK(rc.sim.length == 200.0);
  CHECK(rc.sim.ic.family == IcFamily::gaussian);
  CHECK(rc.sim.ic.amplitude == 0.2);
}

TEST_CASE("config errors name the key") {
  CHECK(error_of(kMinimal + "foo=1\n").find("unknown key 'foo'") != std::string::npos);
  std::string zero = kMinimal;
  zero.replace(zero.find("alpha=0.5"), 9, "alpha=0");
  CHECK(error_of(zero).find("alpha must be nonzero") != std::string::npos);
  std::string missing = kMinimal;
  missing.erase(missing.find("dt=1e-3\n"), 8);
  CHECK(error_of(missing).find("dt") != std::string::npos);
  CHECK(error_of(kMinimal + "alpha=0.3\n").find("alpha") != std::string::npos);
  CHECK(error_of(kMinimal + "[nope]\n").find("nope") != std::string::npos);
  CHECK(error_of(kMinimal + "n=abc\n").find("n") != std::string::npos);
}

TEST_CASE("overrides") {
  RunConfig rc = parse_config(kMinimal);
  apply_setting(rc, "sim.alpha=-0.5");
  apply_setting(rc, "lambda=3");
  apply_setting(rc, "run.seed=7");
  CHECK(rc.sim.alpha == -0.5);
  CHECK(rc.params.lambda == 3.0);
  CHECK(rc.seed == 7);
  CHECK_THROWS_AS(apply_setting(rc, "bogus=1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(rc, "no_equals"), ConfigError);
}

TEST_CASE("manifest round trip") {
  RunConfig rc = parse_config(kMinimal + "weight_orders=1,2\n[experiment]\nname=tstar\nl_list=100,300\n");
  finalize(rc);
  ManifestInfo info{"fkdv simulate", "2026-01-01T00:00:00Z", "2026-01-01T00:00:01Z", false};
  const std::string m = render_manifest(rc, info);
  CHECK(m.find("schema_version=1") != std::string::npos);
  RunConfig back = parse_config(m);
  finalize(back);
  CHECK(render_manifest(back, info) == m);
  CHECK(back.sim.weight_orders == std::vector<double>{1.0, 2.0});
  CHECK(back.params.l_list == std::vector<double>{100.0, 300.0});

  std::string bad = m;
  bad.replace(bad.find("schema_version=1"), 16, "schema_version=9");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("field files round trip") {
  const fs::path dir = scratch("field");
  auto g = make_grid(256, 20.0);
  const Field f = sample(g, [](double x) { return std::exp(-x * x) * std::sin(3 * x); });
  write_field((dir / "u.csv").string(), f);
  const Field back = read_field((dir / "u.csv").string(), g);
  for (int j = 0; j < g->n(); ++j) CHECK(back[j] == f[j]);
  CHECK_THROWS_AS(read_field((dir / "u.csv").string(), make_grid(256, 30.0)), IoError);
}

TEST_CASE("simulate writes diagnostics deterministically") {
  const fs::path dir = scratch("sim");
  std::string text = kMinimal;
  text.replace(text.find("t_final=1"), 9, "t_final=0.05");
  {
    std::ofstream(dir / "run.cfg") << text << "weight_orders=1,2\ndiag_every=10\n";
  }
  const std::string cfg = (dir / "run.cfg").string();
  REQUIRE(run_cli("-c " + cfg + " -o " + (dir / "a").string() + " simulate") == 0);
  REQUIRE(run_cli("-c " + cfg + " -o " + (dir / "b").string() + " simulate") == 0);

  const std::string csv = slurp(dir / "a" / "diagnostics.csv");
  CHECK(csv == slurp(dir / "b" / "diagnostics.csv"));
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,i1,i2,i3,mean,moment_x,max_u,min_ux,tail_frac,w_1,w_2");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 6);
  CHECK(fs::exists(dir / "a" / "fields" / "u_final.csv"));

  RunConfig back = parse_config_file((dir / "a" / "manifest.txt").string());
  finalize(back);
  CHECK(back.sim.t_final == 0.05);
  CHECK(back.sim.weight_orders == std::vector<double>{1.0, 2.0});
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  CHECK(run_cli("-s alpha=0.5 -s n=1024 -s length=40 -s dt=1e-3 -s t_final=0.01 "
                "-s 'ic=gaussian(0,1,0)' -o " +
                (dir / "zero").string() + " simulate") == 0);
  CHECK(run_cli("-s alpha=0 -s n=1024 -s length=40 -s dt=1e-3 -s t_final=0.01 "
                "-s 'ic=gaussian(0,1,0)' -o " +
                (dir / "bad").string() + " simulate") == 1);
  CHECK(run_cli("-s foo=1 -o " + (dir / "foo").string() + " simulate") == 1);
  CHECK(run_cli("-s alpha=0.5 -s n=4096 -s length=200 -s dt=1e-3 -s t_final=2 "
                "-s 'ic=odd_gaussian(-4,1)' -o " +
                (dir / "ts").string() + " experiment tstar") == 1);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("--no-such-flag") == 1);
}
