#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "zitterdyn/config.hpp"
#include "zitterdyn/dynamics.hpp"
#include "zitterdyn/errors.hpp"
#include "zitterdyn/io.hpp"
#include "zitterdyn/render.hpp"

using namespace zitterdyn;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace fs = std::filesystem;

namespace {

const ModelParams P = make_params(1.0, UnitMode::Dimensionless);

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "zitterdyn_test_shell";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args, const fs::path& err) {
  const std::string cmd = std::string("\"") + ZITTERDYN_CLI_PATH + "\" " + args + " > /dev/null 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Hue in degrees recovered from an RGB triple, independent of the renderer's HSL code.
double hue_of(const std::uint8_t* c) {
  const double r = c[0] / 255.0, g = c[1] / 255.0, b = c[2] / 255.0;
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  const double dlt = mx - mn;
  if (dlt == 0.0) return 0.0;
  double h;
  if (mx == r) {
    h = std::fmod((g - b) / dlt, 6.0);
  } else if (mx == g) {
    h = (b - r) / dlt + 2.0;
  } else {
    h = (r - g) / dlt + 4.0;
  }
  h *= 60.0;
  return h < 0 ? h + 360.0 : h;
}

}  // namespace

TEST_CASE("empty record list writes only the header") {
  const auto path = scratch("empty.csv");
  CHECK(export_csv({}, trajectory_schema(), path.string()) == 0);
  CHECK(slurp(path) == "t,x,v,a,r,residual\r\n");
  const CsvTable t = read_csv(path.string());
  CHECK(t.header == trajectory_schema());
  CHECK(t.rows.empty());
}

TEST_CASE("uniform trajectory exports one row per node") {
  const auto tr = uniform_history(0.5, 0.0, 10.0, P, 1.0);
  REQUIRE(tr.size() == 11);
  const auto recs = trajectory_records(tr, P);
  const auto path = scratch("uniform.csv");
  CHECK(export_csv(recs, trajectory_schema(), path.string()) == 11);
  const CsvTable t = read_csv(path.string());
  REQUIRE(t.rows.size() == 11);
  const double g = lorentz_gamma(0.5);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.rows[i][2] == 0.5);
    CHECK(t.rows[i][0] == static_cast<double>(i));
    // Nodes whose past light cone stays inside the trajectory carry r = gamma d.
    if (t.rows[i][0] >= g) {
      CHECK_THAT(t.rows[i][4], WithinRel(g, 1e-12));
      CHECK_THAT(t.rows[i][5], WithinAbs(0.0, 1e-12));
    } else {
      CHECK(std::isnan(t.rows[i][4]));
    }
  }
}

TEST_CASE("energy table round-trips bit-exactly") {
  const auto recs = energy_records({0.0, 0.3, 0.77}, {0.0, 0.01, 0.7}, P, 40);
  const auto path = scratch("energy.csv");
  REQUIRE(export_csv(recs, energy_schema(40), path.string()) == 9);
  const CsvTable t = read_csv(path.string());
  CHECK(t.header == energy_schema(40));
  CHECK(t.header[5] == "Q_series_40");
  REQUIRE(t.rows.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    for (std::size_t j = 0; j < recs[i].size(); ++j) CHECK(t.rows[i][j] == recs[i][j]);
  }
  const std::string text = slurp(path);
  CHECK(text.find("\r\n") != std::string::npos);
  CHECK(text.find("\n\n") == std::string::npos);
}

TEST_CASE("csv export rejects bad input") {
  CHECK_THROWS_AS(export_csv({{1.0, 2.0}}, trajectory_schema(), scratch("bad.csv").string()), InvalidArgument);
  CHECK_THROWS_AS(export_csv({}, trajectory_schema(), "/nonexistent-dir/x.csv"), InvalidArgument);
  const auto path = scratch("quoted.csv");
  export_csv({{1.0}}, {"a,b"}, path.string());
  CHECK(slurp(path).rfind("\"a,b\"\r\n", 0) == 0);
  CHECK(read_csv(path.string()).header[0] == "a,b");
}

TEST_CASE("config parsing") {
  const auto cfg = RunConfig::parse(
      "# comment\n"
      "top = 1\n"
      "[model]\n"
      "d = 2.5   ; trailing comment\n"
      "[spectrum]\n"
      "box = 0, 12, -60, 60\n"
      "beta=0.3\n");
  CHECK(cfg.get("", "top") == "1");
  CHECK(cfg.get("model", "d") == "2.5");
  CHECK(cfg.get("spectrum", "beta") == "0.3");
  CHECK_FALSE(cfg.get("spectrum", "grid").has_value());
  CHECK(parse_double_list(*cfg.get("spectrum", "box"), "box") == std::vector<double>{0, 12, -60, 60});
  const auto again = RunConfig::parse(cfg.dump());
  CHECK(again.dump() == cfg.dump());
  CHECK_THROWS_AS(RunConfig::parse("[model\nd = 1\n"), InvalidArgument);
  CHECK_THROWS_AS(RunConfig::parse("novalue\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_double("1.5x", "d"), InvalidArgument);
  CHECK_THROWS_AS(parse_int("2.5", "grid"), InvalidArgument);
  CHECK(parse_int("-7", "n") == -7);
}

TEST_CASE("root set JSON round trip") {
  const RootSet rs = find_roots(0.3, {-1.0, 8.0, -10.0, 10.0}, 30);
  const auto j = to_json(rs, P);
  for (const char* k : {"beta", "box", "certified_count", "roots"}) CHECK(j.contains(k));
  for (const char* k : {"re", "im", "residual", "eta_n", "omega", "multiplicity", "conjugate_partner"}) {
    CHECK(j["roots"][0].contains(k));
  }
  const auto path = scratch("roots.json");
  write_json(j, path.string());
  const RootSet back = rootset_from_json(read_json(path.string()));
  CHECK(back.beta == rs.beta);
  CHECK(back.certified_count == rs.certified_count);
  REQUIRE(back.roots.size() == rs.roots.size());
  for (std::size_t i = 0; i < rs.roots.size(); ++i) {
    CHECK(back.roots[i].mu == rs.roots[i].mu);
    CHECK(back.roots[i].multiplicity == rs.roots[i].multiplicity);
  }
  CHECK(slurp(path).back() == '\n');
}

TEST_CASE("render is deterministic and well formed") {
  const Box box{-15, 15, -15, 15};
  const auto a = encode_ppm(render_domain_coloring(0.45, box, 96));
  const auto b = encode_ppm(render_domain_coloring(0.45, box, 96));
  CHECK(a == b);
  const std::string head = "P6\n96 96\n255\n";
  REQUIRE(a.size() == head.size() + 96 * 96 * 3);
  CHECK(std::string(a.begin(), a.begin() + head.size()) == head);
  CHECK_THROWS_AS(render_domain_coloring(0.0, box, 0), InvalidArgument);
  CHECK_THROWS_AS(render_domain_coloring(0.0, box, 8193), InvalidArgument);
  CHECK_THROWS_AS(render_domain_coloring(0.0, {1, 1, 0, 1}, 8), InvalidArgument);
}

TEST_CASE("pixel geometry") {
  const auto img = render_domain_coloring(0.0, {-2, 2, -1, 3}, 4);
  const cplx top_left = img.pixel_center(0, 0);
  CHECK(top_left == cplx(-1.5, 2.5));
  int col = -1, row = -1;
  REQUIRE(img.locate(cplx(1.9, -0.9), col, row));
  CHECK(col == 3);
  CHECK(row == 3);
  CHECK_FALSE(img.locate(cplx(5.0, 0.0), col, row));
}

TEST_CASE("hue winds twice around the double zero") {
  const int n = 64;
  const auto img = render_domain_coloring(0.0, {-1e-3, 1e-3, -1e-3, 1e-3}, n);
  std::vector<std::pair<int, int>> ring;
  for (int c = 0; c < n; ++c) ring.push_back({c, n - 1});
  for (int r = n - 1; r >= 0; --r) ring.push_back({n - 1, r});
  for (int c = n - 1; c >= 0; --c) ring.push_back({c, 0});
  for (int r = 0; r < n; ++r) ring.push_back({0, r});
  double total = 0.0;
  double prev = hue_of(&img.rgb[(ring[0].second * n + ring[0].first) * 3]);
  for (std::size_t i = 1; i <= ring.size(); ++i) {
    const auto [c, r] = ring[i % ring.size()];
    const double h = hue_of(&img.rgb[(r * n + c) * 3]);
    double step = h - prev;
    if (step > 180) step -= 360;
    if (step < -180) step += 360;
    total += step;
    prev = h;
  }
  CHECK_THAT(total, WithinAbs(720.0, 5.0));
}

TEST_CASE("colour at 2 pi i does not depend on beta") {
  const double y = 2.0 * std::numbers::pi;
  std::uint8_t c0[3], c9[3];
  domain_color(char_fn(cplx(0.0, y), 0.0), c0);
  domain_color(char_fn(cplx(0.0, y), 0.9), c9);
  CHECK(std::equal(c0, c0 + 3, c9));
  const Box box{-0.5, 0.5, y - 0.5, y + 0.5};
  const auto a = render_domain_coloring(0.0, box, 1);
  const auto b = render_domain_coloring(0.9, box, 1);
  CHECK(a.rgb == b.rgb);
  const auto wide_a = render_domain_coloring(0.0, box, 9);
  const auto wide_b = render_domain_coloring(0.9, box, 9);
  CHECK(wide_a.rgb != wide_b.rgb);
}

TEST_CASE("root markers are white crosses") {
  auto img = render_domain_coloring(0.0, {0, 8, 2, 14}, 120);
  const RootSet rs = find_roots(0.0, {0, 8, 2, 14}, 20);
  overlay_roots(img, rs);
  int col, row;
  REQUIRE(img.locate(rs.roots[0].mu, col, row));
  for (int k = -2; k <= 2; ++k) {
    for (auto [c, r] : {std::pair{col + k, row}, std::pair{col, row + k}}) {
      const auto* px = &img.rgb[(r * img.width + c) * 3];
      CHECK((px[0] == 255 && px[1] == 255 && px[2] == 255));
    }
  }
}

TEST_CASE("cli exit codes and error stream") {
  const auto err = scratch("err.txt");
  CHECK(run_cli("nonsense", err) == 1);
  CHECK(slurp(err).find("\"error\"") != std::string::npos);
  CHECK(run_cli("spectrum --no-such-flag 1", err) == 1);
  CHECK(run_cli("spectrum --beta 1.5 --out " + scratch("x.json").string(), err) == 1);
  CHECK(run_cli("render --res 0 --out " + scratch("x.ppm").string(), err) == 1);
  CHECK(run_cli("energy --n-terms 0 --out " + scratch("x.csv").string(), err) == 1);
  // A large seed outruns the stencil at once and the advance map folds.
  CHECK(run_cli("simulate --seed-family sinusoid --amplitude 0.3 --t-end 4 --out " + scratch("x.csv").string(), err) == 2);
  const auto e = nlohmann::json::parse(slurp(err));
  CHECK(e.contains("error"));
  CHECK(e.contains("message"));
}

TEST_CASE("cli config file and flag precedence") {
  const auto cfg = scratch("run.cfg");
  {
    std::ofstream f(cfg);
    f << "[spectrum]\nbeta = 0.3\nbox = -1,8,-10,10\ngrid = 30\n";
  }
  const auto out = scratch("cfg_roots.json");
  const auto err = scratch("err2.txt");
  REQUIRE(run_cli("spectrum --config " + cfg.string() + " --out " + out.string(), err) == 0);
  CHECK(read_json(out.string())["beta"].get<double>() == 0.3);
  REQUIRE(run_cli("spectrum --config " + cfg.string() + " --beta 0.6 --out " + out.string(), err) == 0);
  CHECK(read_json(out.string())["beta"].get<double>() == 0.6);
  CHECK(run_cli("spectrum --config " + scratch("missing.cfg").string(), err) == 1);
}

TEST_CASE("cli simulate writes the trajectory schema and a manifest") {
  const auto out = scratch("sim.csv");
  const auto man = scratch("sim.json");
  const auto err = scratch("err3.txt");
  REQUIRE(run_cli("simulate --beta 0.3 --seed 4 --out " + out.string() + " --manifest " + man.string(), err) == 0);
  const CsvTable t = read_csv(out.string());
  CHECK(t.header == trajectory_schema());
  CHECK(t.rows.size() > 100);
  const auto m = read_json(man.string());
  CHECK(m["version"] == kVersionStamp);
  CHECK(m["command"] == "simulate");
  CHECK(m["config"]["simulate"]["beta"] == "0.3");
  CHECK(m["config"]["simulate"]["seed"] == "4");
  CHECK(m["status"] == "deviation_limit");
  CHECK(m["max_eom_residual"].get<double>() < 1e-8);
}
