#include "doctest.h"

#include <clocale>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"

using namespace cstop;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("cstop_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const json& doc) const {
    auto p = path / name;
    std::ofstream(p) << doc.dump(2);
    return p.string();
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json simple_game() {
  return json::parse(R"({
    "version": 1,
    "prior": 0.5,
    "grid": {"n": 64, "delta": 0.001},
    "process": {"type": "diffusion", "sigma": 1.0},
    "players": [
      {"u": {"type": "pwl", "x": [0, 0.5, 1], "y": [1.0, 0.2, 0.8]}, "c": 0.05},
      {"u": {"type": "pwl", "x": [0, 0.5, 1], "y": [0.9, 0.1, 1.0]}, "c": {"type": "const", "value": 0.08}}
    ],
    "rule": {"type": "unilateral"},
    "simulate": {"n_paths": 500, "seed": 3}
  })");
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("numbers are formatted without the locale") {
    CHECK(cli::format_number(0.25) == "0.25");
    CHECK(cli::format_number(1e-7) == "1e-07");
    const char* names[] = {"de_DE.UTF-8", "fr_FR.UTF-8", "de_DE"};
    for (const char* name : names) {
      if (!std::setlocale(LC_ALL, name)) continue;
      CHECK(cli::format_number(0.25) == "0.25");
      std::setlocale(LC_ALL, "C");
    }
    std::setlocale(LC_ALL, "C");
  }

  TEST_CASE("interval strings") {
    auto iv = cli::parse_intervals("0.1,0.2; 0.4,0.8");
    REQUIRE(iv.size() == 2);
    CHECK(iv[1].first == 0.4);
    CHECK(iv[1].second == 0.8);
    CHECK_THROWS(cli::parse_intervals("0.3"));
    CHECK_THROWS(cli::parse_intervals("0.7,0.3"));
    CHECK_THROWS(cli::parse_intervals("a,b"));
  }

  TEST_CASE("region json round-trips") {
    auto grid = build_grid(100, 1e-3, {0.123456789, 0.3, 0.5, 0.77});
    for (auto iv : std::vector<std::vector<std::pair<double, double>>>{
             {}, {{0.3, 0.5}}, {{0.123456789, 0.3}, {0.5, 0.77}}, {{0.3, 0.5}, {0.5, 0.77}}}) {
      auto r = SamplingRegion::from_intervals(grid, iv);
      auto text = cli::region_to_json(r).dump();
      auto back = cli::region_from_json(json::parse(text), grid);
      CHECK(back == r);
    }
  }

  TEST_CASE("schema errors carry JSON pointers") {
    auto expect = [](json doc, const std::string& pointer) {
      try {
        cli::parse_config(doc);
        FAIL("no error for " << pointer);
      } catch (const cli::ConfigError& e) {
        CHECK(e.pointer() == pointer);
      }
    };
    auto g = simple_game();
    auto bad = g;
    bad["players"][1]["u"]["y"] = {0.1, 0.2};
    expect(bad, "/players/1/u");
    bad = g;
    bad["players"][0]["c"] = -1.0;
    expect(bad, "/players/0/c");
    bad = g;
    bad["rule"] = {{"type", "quota"}, {"q", 5}};
    expect(bad, "/rule/q");
    bad = g;
    bad["grid"]["n"] = 4;
    expect(bad, "/grid/n");
    bad = g;
    bad["colour"] = "blue";
    expect(bad, "/colour");
    bad = g;
    bad.erase("players");
    expect(bad, "/players");
    bad = g;
    bad["process"]["type"] = "jump";
    expect(bad, "/process/type");
    bad = g;
    bad["prior"] = 1.0;
    expect(bad, "/prior");
    bad = g;
    bad["simulate"]["region"] = json::array({json::array({0.3, 0.2})});
    expect(bad, "/simulate/region/0");
  }

  TEST_CASE("config parsing") {
    auto cfg = cli::parse_config(simple_game());
    CHECK(cfg.game.players.size() == 2);
    CHECK(cfg.game.grid.n == 64);
    CHECK(cfg.sim.n_paths == 500);
    CHECK(cfg.game.players[1].c.at(0.3) == 0.08);
    auto j = simple_game();
    j["players"] = json::parse(R"([
      {"u": {"type": "committee", "v": 0.5, "piv": 2}, "c": 0.05},
      {"u": {"type": "committee", "v": 1.0, "piv": 2}, "c": 0.05},
      {"u": {"type": "committee", "v": 2.0, "piv": 2}, "c": 0.05}])");
    j["rule"] = {{"type", "quota"}, {"q", 2}};
    auto com = cli::parse_config(j);
    REQUIRE(com.committee.has_value());
    CHECK(com.committee->piv == 2);
    CHECK(com.game.rule.minimal.size() == 3);
  }

  TEST_CASE("exit codes") {
    TempDir tmp;
    auto cfg = tmp.write("g.json", simple_game());
    auto ok = run({"check", "--config", cfg, "--region", "0.3,0.7"});
    auto cert = json::parse(ok.out);
    CHECK((ok.code == 0 || ok.code == 2));
    CHECK(ok.code == (cert["pass"].get<bool>() ? 0 : 2));
    // an equilibrium found by enumeration certifies
    auto en = run({"enumerate", "--config", cfg});
    REQUIRE(en.code == 0);
    auto doc = json::parse(en.out);
    REQUIRE(doc["count"].get<int>() > 0);
    auto maxi = doc["extremal"]["maximum"];
    if (!maxi.empty()) {
      std::string region = cli::format_number(maxi[0][0].get<double>()) + "," + cli::format_number(maxi[0][1].get<double>());
      CHECK(run({"check", "--config", cfg, "--region", region}).code == 0);
    }
    // the whole interior is not an equilibrium here
    auto fail = run({"check", "--config", cfg, "--region", "0.01,0.99"});
    CHECK(fail.code == 2);
    CHECK(run({"check", "--config", cfg, "--region", "0.3"}).code == 1);
    CHECK(run({"check", "--config", (tmp.path / "missing.json").string(), "--region", "0.3,0.7"}).code == 1);
    CHECK(run({"bogus"}).code == 1);
    CHECK(run({}).code == 1);
    auto badcfg = simple_game();
    badcfg["rule"]["type"] = "dictator";
    auto r = run({"enumerate", "--config", tmp.write("bad.json", badcfg)});
    CHECK(r.code == 1);
    CHECK(r.err.find("/rule/type") != std::string::npos);
  }

  TEST_CASE("enumerate writes its artifacts deterministically") {
    TempDir tmp;
    auto cfg = tmp.write("g.json", simple_game());
    auto a = tmp.path / "a", b = tmp.path / "b";
    REQUIRE(run({"enumerate", "--config", cfg, "--out", a.string(), "--svg"}).code == 0);
    REQUIRE(run({"enumerate", "--config", cfg, "--out", b.string()}).code == 0);
    for (const char* f : {"regions.csv", "closures.csv", "regions.json"}) {
      REQUIRE(fs::exists(a / f));
      CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(fs::exists(a / "closures.svg"));
    auto header = slurp(a / "closures.csv").substr(0, 60);
    CHECK(header.rfind("p,u1,phi1,net1,V1,u2", 0) == 0);
  }

  TEST_CASE("simulate is reproducible") {
    TempDir tmp;
    auto cfg = tmp.write("g.json", simple_game());
    auto a = run({"simulate", "--config", cfg, "--region", "0.3,0.7", "--paths", "400"});
    auto b = run({"simulate", "--config", cfg, "--region", "0.3,0.7", "--paths", "400"});
    CHECK(a.code != 1);
    CHECK(a.out == b.out);
    auto c = run({"simulate", "--config", cfg, "--region", "0.3,0.7", "--paths", "400", "--seed", "8"});
    CHECK(c.out != a.out);
  }

  TEST_CASE("war with symmetric costs") {
    auto r = run({"war", "--c1", "0.1", "--c2", "0.1", "--sigma", "1", "--n", "256", "--scan"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(std::abs(j["G_star"].get<double>() - (1.0 - j["g_star"].get<double>())) <= 1.01 / 255);
    CHECK(j["fixed_points_on_scan"] == 1);
    CHECK(run({"war", "--c1", "0", "--c2", "0.1"}).code == 1);
  }

  TEST_CASE("committee and poisson commands") {
    TempDir tmp;
    auto j = simple_game();
    j["grid"]["n"] = 128;
    j["players"] = json::parse(R"([
      {"u": {"type": "committee", "v": 0.5, "piv": 2}, "c": 0.05},
      {"u": {"type": "committee", "v": 1.0, "piv": 2}, "c": 0.05},
      {"u": {"type": "committee", "v": 2.0, "piv": 2}, "c": 0.05}])");
    j["rule"] = {{"type", "quota"}, {"q", 2}};
    j.erase("simulate");
    auto r = run({"committee", "--config", tmp.write("c.json", j), "--bridge"});
    CHECK(r.code == 0);
    auto out = json::parse(r.out);
    CHECK(out["L"] == 2);
    CHECK(out["U"] == 2);
    CHECK(out["bridge"]["rule"] == "unilateral");

    auto p = simple_game();
    p["process"] = {{"type", "poisson"}, {"lambda", 1.0}};
    auto pr = run({"poisson", "--config", tmp.write("p.json", p)});
    CHECK(pr.code == 0);
    CHECK(json::parse(pr.out)["label"] == "reformulation-consistent");
    CHECK(run({"check", "--config", tmp.write("p2.json", p), "--region", "0.3,0.7"}).code == 1);
  }
}
