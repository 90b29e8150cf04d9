#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

namespace cstop::cli {

using json = nlohmann::json;

namespace {

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t k) { return ptr + "/" + std::to_string(k); }

const json& need(const json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object()) throw ConfigError(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(child(ptr, key), "required field is missing");
  return *it;
}

const json* maybe(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

void allow_keys(const json& j, const std::string& ptr, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(ptr, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(child(ptr, it.key()), "unknown field");
  }
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw ConfigError(ptr, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(ptr, "expected a finite number");
  return v;
}

std::size_t count(const json& j, const std::string& ptr) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ConfigError(ptr, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw ConfigError(ptr, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw ConfigError(ptr, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], child(ptr, k)));
  return out;
}

std::vector<std::pair<double, double>> interval_list(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw ConfigError(ptr, "expected an array of [lo, hi] pairs");
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    auto p = child(ptr, k);
    if (!j[k].is_array() || j[k].size() != 2) throw ConfigError(p, "expected [lo, hi]");
    double lo = number(j[k][0], child(p, 0)), hi = number(j[k][1], child(p, 1));
    if (!(lo < hi)) throw ConfigError(p, "interval needs lo < hi");
    out.emplace_back(lo, hi);
  }
  return out;
}

void inside(double p, double delta, const std::string& ptr) {
  if (!(p > delta && p < 1.0 - delta))
    throw ConfigError(ptr, "belief " + format_number(p) + " must lie inside (delta, 1 - delta)");
}

CostSpec parse_cost(const json& j, const std::string& ptr) {
  CostSpec c;
  if (j.is_number()) {
    c = CostSpec::constant(number(j, ptr));
  } else {
    auto type = text(need(j, "type", ptr), child(ptr, "type"));
    if (type == "const") {
      allow_keys(j, ptr, {"type", "value"});
      c = CostSpec::constant(number(need(j, "value", ptr), child(ptr, "value")));
    } else if (type == "pwl") {
      c = CostSpec::piecewise(parse_pwl(j, ptr));
    } else {
      throw ConfigError(child(ptr, "type"), "cost type must be const or pwl");
    }
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ptr, e.what());
  }
  return c;
}

// Interior jumps become grid pins, so they must sit inside the grid.
void check_jumps(const PiecewiseLinearSpec& s, double delta, const std::string& ptr) {
  for (std::size_t k = 0; k < s.x.size(); ++k)
    if (s.x[k] > 0.0 && s.x[k] < 1.0 && s.left[k] != s.right[k]) inside(s.x[k], delta, child(child(ptr, "x"), k));
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

PiecewiseLinearSpec parse_pwl(const json& j, const std::string& ptr) {
  allow_keys(j, ptr, {"type", "x", "y", "left", "right"});
  auto x = numbers(need(j, "x", ptr), child(ptr, "x"));
  PiecewiseLinearSpec s;
  s.x = x;
  if (auto y = maybe(j, "y")) {
    if (maybe(j, "left") || maybe(j, "right")) throw ConfigError(ptr, "give either y or left/right");
    s.left = s.right = numbers(*y, child(ptr, "y"));
  } else {
    s.left = numbers(need(j, "left", ptr), child(ptr, "left"));
    s.right = numbers(need(j, "right", ptr), child(ptr, "right"));
  }
  if (s.left.size() != x.size() || s.right.size() != x.size())
    throw ConfigError(ptr, "value arrays must match x in length");
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(child(ptr, "x"), e.what());
  }
  return s;
}

CoalitionRule parse_rule(const json& j, std::size_t n, const std::string& ptr) {
  auto type = text(need(j, "type", ptr), child(ptr, "type"));
  auto index = [&](const char* key) {
    auto p = child(ptr, key);
    std::size_t v = count(need(j, key, ptr), p);
    if (v < 1 || v > n) throw ConfigError(p, "must lie in 1.." + std::to_string(n));
    return v;
  };
  if (type == "unilateral") {
    allow_keys(j, ptr, {"type"});
    return unilateral_rule(n);
  }
  if (type == "unanimity") {
    allow_keys(j, ptr, {"type"});
    return unanimity_rule(n);
  }
  if (type == "quota") {
    allow_keys(j, ptr, {"type", "q"});
    return quota_rule(index("q"), n);
  }
  if (type == "chair") {
    allow_keys(j, ptr, {"type", "q", "i"});
    return chair_rule(index("q"), index("i") - 1, n);
  }
  if (type == "explicit") {
    allow_keys(j, ptr, {"type", "coalitions"});
    const auto& cs = need(j, "coalitions", ptr);
    auto cp = child(ptr, "coalitions");
    if (!cs.is_array() || cs.empty()) throw ConfigError(cp, "expected a non-empty array of coalitions");
    std::vector<Coalition> out;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      auto p = child(cp, k);
      if (!cs[k].is_array() || cs[k].empty()) throw ConfigError(p, "expected a non-empty array of players");
      std::vector<std::size_t> mem;
      for (std::size_t t = 0; t < cs[k].size(); ++t) {
        std::size_t v = count(cs[k][t], child(p, t));
        if (v < 1 || v > n) throw ConfigError(child(p, t), "player must lie in 1.." + std::to_string(n));
        mem.push_back(v - 1);
      }
      out.push_back(coalition_of(mem));
    }
    return normalize_rule(out, n);
  }
  throw ConfigError(child(ptr, "type"), "rule type must be unilateral, unanimity, quota, chair or explicit");
}

Config parse_config(const json& doc) {
  const std::string root;
  allow_keys(doc, root,
             {"version", "prior", "grid", "process", "players", "rule", "enumerate", "simulate", "check",
              "efficient", "compare"});
  Config cfg;
  if (auto v = maybe(doc, "version")) {
    cfg.version = static_cast<int>(count(*v, "/version"));
    if (cfg.version != 1) throw ConfigError("/version", "unsupported schema version");
  }
  auto& g = cfg.game;
  if (auto gr = maybe(doc, "grid")) {
    allow_keys(*gr, "/grid", {"n", "delta", "pins"});
    if (auto n = maybe(*gr, "n")) g.grid.n = count(*n, "/grid/n");
    if (auto d = maybe(*gr, "delta")) g.grid.delta = number(*d, "/grid/delta");
    if (g.grid.n < 16) throw ConfigError("/grid/n", "grid needs n >= 16");
    if (!(g.grid.delta > 0.0 && g.grid.delta <= 1e-2)) throw ConfigError("/grid/delta", "delta must lie in (0, 0.01]");
    if (auto p = maybe(*gr, "pins")) {
      g.grid.pins = numbers(*p, "/grid/pins");
      for (std::size_t k = 0; k < g.grid.pins.size(); ++k) inside(g.grid.pins[k], g.grid.delta, child("/grid/pins", k));
    }
  }
  const double delta = g.grid.delta;

  if (auto pr = maybe(doc, "process")) {
    auto type = text(need(*pr, "type", "/process"), "/process/type");
    if (type == "diffusion") {
      allow_keys(*pr, "/process", {"type", "sigma"});
      double s = pr->contains("sigma") ? number((*pr)["sigma"], "/process/sigma") : 1.0;
      if (!(s > 0.0)) throw ConfigError("/process/sigma", "sigma must be positive");
      g.process = DiffusionSpec{s};
    } else if (type == "poisson") {
      allow_keys(*pr, "/process", {"type", "lambda"});
      double l = number(need(*pr, "lambda", "/process"), "/process/lambda");
      if (!(l > 0.0)) throw ConfigError("/process/lambda", "lambda must be positive");
      g.process = PoissonSpec{l};
    } else {
      throw ConfigError("/process/type", "process type must be diffusion or poisson");
    }
  }

  const auto& players = need(doc, "players", root);
  if (!players.is_array() || players.empty()) throw ConfigError("/players", "expected a non-empty array");
  if (players.size() > 30) throw ConfigError("/players", "at most 30 players");
  std::vector<double> committee_v;
  std::optional<std::size_t> piv;
  std::vector<CostSpec> costs;
  for (std::size_t i = 0; i < players.size(); ++i) {
    auto p = child("/players", i);
    allow_keys(players[i], p, {"u", "c"});
    const auto& u = need(players[i], "u", p);
    auto up = child(p, "u");
    CostSpec c = players[i].contains("c") ? parse_cost(players[i]["c"], child(p, "c")) : CostSpec::constant(0.0);
    if (auto cs = std::get_if<PiecewiseLinearSpec>(&c.c)) check_jumps(*cs, delta, child(p, "c"));
    costs.push_back(c);
    if (u.is_number()) {
      g.players.push_back({PiecewiseLinearSpec::constant(number(u, up)), c});
      continue;
    }
    auto type = text(need(u, "type", up), child(up, "type"));
    if (type == "pwl") {
      auto s = parse_pwl(u, up);
      check_jumps(s, delta, up);
      g.players.push_back({s, c});
    } else if (type == "committee") {
      allow_keys(u, up, {"type", "v", "piv"});
      committee_v.push_back(number(need(u, "v", up), child(up, "v")));
      std::size_t pv = count(need(u, "piv", up), child(up, "piv"));
      if (piv && *piv != pv) throw ConfigError(child(up, "piv"), "all committee players must share piv");
      piv = pv;
      g.players.push_back({PiecewiseLinearSpec::constant(0.0), c});
    } else {
      throw ConfigError(child(up, "type"), "payoff type must be pwl or committee");
    }
  }
  if (!committee_v.empty() && committee_v.size() != players.size())
    throw ConfigError("/players", "committee payoffs cannot be mixed with other payoff types");

  g.rule = parse_rule(need(doc, "rule", root), players.size(), "/rule");

  if (!committee_v.empty()) {
    CommitteeSpec cs;
    cs.v = committee_v;
    cs.piv = *piv;
    cs.costs = costs;
    cs.process = g.process;
    cs.rule = g.rule;
    cs.grid = g.grid;
    const std::size_t n = cs.v.size(), m = (n + 1) / 2;
    if (n % 2 == 0) throw ConfigError("/players", "a committee has an odd number of players");
    for (std::size_t i = 0; i < n; ++i) {
      if (!(cs.v[i] > 0.0)) throw ConfigError(child(child(child("/players", i), "u"), "v"), "v must be positive");
      if (i > 0 && !(cs.v[i] > cs.v[i - 1]))
        throw ConfigError(child(child(child("/players", i), "u"), "v"), "v must increase with the player index");
    }
    if (cs.piv < m || cs.piv > n) throw ConfigError("/players/0/u/piv", "piv must lie in " + std::to_string(m) + ".." + std::to_string(n));
    const double w = committee_threshold(cs.v[cs.piv - 1]);
    inside(w, delta, "/players/0/u/piv");
    for (std::size_t i = 0; i < n; ++i) g.players[i].u = committee_payoff(cs.v[i], w);
    g.prior = w;
    if (auto pr = maybe(doc, "prior")) inside(number(*pr, "/prior"), delta, "/prior");
    cfg.committee = cs;
  } else {
    g.prior = number(need(doc, "prior", root), "/prior");
    inside(g.prior, delta, "/prior");
  }

  if (auto e = maybe(doc, "enumerate")) {
    allow_keys(*e, "/enumerate", {"scope"});
    if (auto s = maybe(*e, "scope")) {
      auto v = text(*s, "/enumerate/scope");
      if (v == "single")
        cfg.scope = EnumScope::single;
      else if (v == "two_interval")
        cfg.scope = EnumScope::two_interval;
      else
        throw ConfigError("/enumerate/scope", "scope must be single or two_interval");
    }
  }
  if (auto s = maybe(doc, "simulate")) {
    allow_keys(*s, "/simulate", {"n_paths", "dt", "seed", "max_time", "region"});
    if (auto v = maybe(*s, "n_paths")) cfg.sim.n_paths = count(*v, "/simulate/n_paths");
    if (auto v = maybe(*s, "dt")) cfg.sim.dt = number(*v, "/simulate/dt");
    if (auto v = maybe(*s, "seed")) cfg.sim.seed = count(*v, "/simulate/seed");
    if (auto v = maybe(*s, "max_time")) cfg.sim.max_time = number(*v, "/simulate/max_time");
    if (cfg.sim.n_paths < 1) throw ConfigError("/simulate/n_paths", "need at least one path");
    if (!(cfg.sim.dt > 0.0)) throw ConfigError("/simulate/dt", "dt must be positive");
    if (!(cfg.sim.max_time > 0.0)) throw ConfigError("/simulate/max_time", "max_time must be positive");
    if (auto r = maybe(*s, "region")) {
      cfg.sim_region = interval_list(*r, "/simulate/region");
      for (std::size_t k = 0; k < cfg.sim_region.size(); ++k) {
        inside(cfg.sim_region[k].first, delta, child(child("/simulate/region", k), 0));
        inside(cfg.sim_region[k].second, delta, child(child("/simulate/region", k), 1));
      }
    }
  }
  if (auto c = maybe(doc, "check")) {
    allow_keys(*c, "/check", {"profile"});
    const auto& pr = need(*c, "profile", "/check");
    if (!pr.is_array() || pr.size() != players.size())
      throw ConfigError("/check/profile", "expected one interval list per player");
    for (std::size_t i = 0; i < pr.size(); ++i) {
      auto p = child("/check/profile", i);
      cfg.profile.push_back(interval_list(pr[i], p));
      for (std::size_t k = 0; k < cfg.profile.back().size(); ++k) {
        inside(cfg.profile.back()[k].first, delta, child(child(p, k), 0));
        inside(cfg.profile.back()[k].second, delta, child(child(p, k), 1));
      }
    }
  }
  if (auto e = maybe(doc, "efficient")) {
    allow_keys(*e, "/efficient", {"lambda"});
    cfg.lambda = numbers(need(*e, "lambda", "/efficient"), "/efficient/lambda");
    if (cfg.lambda.size() != players.size()) throw ConfigError("/efficient/lambda", "one weight per player");
    for (std::size_t k = 0; k < cfg.lambda.size(); ++k)
      if (!(cfg.lambda[k] >= 0.0)) throw ConfigError(child("/efficient/lambda", k), "weights must be >= 0");
  }
  if (auto c = maybe(doc, "compare")) {
    CompareBlock cb;
    cb.axis = text(need(*c, "axis", "/compare"), "/compare/axis");
    if (cb.axis == "misalignment") {
      allow_keys(*c, "/compare", {"axis", "f", "g", "b"});
      if (players.size() != 2) throw ConfigError("/players", "the misalignment family has two players");
      cb.f = parse_pwl(need(*c, "f", "/compare"), "/compare/f");
      cb.g = parse_pwl(need(*c, "g", "/compare"), "/compare/g");
      check_jumps(cb.f, delta, "/compare/f");
      check_jumps(cb.g, delta, "/compare/g");
      cb.b = numbers(need(*c, "b", "/compare"), "/compare/b");
      if (cb.b.empty()) throw ConfigError("/compare/b", "give at least one b");
      for (std::size_t k = 0; k < cb.b.size(); ++k)
        if (!(cb.b[k] >= 0.0)) throw ConfigError(child("/compare/b", k), "b must be >= 0");
    } else if (cb.axis == "rule") {
      allow_keys(*c, "/compare", {"axis", "rules"});
      const auto& rs = need(*c, "rules", "/compare");
      if (!rs.is_array() || rs.size() < 2) throw ConfigError("/compare/rules", "expected at least two rules");
      for (std::size_t k = 0; k < rs.size(); ++k)
        cb.rules.push_back(parse_rule(rs[k], players.size(), child("/compare/rules", k)));
      for (std::size_t k = 0; k + 1 < cb.rules.size(); ++k)
        if (!rule_subset(cb.rules[k], cb.rules[k + 1]))
          throw ConfigError(child("/compare/rules", k + 1), "rules must gain decisive coalitions in order");
    } else {
      throw ConfigError("/compare/axis", "axis must be misalignment or rule");
    }
    cfg.compare = cb;
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

std::vector<std::pair<double, double>> parse_intervals(const std::string& s) {
  std::vector<std::pair<double, double>> out;
  std::stringstream all(s);
  std::string piece;
  while (std::getline(all, piece, ';')) {
    auto comma = piece.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("interval '" + piece + "' needs lo,hi");
    double v[2];
    std::string parts[2] = {piece.substr(0, comma), piece.substr(comma + 1)};
    for (int t = 0; t < 2; ++t) {
      const char* b = parts[t].data();
      while (*b == ' ') ++b;
      auto r = std::from_chars(b, parts[t].data() + parts[t].size(), v[t]);
      if (r.ec != std::errc()) throw std::invalid_argument("bad number in interval '" + piece + "'");
    }
    if (!(v[0] < v[1])) throw std::invalid_argument("interval '" + piece + "' needs lo < hi");
    out.emplace_back(v[0], v[1]);
  }
  if (out.empty()) throw std::invalid_argument("empty interval list");
  return out;
}

json region_to_json(const SamplingRegion& region) {
  json arr = json::array();
  for (auto [lo, hi] : region.intervals()) arr.push_back({lo, hi});
  return arr;
}

SamplingRegion region_from_json(const json& j, const GridPtr& grid) {
  return SamplingRegion::from_intervals(grid, interval_list(j, ""));
}

namespace {

std::vector<GridFunction> closures_for(const Game& game, const SamplingRegion& region) {
  std::vector<SamplingRegion> profile(game.n_players(), region);
  std::vector<GridFunction> V;
  for (std::size_t i = 0; i < game.n_players(); ++i) {
    auto env = player_envelopes(game.rule(), i, profile);
    V.push_back(closure_general(game.net[i], env.C, env.S));
  }
  return V;
}

}  // namespace

std::string closures_csv(const Game& game, const SamplingRegion& region) {
  auto V = closures_for(game, region);
  std::ostringstream os;
  os << "p";
  for (std::size_t i = 1; i <= game.n_players(); ++i)
    os << ",u" << i << ",phi" << i << ",net" << i << ",V" << i;
  os << ",in_region\n";
  for (std::size_t k = 0; k < game.grid->size(); ++k) {
    os << format_number(game.grid->points[k]);
    for (std::size_t i = 0; i < game.n_players(); ++i)
      os << ',' << format_number(game.u[i][k]) << ',' << format_number(game.phi[i][k]) << ','
         << format_number(game.net[i][k]) << ',' << format_number(V[i][k]);
    os << ',' << (region.contains_index(k) ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string regions_csv(const Game& game, const std::vector<EquilibriumEntry>& entries) {
  std::ostringstream os;
  os << "region,lo,hi,worst_violation_over_tol\n";
  for (std::size_t r = 0; r < entries.size(); ++r) {
    const auto& c = entries[r].cert;
    double ratio = 0.0;
    for (std::size_t i = 0; i < game.n_players(); ++i)
      if (c.checked[i]) ratio = std::max(ratio, c.violation[i] / c.tol[i]);
    auto iv = entries[r].region.intervals();
    if (iv.empty()) os << r << ",,," << format_number(ratio) << '\n';
    for (auto [lo, hi] : iv)
      os << r << ',' << format_number(lo) << ',' << format_number(hi) << ',' << format_number(ratio) << '\n';
  }
  return os.str();
}

std::string closures_svg(const Game& game, const SamplingRegion& region) {
  auto V = closures_for(game, region);
  const double W = 640, H = 400, pad = 30;
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < game.n_players(); ++i)
    for (std::size_t k = 0; k < game.grid->size(); ++k) {
      lo = std::min({lo, game.net[i][k], V[i][k]});
      hi = std::max({hi, game.net[i][k], V[i][k]});
    }
  if (hi - lo < 1e-12) hi = lo + 1.0;
  auto X = [&](double p) { return format_number(std::round((pad + p * (W - 2 * pad)) * 100) / 100); };
  auto Y = [&](double v) { return format_number(std::round((H - pad - (v - lo) / (hi - lo) * (H - 2 * pad)) * 100) / 100); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (auto [a, b] : region.intervals())
    os << "<rect x=\"" << X(a) << "\" y=\"" << pad << "\" width=\"" << format_number(std::round((b - a) * (W - 2 * pad) * 100) / 100)
       << "\" height=\"" << H - 2 * pad << "\" fill=\"#eeeeee\"/>\n";
  for (std::size_t i = 0; i < game.n_players(); ++i) {
    const char* col = colors[i % 6];
    for (int pass = 0; pass < 2; ++pass) {
      const auto& f = pass == 0 ? game.net[i] : V[i];
      os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\""
         << (pass == 1 ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
      for (std::size_t k = 0; k < f.size(); ++k) os << (k ? " " : "") << X(game.grid->points[k]) << ',' << Y(f[k]);
      os << "\"/>\n";
    }
    for (auto [a, b] : region.components())
      os << "<line x1=\"" << X(game.grid->points[a]) << "\" y1=\"" << Y(game.net[i][a]) << "\" x2=\""
         << X(game.grid->points[b]) << "\" y2=\"" << Y(game.net[i][b]) << "\" stroke=\"" << col
         << "\" stroke-width=\"3\"/>\n";
  }
  os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
     << "\" stroke=\"black\"/>\n</svg>\n";
  return os.str();
}

json certificate_json(const Game& game, const EquilibriumCertificate& cert) {
  json j;
  j["region"] = region_to_json(cert.region);
  j["pass"] = cert.pass;
  j["vacuous_rule"] = cert.vacuous;
  j["edge_warning"] = cert.edge_warning;
  j["slack_violation"] = cert.slack_violation;
  json ps = json::array();
  for (std::size_t i = 0; i < game.n_players(); ++i) {
    json p;
    p["player"] = i + 1;
    p["checked"] = static_cast<bool>(cert.checked[i]);
    p["violation"] = cert.violation[i];
    p["tolerance"] = cert.tol[i];
    p["worst_belief"] = game.grid->points[cert.worst[i]];
    ps.push_back(p);
  }
  j["players"] = ps;
  return j;
}

namespace {

struct Options {
  std::string config, region, out, scope;
  bool svg = false, scan = false, bridge = false;
  double c1 = 0.1, c2 = 0.1, sigma = 1.0, delta = 1e-4;
  std::size_t n = 512, paths = 0;
  double dt = 0.0;
  long long seed = -1;
};

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(dir);
  std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + name + " in " + dir);
  f << body;
}

void vacuous_warning(const Game& game, std::ostream& err) {
  auto cls = classify_players(game.rule());
  if (cls.uni.empty() && cls.una.empty())
    err << "warning: rule " << game.rule().describe()
        << " has neither unilateral nor unanimous players, so every common region certifies;"
           " see the committee command for the strong-equilibrium refinement\n";
}

Game diffusion_game(const Config& cfg, GameSpec spec) {
  if (std::holds_alternative<PoissonSpec>(spec.process))
    throw ConfigError("/process/type", "this command needs a diffusion process; use the poisson command");
  (void)cfg;
  return prepare_game(spec);
}

void add_pins(GameSpec& spec, const std::vector<std::pair<double, double>>& iv) {
  for (auto [a, b] : iv) {
    spec.grid.pins.push_back(a);
    spec.grid.pins.push_back(b);
  }
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  auto cfg = load_config(o.config);
  auto spec = cfg.game;
  std::vector<std::pair<double, double>> iv;
  if (!o.region.empty()) {
    iv = parse_intervals(o.region);
    for (auto [a, b] : iv) {
      inside(a, spec.grid.delta, "--region");
      inside(b, spec.grid.delta, "--region");
    }
    add_pins(spec, iv);
  } else if (!cfg.profile.empty()) {
    for (const auto& p : cfg.profile) add_pins(spec, p);
  } else {
    throw ConfigError("/check/profile", "give --region or a check.profile block");
  }
  auto game = diffusion_game(cfg, spec);
  vacuous_warning(game, err);
  EquilibriumCertificate cert;
  SamplingRegion region;
  if (!iv.empty()) {
    region = SamplingRegion::from_intervals(game.grid, iv);
    cert = check_equilibrium(game, region);
  } else {
    std::vector<SamplingRegion> profile;
    for (const auto& p : cfg.profile) profile.push_back(SamplingRegion::from_intervals(game.grid, p));
    cert = check_equilibrium(game, profile);
    region = cert.region;
  }
  auto j = certificate_json(game, cert);
  out << j.dump(2) << '\n';
  if (!o.out.empty()) {
    write_file(o.out, "certificate.json", j.dump(2) + "\n");
    write_file(o.out, "closures.csv", closures_csv(game, region));
    if (o.svg) write_file(o.out, "closures.svg", closures_svg(game, region));
  }
  return cert.pass ? 0 : 2;
}

json extremal_json(const Extremal& ex) {
  json j;
  j["maximum"] = region_to_json(ex.maximum);
  j["maximum_certifies"] = ex.maximum_certifies;
  json mins = json::array();
  for (const auto& m : ex.minimal) mins.push_back(region_to_json(m));
  j["minimal"] = mins;
  return j;
}

int cmd_enumerate(const Options& o, std::ostream& out, std::ostream& err, bool solve) {
  auto cfg = load_config(o.config);
  auto game = diffusion_game(cfg, cfg.game);
  vacuous_warning(game, err);
  auto scope = cfg.scope;
  if (o.scope == "two_interval") scope = EnumScope::two_interval;
  else if (o.scope == "single") scope = EnumScope::single;
  else if (!o.scope.empty()) throw ConfigError("--scope", "scope must be single or two_interval");
  auto entries = enumerate_interval_equilibria(game, scope);
  json j;
  j["count"] = entries.size();
  std::vector<SamplingRegion> regs;
  for (const auto& e : entries) regs.push_back(e.region);
  SamplingRegion focus = SamplingRegion::empty(game.grid);
  if (!regs.empty()) {
    auto ex = extremal_equilibria(game, regs);
    j["extremal"] = extremal_json(ex);
    focus = ex.maximum;
    if (!ex.maximum_certifies) err << "warning: the union of all enumerated equilibria does not certify\n";
  }
  if (solve) {
    auto lambda = cfg.lambda.empty() ? std::vector<double>(game.n_players(), 1.0) : cfg.lambda;
    j["efficient"] = region_to_json(efficient_region(game, lambda));
  }
  if (!o.out.empty()) {
    json all = json::array();
    for (const auto& r : regs) all.push_back(region_to_json(r));
    json doc;
    doc["equilibria"] = all;
    if (j.contains("extremal")) doc["extremal"] = j["extremal"];
    write_file(o.out, "regions.json", doc.dump(2) + "\n");
    write_file(o.out, "regions.csv", regions_csv(game, entries));
    write_file(o.out, "closures.csv", closures_csv(game, focus));
    if (o.svg) write_file(o.out, "closures.svg", closures_svg(game, focus));
  }
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_committee(const Options& o, std::ostream& out, std::ostream&) {
  auto cfg = load_config(o.config);
  if (!cfg.committee) throw ConfigError("/players", "the committee command needs committee payoffs");
  auto cg = prepare_committee(*cfg.committee);
  auto sol = strong_solve(cg);
  json j;
  j["w_piv"] = cg.w;
  j["L"] = sol.L + 1;
  j["U"] = sol.U + 1;
  json fps = json::array();
  bool ok = true;
  for (const auto& fp : sol.fixed_points) {
    json f;
    f["p_low"] = fp.p_low;
    f["p_high"] = fp.p_high;
    f["residual_low"] = fp.residual_low;
    f["residual_high"] = fp.residual_high;
    f["maximum"] = fp.is_maximum;
    f["strength"] = fp.strength == Strength::strong ? "strong" : "fixed point, strength unknown";
    if (fp.deviation_checked) f["no_coalitional_deviation"] = fp.no_deviation;
    ok = ok && fp.residual_ok && (!fp.deviation_checked || fp.no_deviation);
    fps.push_back(f);
  }
  j["fixed_points"] = fps;
  if (o.bridge) {
    auto br = pivotal_two_player_equilibria(cg);
    j["bridge"]["rule"] = br.unilateral ? "unilateral" : "unanimity";
    j["bridge"]["maximum"] = region_to_json(br.maximum);
    json mins = json::array();
    for (const auto& m : br.minimal) mins.push_back(region_to_json(m));
    j["bridge"]["minimal"] = mins;
  }
  out << j.dump(2) << '\n';
  return ok ? 0 : 2;
}

int cmd_war(const Options& o, std::ostream& out, std::ostream&) {
  WarSpec ws{o.c1, o.c2, o.sigma, o.n, o.delta};
  if (!(ws.c1 > 0.0)) throw ConfigError("--c1", "c1 must be positive");
  if (!(ws.c2 > 0.0)) throw ConfigError("--c2", "c2 must be positive");
  if (!(ws.sigma > 0.0)) throw ConfigError("--sigma", "sigma must be positive");
  if (ws.n < 16) throw ConfigError("--n", "grid needs n >= 16");
  auto war = prepare_war(ws);
  auto sol = war_solve(war, o.scan && ws.n <= 256);
  auto cert = war_certify(war, sol);
  const auto& g = *war.grid;
  const double cell = g.h * (1.0 + 1e-9);
  json j;
  j["g_star"] = sol.g;
  j["G_star"] = sol.G;
  j["residual_g"] = sol.residual_g;
  j["residual_G"] = sol.residual_G;
  j["converged"] = sol.converged;
  j["iterations"] = sol.iterations;
  if (o.scan && ws.n <= 256) j["fixed_points_on_scan"] = sol.fixed_points_on_scan;
  j["unanimity_certificate"] = cert.pass;
  out << j.dump(2) << '\n';
  bool ok = sol.converged && sol.residual_g <= cell && sol.residual_G <= cell && cert.pass;
  return ok ? 0 : 2;
}

PoissonGameSpec poisson_spec(const Config& cfg) {
  const auto* ps = std::get_if<PoissonSpec>(&cfg.game.process);
  if (!ps) throw ConfigError("/process/type", "the poisson command needs a poisson process");
  PoissonGameSpec s;
  s.lambda = ps->lambda;
  s.prior = cfg.game.prior;
  s.players = cfg.game.players;
  s.rule = cfg.game.rule;
  s.grid = cfg.game.grid;
  return s;
}

int cmd_poisson(const Options& o, std::ostream& out, std::ostream&) {
  auto cfg = load_config(o.config);
  auto sol = poisson_solve(poisson_spec(cfg));
  json j;
  j["p_low"] = sol.p_low;
  j["rule"] = sol.unilateral ? "unilateral" : "unanimity";
  j["label"] = sol.label;
  json eq = json::array();
  for (auto k : sol.equilibria) eq.push_back(sol.grid->points[k]);
  j["equilibrium_lower_bounds"] = eq;
  out << j.dump(2) << '\n';
  return 0;
}

json mean_json(const MeanSE& m) { return json{{"mean", m.mean}, {"se", m.se}}; }

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  auto cfg = load_config(o.config);
  auto sim = cfg.sim;
  if (o.paths) sim.n_paths = o.paths;
  if (o.dt > 0.0) sim.dt = o.dt;
  if (o.seed >= 0) sim.seed = static_cast<std::uint64_t>(o.seed);
  json j;
  if (std::holds_alternative<PoissonSpec>(cfg.game.process)) {
    auto spec = poisson_spec(cfg);
    auto sol = poisson_solve(spec);
    auto rep = simulate_poisson(spec, sol.p_low, sim);
    j["p_low"] = sol.p_low;
    j["breakthrough_fraction"] = rep.breakthrough_fraction;
    for (std::size_t i = 0; i < spec.players.size(); ++i) {
      json p;
      p["payoff"] = mean_json(rep.payoff[i]);
      p["cost"] = mean_json(rep.cost[i]);
      p["predicted_cost"] = mean_json(rep.predicted_cost[i]);
      j["players"].push_back(p);
    }
    out << j.dump(2) << '\n';
    return 0;
  }
  auto iv = o.region.empty() ? cfg.sim_region : parse_intervals(o.region);
  auto spec = cfg.game;
  for (auto [a, b] : iv) {
    inside(a, spec.grid.delta, "--region");
    inside(b, spec.grid.delta, "--region");
  }
  add_pins(spec, iv);
  auto game = diffusion_game(cfg, spec);
  auto region = iv.empty() ? SamplingRegion::empty(game.grid) : SamplingRegion::from_intervals(game.grid, iv);
  auto rep = simulate(game, region, sim);
  auto id = verify_cost_identity(game, region, sim);
  if (rep.clamp_warning) err << "warning: " << rep.clamp_fraction << " of paths hit the delta clamps\n";
  j["region"] = region_to_json(region);
  j["terminal_belief"] = mean_json(rep.belief);
  j["time"] = mean_json(rep.time);
  j["truncated_fraction"] = rep.truncated_fraction;
  j["clamp_fraction"] = rep.clamp_fraction;
  j["histogram"] = rep.histogram;
  for (std::size_t i = 0; i < game.n_players(); ++i) {
    json p;
    p["payoff"] = mean_json(rep.payoff[i]);
    p["cost"] = mean_json(rep.cost[i]);
    p["predicted_cost"] = mean_json(id.players[i].predicted);
    p["cost_identity_pass"] = id.players[i].pass;
    j["players"].push_back(p);
  }
  out << j.dump(2) << '\n';
  return id.pass ? 0 : 2;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream&) {
  auto cfg = load_config(o.config);
  if (!cfg.compare) throw ConfigError("/compare", "required field is missing");
  if (std::holds_alternative<PoissonSpec>(cfg.game.process))
    throw ConfigError("/process/type", "compare needs a diffusion process");
  StaticsReport rep = cfg.compare->axis == "misalignment"
                          ? misalignment_statics(cfg.game, cfg.compare->f, cfg.compare->g, cfg.compare->b)
                          : rule_statics(cfg.game, cfg.compare->rules);
  json j;
  j["axis"] = cfg.compare->axis;
  j["lines"] = rep.lines;
  j["violations"] = rep.violations;
  out << j.dump(2) << '\n';
  return rep.ok() ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_threads_from_env();
  CLI::App app{"Solver for collective stopping games", "cstop"};
  app.require_subcommand(1);
  Options o;
  auto with_config = [&](CLI::App* s) { s->add_option("--config", o.config, "JSON game config")->required(); };
  auto* check = app.add_subcommand("check", "Certify a common region or a per-player profile");
  with_config(check);
  check->add_option("--region", o.region, "intervals lo,hi[;lo,hi...]");
  check->add_option("--out", o.out, "output directory");
  check->add_flag("--svg", o.svg, "also write closures.svg");
  auto* en = app.add_subcommand("enumerate", "Enumerate interval equilibria");
  with_config(en);
  en->add_option("--scope", o.scope, "single or two_interval");
  en->add_option("--out", o.out, "output directory");
  en->add_flag("--svg", o.svg, "also write closures.svg");
  auto* so = app.add_subcommand("solve", "Extremal equilibria and the efficient region");
  with_config(so);
  so->add_option("--scope", o.scope, "single or two_interval");
  so->add_option("--out", o.out, "output directory");
  so->add_flag("--svg", o.svg, "also write closures.svg");
  auto* co = app.add_subcommand("committee", "Strong equilibria of a committee");
  with_config(co);
  co->add_flag("--bridge", o.bridge, "also solve the two-player pivotal game");
  auto* wa = app.add_subcommand("war", "War of information");
  wa->add_option("--c1", o.c1, "flow cost of party 1");
  wa->add_option("--c2", o.c2, "flow cost of party 2");
  wa->add_option("--sigma", o.sigma, "signal noise");
  wa->add_option("--n", o.n, "grid size");
  wa->add_option("--delta", o.delta, "grid clip");
  wa->add_flag("--scan", o.scan, "uniqueness scan (n <= 256)");
  auto* po = app.add_subcommand("poisson", "Conclusive Poisson learning");
  with_config(po);
  auto* si = app.add_subcommand("simulate", "Monte Carlo simulation and cost identity");
  with_config(si);
  si->add_option("--region", o.region, "intervals lo,hi[;lo,hi...]");
  si->add_option("--paths", o.paths, "number of paths");
  si->add_option("--dt", o.dt, "time step");
  si->add_option("--seed", o.seed, "random seed");
  auto* cm = app.add_subcommand("compare", "Comparative statics from the compare block");
  with_config(cm);

  std::vector<std::string> store = args;
  store.insert(store.begin(), "cstop");
  std::vector<char*> argv;
  for (auto& s : store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (check->parsed()) return cmd_check(o, out, err);
    if (en->parsed()) return cmd_enumerate(o, out, err, false);
    if (so->parsed()) {
      auto cfg = load_config(o.config);
      if (std::holds_alternative<PoissonSpec>(cfg.game.process)) return cmd_poisson(o, out, err);
      return cmd_enumerate(o, out, err, true);
    }
    if (co->parsed()) return cmd_committee(o, out, err);
    if (wa->parsed()) return cmd_war(o, out, err);
    if (po->parsed()) return cmd_poisson(o, out, err);
    if (si->parsed()) return cmd_simulate(o, out, err);
    if (cm->parsed()) return cmd_compare(o, out, err);
  } catch (const ConfigError& e) {
    err << "input error at " << e.what() << '\n';
    return 1;
  } catch (const std::logic_error& e) {
    err << "input error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace cstop::cli
