#include "cstop/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cstop {

GridPtr game_grid(const GameSpec& spec) {
  const double h = (1.0 - 2.0 * spec.grid.delta) / static_cast<double>(spec.grid.n - 1);
  std::vector<double> pins = spec.grid.pins;
  pins.push_back(spec.prior);
  for (const auto& pl : spec.players) {
    auto du = discontinuity_pins(pl.u, h);
    pins.insert(pins.end(), du.begin(), du.end());
    if (auto cs = std::get_if<PiecewiseLinearSpec>(&pl.c.c)) {
      auto dc = discontinuity_pins(*cs, h);
      pins.insert(pins.end(), dc.begin(), dc.end());
    }
  }
  std::sort(pins.begin(), pins.end());
  pins.erase(std::unique(pins.begin(), pins.end()), pins.end());
  return build_grid(spec.grid.n, spec.grid.delta, pins);
}

double certification_tolerance(const GridFunction& f) {
  auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());
  double range = *mx - *mn;
  double scale = std::max(std::abs(*mn), std::abs(*mx));
  return 1e-9 * std::max({range, 1e-3 * scale, 1e-12});
}

Game prepare_game(const GameSpec& spec) { return prepare_game(spec, game_grid(spec)); }

Game prepare_game(const GameSpec& spec, const GridPtr& grid) {
  if (spec.players.empty()) throw std::invalid_argument("game needs at least one player");
  if (spec.rule.n_players != spec.players.size())
    throw std::invalid_argument("rule player count does not match the game");
  if (std::holds_alternative<PoissonSpec>(spec.process))
    throw std::invalid_argument("Poisson games are solved by the applications module");
  validate_process(spec.process);
  Game g;
  g.spec = spec;
  g.grid = grid;
  g.prior_index = grid->index_of(spec.prior);
  if (g.prior_index == 0 || g.prior_index + 1 == grid->size())
    throw std::invalid_argument("prior must lie in the grid interior");
  const double z = grid->points[default_anchor(*grid)];
  for (const auto& pl : spec.players) {
    pl.u.validate();
    g.u.push_back(sample(pl.u, grid));
    g.phi.push_back(phi_transform(pl.c, spec.process, grid, z));
    g.net.push_back(net_payoff(g.u.back(), g.phi.back()));
    g.tol.push_back(certification_tolerance(g.net.back()));
  }
  return g;
}

Game with_rule(const Game& game, const CoalitionRule& rule) {
  if (rule.n_players != game.n_players()) throw std::invalid_argument("rule player count mismatch");
  Game g = game;
  g.spec.rule = rule;
  return g;
}

void jitter_payoffs(Game& game, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-scale, scale);
  for (std::size_t i = 0; i < game.n_players(); ++i) {
    for (auto& v : game.u[i].values) v += noise(rng);
    game.net[i] = net_payoff(game.u[i], game.phi[i]);
    game.tol[i] = certification_tolerance(game.net[i]);
  }
}

double u_bar(const GridFunction& net, std::size_t lo, std::size_t hi, std::size_t k) {
  if (k < lo || k > hi) throw std::invalid_argument("u_bar: belief outside [p_low, p_high]");
  if (lo == hi) return net[k];
  const auto& x = net.grid->points;
  return ((x[hi] - x[k]) * net[lo] + (x[k] - x[lo]) * net[hi]) / (x[hi] - x[lo]);
}

namespace {

struct Scratch {
  SamplingRegion full, none;
  std::vector<double> V, U;
  std::vector<std::size_t> stack;
};

// U over the whole grid: chord on each component of O, net elsewhere.
void realized_payoff(const GridFunction& net, const std::vector<std::pair<std::size_t, std::size_t>>& comps,
                     std::vector<double>& U) {
  U = net.values;
  const auto& x = net.grid->points;
  for (auto [a, b] : comps) {
    const double dx = x[b] - x[a];
    for (std::size_t k = a + 1; k < b; ++k) U[k] = ((x[b] - x[k]) * net[a] + (x[k] - x[a]) * net[b]) / dx;
  }
}

void closure_into(const GridFunction& net, const SamplingRegion& C, const SamplingRegion& S, Scratch& s) {
  s.V = net.values;
  const auto* x = net.grid->points.data();
  for (auto [a, b] : C.components())
    closure_kernel(x, net.values.data(), a, b, S.slots().data(), s.V.data(), s.stack);
}

void score_player(EquilibriumCertificate& cert, std::size_t i, const Scratch& s) {
  double worst = -std::numeric_limits<double>::infinity();
  double least = std::numeric_limits<double>::infinity();
  std::size_t at = 0;
  for (std::size_t k = 0; k < s.V.size(); ++k) {
    double d = s.V[k] - s.U[k];
    if (d > worst) {
      worst = d;
      at = k;
    }
    least = std::min(least, d);
  }
  cert.violation[i] = worst;
  cert.min_slack[i] = least;
  cert.worst[i] = at;
  cert.checked[i] = true;
}

void init_cert(EquilibriumCertificate& cert, const Game& game) {
  const std::size_t n = game.n_players();
  cert.violation.assign(n, 0.0);
  cert.min_slack.assign(n, 0.0);
  cert.worst.assign(n, game.prior_index);
  cert.tol = game.tol;
  cert.checked.assign(n, false);
}

void finish_cert(EquilibriumCertificate& cert, const std::vector<std::pair<std::size_t, std::size_t>>& comps,
                 std::size_t n_grid) {
  cert.pass = true;
  for (std::size_t i = 0; i < cert.violation.size(); ++i) {
    if (!cert.checked[i]) continue;
    if (cert.violation[i] > cert.tol[i]) cert.pass = false;
    if (cert.min_slack[i] < -1e-10) cert.slack_violation = true;
  }
  for (auto [a, b] : comps)
    if (a == 0 || b + 1 == n_grid) cert.edge_warning = true;
}

}  // namespace

EquilibriumCertificate check_equilibrium(const Game& game, const std::vector<SamplingRegion>& profile) {
  if (profile.size() != game.n_players()) throw std::invalid_argument("profile size != player count");
  for (const auto& r : profile)
    if (!same_grid(r.grid(), game.grid)) throw std::invalid_argument("profile region on a different grid");
  EquilibriumCertificate cert;
  init_cert(cert, game);
  cert.profile = profile;
  cert.region = collective_region(game.rule(), profile);
  auto comps = cert.region.components();
  auto classes = classify_players(game.rule());
  cert.vacuous = classes.uni.empty() && classes.una.empty();
  Scratch s;
  for (std::size_t i = 0; i < game.n_players(); ++i) {
    auto env = player_envelopes(game.rule(), i, profile);
    closure_into(game.net[i], env.C, env.S, s);
    realized_payoff(game.net[i], comps, s.U);
    score_player(cert, i, s);
  }
  finish_cert(cert, comps, game.grid->size());
  return cert;
}

namespace {

EquilibriumCertificate check_single(const Game& game, const SamplingRegion& region,
                                    const PlayerClasses& classes, Scratch& s) {
  if (!s.full.grid()) {
    s.full = SamplingRegion::full(game.grid);
    s.none = SamplingRegion::empty(game.grid);
  }
  EquilibriumCertificate cert;
  init_cert(cert, game);
  cert.region = region;
  cert.vacuous = classes.uni.empty() && classes.una.empty();
  auto comps = region.components();
  for (std::size_t i = 0; i < game.n_players(); ++i) {
    bool uni = std::find(classes.uni.begin(), classes.uni.end(), i) != classes.uni.end();
    bool una = std::find(classes.una.begin(), classes.una.end(), i) != classes.una.end();
    if (!uni && !una) continue;  // C = S = region: V coincides with U
    const SamplingRegion& C = una ? s.full : region;
    const SamplingRegion& S = uni ? s.none : region;
    closure_into(game.net[i], C, S, s);
    realized_payoff(game.net[i], comps, s.U);
    score_player(cert, i, s);
  }
  finish_cert(cert, comps, game.grid->size());
  return cert;
}

}  // namespace

EquilibriumCertificate check_equilibrium(const Game& game, const SamplingRegion& region) {
  if (!same_grid(region.grid(), game.grid)) throw std::invalid_argument("region on a different grid");
  Scratch s;
  return check_single(game, region, classify_players(game.rule()), s);
}

std::vector<EquilibriumEntry> enumerate_interval_equilibria(const Game& game, EnumScope scope, Exec exec) {
  const std::size_t n = game.spec.grid.n;
  if (scope == EnumScope::single && n > 1024)
    throw std::invalid_argument("single-interval enumeration is limited to n <= 1024");
  if (scope == EnumScope::two_interval && n > 256)
    throw std::invalid_argument("two-interval enumeration is limited to n <= 256");
  const std::size_t p0 = game.prior_index;

  struct Cand {
    std::size_t a, m, b;  // m == npos for single intervals; a == b for the empty region
  };
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<Cand> cands;
  cands.push_back({p0, none, p0});
  for (std::size_t a = 0; a < p0; ++a)
    for (std::size_t b = p0 + 1; b < game.grid->size(); ++b) {
      cands.push_back({a, none, b});
      if (scope == EnumScope::two_interval)
        for (std::size_t m = a + 1; m < b; ++m) cands.push_back({a, m, b});
    }

  auto classes = classify_players(game.rule());
  std::vector<std::optional<EquilibriumEntry>> out(cands.size());
  const auto count = static_cast<std::ptrdiff_t>(cands.size());
#pragma omp parallel if (exec == Exec::parallel)
  {
    Scratch s;
#pragma omp for schedule(dynamic, 32)
    for (std::ptrdiff_t c = 0; c < count; ++c) {
      const auto& cd = cands[static_cast<std::size_t>(c)];
      SamplingRegion r = cd.m == none
                             ? SamplingRegion::interval(game.grid, cd.a, cd.b)
                             : SamplingRegion::interval(game.grid, cd.a, cd.m)
                                   .unite(SamplingRegion::interval(game.grid, cd.m, cd.b));
      auto cert = check_single(game, r, classes, s);
      if (cert.pass) out[static_cast<std::size_t>(c)] = EquilibriumEntry{std::move(r), std::move(cert)};
    }
  }
  std::vector<EquilibriumEntry> result;
  for (auto& e : out)
    if (e) result.push_back(std::move(*e));
  return result;
}

Extremal extremal_equilibria(const Game& game, const std::vector<SamplingRegion>& equilibria) {
  if (equilibria.empty()) throw std::invalid_argument("extremal_equilibria needs a non-empty list");
  Extremal ex;
  ex.maximum = SamplingRegion::empty(game.grid);
  for (const auto& r : equilibria) ex.maximum = ex.maximum.unite(r);
  ex.maximum_cert = check_equilibrium(game, ex.maximum);
  ex.maximum_certifies = ex.maximum_cert.pass;
  // By slot count (points and open cells), so any strict subset of a region is met before it.
  const std::size_t ne = equilibria.size();
  std::vector<std::size_t> order(ne), size(ne);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> comps(ne);
  for (std::size_t i = 0; i < ne; ++i) {
    order[i] = i;
    comps[i] = equilibria[i].components();
    for (auto [a, b] : comps[i]) size[i] += 2 * (b - a) - 1;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return size[a] < size[b]; });
  auto inside = [&](std::size_t i, std::size_t j) {  // region i within region j
    for (auto [a, b] : comps[i]) {
      bool hit = false;
      for (auto [c, d] : comps[j]) hit = hit || (c <= a && b <= d);
      if (!hit) return false;
    }
    return true;
  };
  std::vector<std::size_t> keep;
  for (std::size_t i : order) {
    bool minimal = true;
    for (std::size_t j : keep)
      if (inside(j, i)) {
        minimal = false;
        break;
      }
    if (minimal) keep.push_back(i);
  }
  std::sort(keep.begin(), keep.end());
  for (std::size_t i : keep) ex.minimal.push_back(equilibria[i]);
  return ex;
}

SamplingRegion efficient_region(const Game& game, const std::vector<double>& lambda) {
  if (lambda.size() != game.n_players()) throw std::invalid_argument("weight vector size mismatch");
  bool any = false;
  for (double l : lambda) {
    if (!(l >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
    any = any || l > 0.0;
  }
  if (!any) throw std::invalid_argument("weights must not all be zero");
  GridFunction W(game.grid, 0.0);
  for (std::size_t i = 0; i < lambda.size(); ++i)
    for (std::size_t k = 0; k < W.size(); ++k) W[k] += lambda[i] * game.net[i][k];
  auto hull = concave_closure(W, 0, W.size() - 1);
  const double tol = certification_tolerance(W);
  std::vector<bool> flags(W.size());
  for (std::size_t k = 0; k < W.size(); ++k) flags[k] = hull.closure[k] - W[k] > tol;
  return SamplingRegion::from_point_runs(game.grid, flags);
}

namespace {

std::string fmt_region(const SamplingRegion& r) {
  std::ostringstream os;
  os.precision(6);
  auto iv = r.intervals();
  if (iv.empty()) return "{}";
  for (std::size_t k = 0; k < iv.size(); ++k) os << (k ? " u " : "") << '(' << iv[k].first << ',' << iv[k].second << ')';
  return os.str();
}

std::vector<SamplingRegion> regions_of(const std::vector<EquilibriumEntry>& es) {
  std::vector<SamplingRegion> out;
  for (const auto& e : es) out.push_back(e.region);
  return out;
}

bool contains_region(const std::vector<SamplingRegion>& set, const SamplingRegion& r) {
  return std::find(set.begin(), set.end(), r) != set.end();
}

}  // namespace

StaticsReport misalignment_statics(const GameSpec& base, const PiecewiseLinearSpec& f,
                                   const PiecewiseLinearSpec& g, const std::vector<double>& b_list) {
  if (base.players.empty()) throw std::invalid_argument("misalignment family needs a cost spec");
  if (b_list.empty()) throw std::invalid_argument("misalignment family needs b values");
  auto bs = b_list;
  std::sort(bs.begin(), bs.end());
  if (bs.front() < 0.0) throw std::invalid_argument("misalignment b must be >= 0");
  if (base.rule.n_players != 2) throw std::invalid_argument("misalignment family has two players");
  const CostSpec cost = base.players.front().c;

  auto make_spec = [&](double b) {
    GameSpec s = base;
    s.players = {{combine(1.0, f, b, g), cost}, {combine(1.0, f, -b, g), cost}};
    return s;
  };
  // one grid for every b so regions compare directly
  GameSpec pin_spec = make_spec(1.0);
  auto grid = game_grid(pin_spec);
  auto classes = classify_players(base.rule);
  const bool both_uni = classes.uni.size() == 2;
  const bool both_una = classes.una.size() == 2;

  std::vector<std::vector<SamplingRegion>> T;
  std::vector<Extremal> ext;
  for (double b : bs) {
    auto game = prepare_game(make_spec(b), grid);
    T.push_back(regions_of(enumerate_interval_equilibria(game)));
    ext.push_back(extremal_equilibria(game, T.back()));
  }
  StaticsReport rep;
  for (std::size_t k = 0; k + 1 < bs.size(); ++k) {
    const auto& lo = T[k];
    const auto& hi = T[k + 1];
    std::size_t missing = 0;
    for (const auto& r : hi)
      if (!contains_region(lo, r)) ++missing;
    std::ostringstream os;
    os << "b=" << bs[k + 1] << " vs b=" << bs[k] << ": |T|=" << hi.size() << " vs " << lo.size()
       << ", not nested: " << missing;
    rep.violations += missing;
    if (both_uni) {
      bool shrink = ext[k + 1].maximum.subset_of(ext[k].maximum);
      os << "; max " << fmt_region(ext[k + 1].maximum) << (shrink ? " within " : " NOT within ")
         << fmt_region(ext[k].maximum);
      if (!shrink) ++rep.violations;
    }
    if (both_una) {
      std::size_t bad = 0;
      for (const auto& m1 : ext[k + 1].minimal)
        for (const auto& m0 : ext[k].minimal)
          if (m0.strictly_contains(m1)) ++bad;
      os << "; minimal strictly smaller pairs: " << bad;
      rep.violations += bad;
    }
    rep.lines.push_back(os.str());
  }
  return rep;
}

StaticsReport rule_statics(const GameSpec& base, const std::vector<CoalitionRule>& rules) {
  StaticsReport rep;
  if (rules.size() < 2) return rep;
  auto grid = game_grid(base);
  std::vector<Extremal> ext;
  std::vector<bool> meaningful;
  for (const auto& rule : rules) {
    GameSpec s = base;
    s.rule = rule;
    auto game = prepare_game(s, grid);
    auto eq = regions_of(enumerate_interval_equilibria(game));
    if (eq.empty()) throw std::runtime_error("rule family member has no enumerated equilibrium");
    ext.push_back(extremal_equilibria(game, eq));
    auto c = classify_players(rule);
    meaningful.push_back(!c.uni.empty() || !c.una.empty());
  }
  for (std::size_t k = 0; k + 1 < rules.size(); ++k) {
    if (!rule_subset(rules[k], rules[k + 1]))
      throw std::invalid_argument("rule family must be increasing in decisive coalitions");
    std::ostringstream os;
    os << "rule " << rules[k + 1].describe() << " vs " << rules[k].describe() << ": ";
    if (!meaningful[k] || !meaningful[k + 1]) {
      os << "skipped (no unilateral or unanimous class)";
      rep.lines.push_back(os.str());
      continue;
    }
    bool larger = ext[k + 1].maximum.strictly_contains(ext[k].maximum);
    std::size_t bad_min = 0;
    for (const auto& m1 : ext[k + 1].minimal)
      for (const auto& m0 : ext[k].minimal)
        if (m1.strictly_contains(m0)) ++bad_min;
    os << "max " << fmt_region(ext[k + 1].maximum) << (larger ? " STRICTLY LARGER than " : " not larger than ")
       << fmt_region(ext[k].maximum) << "; minimal strictly larger pairs: " << bad_min;
    rep.violations += (larger ? 1 : 0) + bad_min;
    rep.lines.push_back(os.str());
  }
  return rep;
}

}  // namespace cstop
