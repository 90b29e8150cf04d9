#include "cstop/committee.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace cstop {

double committee_threshold(double v) { return 1.0 / (1.0 + v); }

PiecewiseLinearSpec committee_payoff(double v_i, double w_piv) {
  return PiecewiseLinearSpec::affine_jump(w_piv, 1.0, -1.0, 0.0, v_i);
}

namespace {

bool same_cost(const CostSpec& a, const CostSpec& b) {
  if (a.c.index() != b.c.index()) return false;
  if (auto x = std::get_if<double>(&a.c)) return *x == std::get<double>(b.c);
  const auto& p = std::get<PiecewiseLinearSpec>(a.c);
  const auto& q = std::get<PiecewiseLinearSpec>(b.c);
  return p.x == q.x && p.left == q.left && p.right == q.right;
}

double cell_width(const BeliefGrid& g, std::size_t k) {
  double w = 0.0;
  if (k > 0) w = std::max(w, g[k] - g[k - 1]);
  if (k + 1 < g.size()) w = std::max(w, g[k + 1] - g[k]);
  return w;
}

}  // namespace

bool homogeneous_costs(const CommitteeSpec& spec) {
  for (const auto& c : spec.costs)
    if (!same_cost(c, spec.costs.front())) return false;
  return true;
}

CommitteeGame prepare_committee(const CommitteeSpec& spec) {
  const std::size_t n = spec.v.size();
  if (n == 0 || n % 2 == 0) throw std::invalid_argument("committee size must be odd");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(spec.v[i] > 0.0)) throw std::invalid_argument("committee values must be positive");
    if (i > 0 && !(spec.v[i] > spec.v[i - 1]))
      throw std::invalid_argument("committee values must be strictly increasing");
  }
  const std::size_t m = (n + 1) / 2;
  if (spec.piv < m || spec.piv > n) throw std::invalid_argument("piv must lie in {m, ..., 2m-1}");
  if (spec.costs.size() != 1 && spec.costs.size() != n)
    throw std::invalid_argument("give one shared cost or one cost per player");
  if (spec.rule.n_players != n) throw std::invalid_argument("rule player count mismatch");

  CommitteeGame cg;
  cg.spec = spec;
  cg.w = committee_threshold(spec.v[spec.piv - 1]);
  GameSpec gs;
  gs.prior = cg.w;
  gs.process = spec.process;
  gs.rule = spec.rule;
  gs.grid = spec.grid;
  const double h = (1.0 - 2.0 * gs.grid.delta) / static_cast<double>(gs.grid.n - 1);
  gs.grid.pins.push_back(cg.w);
  gs.grid.pins.push_back(cg.w - aux_offset(h));
  for (std::size_t i = 0; i < n; ++i)
    gs.players.push_back({committee_payoff(spec.v[i], cg.w), spec.costs[spec.costs.size() == 1 ? 0 : i]});
  cg.game = prepare_game(gs);
  cg.w_index = cg.game.grid->index_of(cg.w);
  cg.aux_index = cg.game.grid->index_of(cg.w - aux_offset(h));
  if (cg.aux_index + 1 != cg.w_index) throw std::logic_error("auxiliary point is not adjacent to w_piv");
  return cg;
}

std::size_t best_upper_index(const CommitteeGame& cg, std::size_t i, std::size_t lower) {
  if (lower > cg.w_index) throw std::invalid_argument("upper best response needs p_low <= w_piv");
  const std::size_t a = lower == cg.w_index ? cg.aux_index : lower;
  const auto& x = cg.grid()->points;
  const auto& f = cg.game.net[i];
  std::size_t best = cg.w_index;
  double best_s = -std::numeric_limits<double>::infinity();
  for (std::size_t j = cg.w_index; j < x.size(); ++j) {
    double s = (f[j] - f[a]) / (x[j] - x[a]);
    if (s > best_s) {
      best_s = s;
      best = j;
    }
  }
  return best;
}

std::size_t best_lower_index(const CommitteeGame& cg, std::size_t i, std::size_t upper) {
  if (upper < cg.w_index) throw std::invalid_argument("lower best response needs p_high >= w_piv");
  const auto& x = cg.grid()->points;
  const auto& f = cg.game.net[i];
  std::size_t best = 0;
  double best_s = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < cg.w_index; ++j) {
    double s = (f[j] - f[upper]) / (x[upper] - x[j]);
    if (s > best_s) {
      best_s = s;
      best = j;
    }
  }
  // supremum only approached as p_low -> w_piv
  return best == cg.aux_index ? cg.w_index : best;
}

double one_sided_best_response(const CommitteeGame& cg, std::size_t i, BoundSide side, double anchor) {
  if (i >= cg.game.n_players()) throw std::out_of_range("player index");
  const std::size_t k = cg.grid()->index_of(anchor);
  if (side == BoundSide::upper) {
    if (k > cg.w_index) throw std::invalid_argument("upper best response anchor must be <= w_piv");
    return cg.grid()->points[best_upper_index(cg, i, k)];
  }
  if (k < cg.w_index) throw std::invalid_argument("lower best response anchor must be >= w_piv");
  return cg.grid()->points[best_lower_index(cg, i, k)];
}

std::pair<std::size_t, std::size_t> pivotal_players(const CoalitionRule& rule) {
  if (rule.minimal.empty()) throw std::invalid_argument("empty rule");
  std::size_t L = std::numeric_limits<std::size_t>::max();
  std::size_t U = 0;
  for (Coalition g : rule.minimal) {
    auto mem = members(g);
    U = std::max(U, mem.front());
    L = std::min(L, mem.back());
  }
  return {L, U};
}

namespace {

struct Interval {
  std::size_t lo, hi;
};

// Collective interval when every individual interval contains w_piv.
Interval collective_interval(const CoalitionRule& rule, const std::vector<Interval>& prof) {
  std::size_t lo = 0, hi = std::numeric_limits<std::size_t>::max();
  for (Coalition g : rule.minimal) {
    std::size_t glo = std::numeric_limits<std::size_t>::max(), ghi = 0;
    for (auto j : members(g)) {
      glo = std::min(glo, prof[j].lo);
      ghi = std::max(ghi, prof[j].hi);
    }
    lo = std::max(lo, glo);
    hi = std::min(hi, ghi);
  }
  return {lo, hi};
}

double payoff_at(const GridFunction& f, Interval r, std::size_t k) {
  if (r.lo < k && k < r.hi) return u_bar(f, r.lo, r.hi, k);
  return f[k];
}

// Every member weakly gains everywhere and someone strictly somewhere.
bool profitable(const Game& game, Coalition J, Interval before, Interval after) {
  if (before.lo == after.lo && before.hi == after.hi) return false;
  bool strict = false;
  for (auto k : members(J)) {
    const auto& f = game.net[k];
    const double tol = game.tol[k];
    const std::size_t from = std::min(before.lo, after.lo), to = std::max(before.hi, after.hi);
    for (std::size_t p = from; p <= to; ++p) {
      double d = payoff_at(f, after, p) - payoff_at(f, before, p);
      if (d < -tol) return false;
      if (d > tol) strict = true;
    }
  }
  return strict;
}

}  // namespace

DeviationReport strong_check(const CommitteeGame& cg, std::size_t lo, std::size_t hi, Exec exec) {
  const auto& game = cg.game;
  const std::size_t n = game.n_players();
  const std::size_t N = cg.grid()->size();
  if (lo > hi || hi >= N) throw std::invalid_argument("strong_check: bad interval");
  DeviationReport rep;
  const Coalition all = n >= 32 ? ~Coalition{0} : (Coalition{1} << n) - 1;
  if (lo > cg.w_index || hi < cg.w_index) {
    // the interval lies on one side of w_piv: try everyone stopping at once
    Interval none{cg.w_index, cg.w_index};
    rep.scanned = 1;
    if (profitable(game, all, {lo, hi}, none)) {
      rep.pass = false;
      rep.coalition = all;
      rep.target_lo = rep.target_hi = cg.w_index;
    }
    return rep;
  }

  std::vector<std::size_t> lows{cg.w_index, lo}, highs{cg.w_index, hi};
  for (std::size_t k = 0; k < 64; ++k) {
    auto idx = static_cast<std::size_t>(std::llround(static_cast<double>(k) * static_cast<double>(N - 1) / 63.0));
    if (idx < cg.w_index) lows.push_back(idx);
    if (idx > cg.w_index) highs.push_back(idx);
  }
  std::sort(lows.begin(), lows.end());
  lows.erase(std::unique(lows.begin(), lows.end()), lows.end());
  std::sort(highs.begin(), highs.end());
  highs.erase(std::unique(highs.begin(), highs.end()), highs.end());

  const Interval base = collective_interval(game.rule(), std::vector<Interval>(n, Interval{lo, hi}));
  const auto n_coal = static_cast<std::ptrdiff_t>(all);
  struct Hit {
    std::size_t lo, hi, scanned;
    bool found;
  };
  std::vector<Hit> hits(static_cast<std::size_t>(n_coal) + 1, Hit{0, 0, 0, false});
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel)
  for (std::ptrdiff_t c = 1; c <= n_coal; ++c) {
    const auto J = static_cast<Coalition>(c);
    std::vector<Interval> prof(n, Interval{lo, hi});
    auto& hit = hits[static_cast<std::size_t>(c)];
    for (std::size_t a : lows) {
      for (std::size_t b : highs) {
        for (auto j : members(J)) prof[j] = {a, b};
        ++hit.scanned;
        auto after = collective_interval(game.rule(), prof);
        if (profitable(game, J, base, after)) {
          hit = {a, b, hit.scanned, true};
          break;
        }
      }
      if (hit.found) break;
    }
  }
  for (std::size_t c = 1; c < hits.size(); ++c) {
    rep.scanned += hits[c].scanned;
    if (hits[c].found && rep.pass) {
      rep.pass = false;
      rep.coalition = static_cast<Coalition>(c);
      rep.target_lo = hits[c].lo;
      rep.target_hi = hits[c].hi;
    }
  }
  return rep;
}

StrongSolution strong_solve(const CommitteeGame& cg, bool run_deviation_scan, Exec exec) {
  if (!homogeneous_costs(cg.spec))
    throw std::invalid_argument(
        "strong_solve needs homogeneous costs; use check/enumerate for heterogeneous committees");
  const auto& g = *cg.grid();
  StrongSolution sol;
  std::tie(sol.L, sol.U) = pivotal_players(cg.game.rule());

  std::vector<std::size_t> anchors;
  for (std::size_t a = 0; a <= cg.aux_index; ++a) anchors.push_back(a);
  anchors.push_back(cg.w_index);

  struct Probe {
    std::size_t a, hi, back;
    double res;
    bool ok;
  };
  std::vector<Probe> probes(anchors.size());
  const auto count = static_cast<std::ptrdiff_t>(anchors.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t t = 0; t < count; ++t) {
    std::size_t a = anchors[static_cast<std::size_t>(t)];
    std::size_t b = best_upper_index(cg, sol.U, a);
    std::size_t back = best_lower_index(cg, sol.L, b);
    double res = std::abs(g[back] - g[a]);
    probes[static_cast<std::size_t>(t)] = {a, b, back, res, res <= cell_width(g, a) * (1.0 + 1e-9)};
  }

  auto make_cert = [&](std::size_t a, std::size_t b) {
    StrongCertificate c;
    c.lo = a;
    c.hi = b;
    c.p_low = g[a];
    c.p_high = g[b];
    c.residual_low = std::abs(g[best_lower_index(cg, sol.L, b)] - g[a]);
    c.residual_high = std::abs(g[best_upper_index(cg, sol.U, a)] - g[b]);
    c.residual_ok = c.residual_low <= cell_width(g, a) * (1.0 + 1e-9) &&
                    c.residual_high <= cell_width(g, b) * (1.0 + 1e-9);
    return c;
  };

  // clusters of consecutive passing anchors collapse to their best member
  for (std::size_t t = 0; t < probes.size();) {
    if (!probes[t].ok) {
      ++t;
      continue;
    }
    std::size_t best = t, u = t;
    for (; u < probes.size() && probes[u].ok; ++u)
      if (probes[u].res < probes[best].res) best = u;
    sol.fixed_points.push_back(make_cert(probes[best].a, probes[best].hi));
    t = u;
  }

  // alternation from the widest interval
  std::size_t a = 0;
  for (std::size_t it = 0; it < 4 * g.size(); ++it) {
    std::size_t b = best_upper_index(cg, sol.U, a);
    std::size_t a2 = best_lower_index(cg, sol.L, b);
    if (a2 == a) {
      bool known = false;
      for (const auto& fp : sol.fixed_points) known = known || (fp.lo == a && fp.hi == b);
      if (!known) sol.fixed_points.push_back(make_cert(a, b));
      break;
    }
    a = a2;
  }

  if (sol.fixed_points.empty()) {
    auto near = std::min_element(probes.begin(), probes.end(),
                                 [](const Probe& x, const Probe& y) { return x.res < y.res; });
    throw std::runtime_error("no fixed point within one grid cell; nearest p_low=" + std::to_string(g[near->a]) +
                             " residual=" + std::to_string(near->res));
  }
  std::sort(sol.fixed_points.begin(), sol.fixed_points.end(),
            [](const StrongCertificate& x, const StrongCertificate& y) {
              return x.lo != y.lo ? x.lo < y.lo : x.hi > y.hi;
            });
  sol.maximum = 0;
  for (std::size_t k = 1; k < sol.fixed_points.size(); ++k) {
    const auto& m = sol.fixed_points[sol.maximum];
    const auto& c = sol.fixed_points[k];
    if (c.hi - c.lo > m.hi - m.lo) sol.maximum = k;
  }
  const bool all_strong = sol.L > sol.U;
  for (std::size_t k = 0; k < sol.fixed_points.size(); ++k) {
    auto& fp = sol.fixed_points[k];
    fp.is_maximum = k == sol.maximum;
    fp.strength = (all_strong || fp.is_maximum) ? Strength::strong : Strength::unknown;
    if (run_deviation_scan && fp.strength == Strength::strong) {
      fp.deviation_checked = true;
      fp.no_deviation = strong_check(cg, fp.lo, fp.hi, exec).pass;
    }
  }
  return sol;
}

BridgeResult pivotal_two_player_equilibria(const CommitteeGame& cg) {
  auto [L, U] = pivotal_players(cg.game.rule());
  BridgeResult br;
  br.unilateral = L <= U;
  GameSpec gs = cg.game.spec;
  gs.players = {cg.game.spec.players[L], cg.game.spec.players[U]};
  gs.rule = br.unilateral ? unilateral_rule(2) : unanimity_rule(2);
  auto game = prepare_game(gs, cg.grid());
  for (auto& e : enumerate_interval_equilibria(game)) br.equilibria.push_back(std::move(e.region));
  if (br.equilibria.empty()) throw std::runtime_error("two-player pivotal game has no interval equilibrium");
  auto ex = extremal_equilibria(game, br.equilibria);
  br.maximum = ex.maximum;
  br.minimal = ex.minimal;
  return br;
}

}  // namespace cstop
