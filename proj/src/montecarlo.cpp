#include "cstop/montecarlo.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cstop {

namespace {

std::mt19937_64 path_engine(std::uint64_t seed, std::size_t path) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(std::uint64_t(path) >> 32)};
  return std::mt19937_64(seq);
}

void validate(const SimConfig& c) {
  if (c.n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
  if (!(c.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(c.max_time > 0.0)) throw std::invalid_argument("max_time must be positive");
  if (c.histogram_bins < 1) throw std::invalid_argument("histogram needs at least one bin");
}

}  // namespace

MeanSE mean_se(const std::vector<double>& xs) {
  MeanSE r;
  if (xs.empty()) return r;
  const double n = static_cast<double>(xs.size());
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return r;
}

SimReport simulate(const Game& game, const SamplingRegion& region, const SimConfig& cfg, Exec exec) {
  validate(cfg);
  if (!same_grid(region.grid(), game.grid)) throw std::invalid_argument("region on a different grid");
  const auto& x = game.grid->points;
  const double p0 = game.spec.prior;
  const double lo_clamp = x.front(), hi_clamp = x.back();
  const std::size_t np = game.n_players();

  // the component holding the prior; the path stops on leaving it
  double lo = p0, hi = p0;
  for (auto [a, b] : region.components())
    if (x[a] < p0 && p0 < x[b]) lo = x[a], hi = x[b];
  const bool sampling = lo < hi;

  const auto* diff = std::get_if<DiffusionSpec>(&game.spec.process);
  const auto max_steps = static_cast<std::size_t>(std::ceil(cfg.max_time / cfg.dt));
  const double sdt = std::sqrt(cfg.dt);

  SimReport rep;
  rep.terminal.assign(cfg.n_paths, p0);
  rep.path_cost.assign(np, std::vector<double>(cfg.n_paths, 0.0));
  std::vector<double> times(cfg.n_paths, 0.0);
  std::vector<std::uint8_t> truncated(cfg.n_paths, 0), clamped(cfg.n_paths, 0);

  const auto n = static_cast<std::ptrdiff_t>(cfg.n_paths);
#pragma omp parallel for schedule(dynamic, 256) if (exec == Exec::parallel)
  for (std::ptrdiff_t path = 0; path < n; ++path) {
    const auto ip = static_cast<std::size_t>(path);
    if (!sampling) continue;
    auto rng = path_engine(cfg.seed, ip);
    boost::random::normal_distribution<double> normal;
    std::vector<double> cost(np, 0.0);
    double p = p0;
    std::size_t step = 0;
    while (p > lo && p < hi) {
      if (step == max_steps) {
        truncated[ip] = 1;
        break;
      }
      for (std::size_t i = 0; i < np; ++i) cost[i] += game.spec.players[i].c.at(p) * cfg.dt;
      const double s = diff ? 2.0 / diff->sigma * p * (1.0 - p) : diffusion_coefficient(game.spec.process, p);
      p += s * sdt * normal(rng);
      if (p < lo_clamp || p > hi_clamp) {
        clamped[ip] = 1;
        p = std::clamp(p, lo_clamp, hi_clamp);
      }
      ++step;
    }
    rep.terminal[ip] = p;
    times[ip] = static_cast<double>(step) * cfg.dt;
    for (std::size_t i = 0; i < np; ++i) rep.path_cost[i][ip] = cost[i];
  }

  std::vector<double> pay(cfg.n_paths);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t k = 0; k < cfg.n_paths; ++k) pay[k] = eval_pwl(game.spec.players[i].u, rep.terminal[k]);
    rep.payoff.push_back(mean_se(pay));
    rep.cost.push_back(mean_se(rep.path_cost[i]));
  }
  rep.belief = mean_se(rep.terminal);
  rep.time = mean_se(times);
  rep.histogram.assign(cfg.histogram_bins, 0);
  for (double t : rep.terminal) {
    auto b = static_cast<std::size_t>(t * static_cast<double>(cfg.histogram_bins));
    ++rep.histogram[std::min(b, cfg.histogram_bins - 1)];
  }
  const double N = static_cast<double>(cfg.n_paths);
  rep.truncated_fraction = static_cast<double>(std::count(truncated.begin(), truncated.end(), 1)) / N;
  rep.clamp_fraction = static_cast<double>(std::count(clamped.begin(), clamped.end(), 1)) / N;
  rep.clamp_warning = rep.clamp_fraction >= 1e-3;
  return rep;
}

SimReport simulate(const Game& game, const std::vector<SamplingRegion>& profile, const SimConfig& config,
                   Exec exec) {
  if (profile.size() != game.n_players()) throw std::invalid_argument("profile size != player count");
  return simulate(game, collective_region(game.rule(), profile), config, exec);
}

CostIdentityReport verify_cost_identity(const Game& game, const SamplingRegion& region, const SimConfig& config,
                                        Exec exec) {
  auto sim = simulate(game, region, config, exec);
  CostIdentityReport rep;
  rep.pass = true;
  const double phi_scale = std::sqrt(config.dt);
  rep.bias_allowance = phi_scale;
  std::vector<double> pred(config.n_paths), diff(config.n_paths);
  for (std::size_t i = 0; i < game.n_players(); ++i) {
    const auto& phi = game.phi[i];
    const double phi0 = phi.interpolate(game.spec.prior);
    for (std::size_t k = 0; k < config.n_paths; ++k) {
      pred[k] = phi.interpolate(sim.terminal[k]) - phi0;
      diff[k] = sim.path_cost[i][k] - pred[k];
    }
    CostIdentityRow row;
    row.simulated = sim.cost[i];
    row.predicted = mean_se(pred);
    row.difference = mean_se(diff);
    row.allowance = 3.0 * row.difference.se + phi_scale * std::abs(row.simulated.mean) + 1e-12;
    row.pass = std::abs(row.difference.mean) <= row.allowance;
    rep.pass = rep.pass && row.pass;
    rep.players.push_back(row);
  }
  return rep;
}

PoissonSimReport simulate_poisson(const PoissonGameSpec& spec, double p_low, const SimConfig& cfg, Exec exec) {
  validate(cfg);
  if (!(spec.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double p0 = spec.prior;
  if (!(p_low <= p0) || !(p_low > 0.0)) throw std::invalid_argument("p_low must lie in (0, p0]");
  const std::size_t np = spec.players.size();
  const auto max_steps = static_cast<std::size_t>(std::ceil(cfg.max_time / cfg.dt));

  auto grid = build_grid(spec.grid.n, spec.grid.delta, {p0, p_low});
  std::vector<GridFunction> phi;
  for (const auto& pl : spec.players) phi.push_back(poisson_phi(pl.c, spec.lambda, grid, p0));

  std::vector<double> terminal(cfg.n_paths, p0), before(cfg.n_paths, p0);
  std::vector<std::vector<double>> cost(np, std::vector<double>(cfg.n_paths, 0.0));
  const auto n = static_cast<std::ptrdiff_t>(cfg.n_paths);
#pragma omp parallel for schedule(dynamic, 256) if (exec == Exec::parallel)
  for (std::ptrdiff_t path = 0; path < n; ++path) {
    const auto ip = static_cast<std::size_t>(path);
    auto rng = path_engine(cfg.seed, ip);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const bool good = unif(rng) < p0;
    const double arrival =
        good ? boost::random::exponential_distribution<double>(spec.lambda)(rng) : std::numeric_limits<double>::infinity();
    double p = p0, t = 0.0;
    std::size_t step = 0;
    std::vector<double> c(np, 0.0);
    while (p > p_low && step < max_steps) {
      const double h = std::min(cfg.dt, arrival - t);
      for (std::size_t i = 0; i < np; ++i) c[i] += spec.players[i].c.at(p) * h;
      if (arrival - t <= cfg.dt) {
        // breakthrough inside this step; the no-news belief just before it
        p -= spec.lambda * p * (1.0 - p) * h;
        before[ip] = p;
        p = 1.0;
        break;
      }
      p -= spec.lambda * p * (1.0 - p) * cfg.dt;
      t += cfg.dt;
      ++step;
      before[ip] = p;
    }
    terminal[ip] = p;
    for (std::size_t i = 0; i < np; ++i) cost[i][ip] = c[i];
  }

  PoissonSimReport rep;
  std::vector<double> buf(cfg.n_paths), pred(cfg.n_paths), stated(cfg.n_paths);
  std::size_t hits = 0;
  for (double t : terminal) hits += t == 1.0;
  rep.breakthrough_fraction = static_cast<double>(hits) / static_cast<double>(cfg.n_paths);
  rep.belief = mean_se(terminal);
  for (std::size_t i = 0; i < np; ++i) {
    const double phi0 = phi[i].interpolate(p0);
    for (std::size_t k = 0; k < cfg.n_paths; ++k) {
      buf[k] = eval_pwl(spec.players[i].u, terminal[k]);
      pred[k] = phi0 - phi[i].interpolate(before[k]);
      stated[k] = terminal[k] < 1.0 ? pred[k] : 0.0;
    }
    rep.payoff.push_back(mean_se(buf));
    rep.cost.push_back(mean_se(cost[i]));
    rep.predicted_cost.push_back(mean_se(pred));
    rep.stated_cost.push_back(mean_se(stated));
  }
  return rep;
}

double no_news_logit_slope(double lambda, double p0, double dt, double horizon) {
  if (!(lambda > 0.0) || !(dt > 0.0) || !(horizon > dt)) throw std::invalid_argument("bad drift parameters");
  double p = p0, t = 0.0;
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0, n = 0.0;
  while (t <= horizon) {
    double y = std::log(p / (1.0 - p));
    st += t, sy += y, stt += t * t, sty += t * y, n += 1.0;
    p -= lambda * p * (1.0 - p) * dt;
    t += dt;
  }
  return (n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace cstop
