#include "doctest.h"

#include <cmath>
#include <random>

#include "cstop/applications.hpp"
#include "oracles.hpp"

using namespace cstop;

namespace {

WarSpec war(double c1, double c2, std::size_t n = 256) {
  WarSpec s;
  s.c1 = c1;
  s.c2 = c2;
  s.n = n;
  return s;
}

PoissonGameSpec poisson_single(const PiecewiseLinearSpec& u, double c, double lambda = 1.0, double prior = 0.5) {
  PoissonGameSpec s;
  s.lambda = lambda;
  s.prior = prior;
  s.players = {{u, CostSpec::constant(c)}};
  s.rule = unilateral_rule(1);
  s.grid.n = 512;
  return s;
}

double logit(double p) { return std::log(p / (1 - p)); }

}  // namespace

TEST_SUITE("applications") {
  TEST_CASE("war: zero cost pushes the loser's bound to the grid edge") {
    auto w = prepare_war(war(0.0, 0.1));
    for (std::size_t j = w.half + 1; j < w.grid->size(); j += 17) CHECK(war_best_response_index(w, 1, j) == 0);
  }

  TEST_CASE("war: a prohibitive cost means quitting at one half") {
    auto w = prepare_war(war(1e6, 0.1));
    const double h = w.grid->h;
    for (std::size_t j = w.half + 1; j < w.grid->size(); j += 17)
      CHECK(w.grid->points[war_best_response_index(w, 1, j)] >= 0.5 - h);
  }

  TEST_CASE("war: responses are strategic substitutes") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> cost(0.01, 1.0);
    for (int t = 0; t < 5; ++t) {
      auto w = prepare_war(war(cost(rng), cost(rng)));
      std::size_t last = 0;
      for (std::size_t j = w.half + 1; j < w.grid->size(); ++j) {
        auto b = war_best_response_index(w, 1, j);
        CHECK(b >= last);
        last = b;
      }
      last = 0;
      for (std::size_t k = 0; k <= w.half; ++k) {
        auto B = war_best_response_index(w, 2, k);
        CHECK(B >= last);
        last = B;
      }
    }
    auto w = prepare_war(war(0.1, 0.1));
    CHECK_THROWS(war_best_response_index(w, 1, w.half));
    CHECK_THROWS(war_best_response_index(w, 2, w.half + 1));
    CHECK_THROWS(war_best_response_index(w, 3, 0));
    CHECK_THROWS(war_solve(prepare_war(war(0.0, 0.1))));
  }

  TEST_CASE("war: symmetric costs give a symmetric, unique, certified solution") {
    auto w = prepare_war(war(0.1, 0.1));
    auto sol = war_solve(w, true);
    CHECK(sol.converged);
    CHECK(sol.residual_g == 0.0);
    CHECK(sol.residual_G == 0.0);
    CHECK(sol.fixed_points_on_scan == 1);
    CHECK(std::abs(sol.G - (1.0 - sol.g)) <= w.grid->h * 1.01);
    CHECK(war_certify(w, sol).pass);
    auto serial = war_solve(w, true, Exec::serial);
    CHECK(serial.g_index == sol.g_index);
    CHECK(serial.fixed_points_on_scan == 1);
  }

  TEST_CASE("war: a cheaper party 1 lowers both bounds") {
    double g_last = 1.0, G_last = 1.0;
    for (double c1 : {0.4, 0.2, 0.1, 0.05, 0.02}) {
      auto sol = war_solve(prepare_war(war(c1, 0.1)));
      CHECK(sol.g <= g_last);
      CHECK(sol.G <= G_last);
      g_last = sol.g;
      G_last = sol.G;
    }
  }

  TEST_CASE("war: huge costs resolve immediately") {
    auto w = prepare_war(war(1e6, 1e6));
    auto sol = war_solve(w);
    CHECK(sol.g >= 0.5 - w.grid->h);
    CHECK(sol.g <= 0.5);
    CHECK(sol.G_index == w.half + 1);
  }

  TEST_CASE("war: uniqueness on random cost pairs") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> cost(0.02, 0.5);
    for (int t = 0; t < 4; ++t) {
      auto sol = war_solve(prepare_war(war(cost(rng), cost(rng))), true);
      CHECK(sol.converged);
      CHECK(sol.fixed_points_on_scan == 1);
    }
    CHECK_THROWS(war_solve(prepare_war(war(0.1, 0.1, 512)), true));
  }

  TEST_CASE("poisson transform") {
    auto g = build_grid(4096, 1e-4, {0.5, 0.9});
    auto zero = poisson_phi(CostSpec::constant(0.0), 1.0, g, 0.5);
    for (double v : zero.values) CHECK(v == 0.0);
    auto phi = poisson_phi(CostSpec::constant(0.1), 1.0, g, 0.5);
    CHECK(phi[g->index_of(0.5)] == 0.0);
    CHECK(std::abs(phi[g->index_of(0.9)] - 0.1 * std::log(9.0)) <= 1e-6);
    auto fast = poisson_phi(CostSpec::constant(0.1), 2.0, g, 0.5);
    for (std::size_t k = 0; k < g->size(); k += 101) CHECK(fast[k] == doctest::Approx(0.5 * phi[k]).epsilon(1e-12));
    // closed form up to a constant on the interior
    double worst = 0.0;
    for (std::size_t k = 0; k < g->size(); ++k) {
      double p = g->points[k];
      if (p < 0.01 || p > 0.99) continue;
      worst = std::max(worst, std::abs(phi[k] - 0.1 * logit(p)));
    }
    CHECK(worst <= 1e-5);
    CHECK_THROWS(poisson_phi(CostSpec::constant(0.1), 0.0, g, 0.5));
    CHECK_THROWS(poisson_phi(CostSpec::constant(-0.1), 1.0, g, 0.5));
  }

  TEST_CASE("poisson: cheap waiting learns to the edge, expensive waiting stops") {
    auto u = PiecewiseLinearSpec::continuous({0, 0.6, 1}, {0, 0, 1});
    auto cheap = poisson_solve(poisson_single(u, 1e-9));
    CHECK(cheap.selected == 0);
    CHECK(cheap.label == "reformulation-consistent");
    auto dear = poisson_solve(poisson_single(u, 100.0));
    CHECK(dear.selected == dear.prior_index);
    CHECK(dear.p_low == 0.5);
  }

  TEST_CASE("poisson: single player matches a direct scan of the objective") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> cost(0.01, 0.2);
    for (int t = 0; t < 10; ++t) {
      auto u = oracle::random_pwl(rng, 4, 0.0, 1.0);
      const double c = cost(rng);
      auto spec = poisson_single(u, c, 1.5, 0.6);
      auto sol = poisson_solve(spec);
      const auto& x = sol.grid->points;
      const double p0 = x[sol.prior_index];
      // closed-form transform instead of the library's trapezoid
      double best = -1e300;
      std::size_t arg = 0;
      std::vector<double> J(sol.prior_index + 1);
      for (std::size_t k = 0; k <= sol.prior_index; ++k) {
        double q = x[k], w1 = (p0 - q) / (1 - q);
        J[k] = w1 * eval_pwl(u, 1.0) + (1 - w1) * (eval_pwl(u, q) - c / 1.5 * (logit(p0) - logit(q)));
        if (J[k] > best + 1e-12) {
          best = J[k];
          arg = k;
        }
      }
      CHECK(J[sol.selected] >= best - 1e-6);
      CHECK(std::abs(static_cast<double>(sol.selected) - static_cast<double>(arg)) <= 2.0);
    }
  }

  TEST_CASE("poisson: two players and rule scope") {
    auto u1 = PiecewiseLinearSpec::continuous({0, 0.6, 1}, {0, 0, 1});
    auto u2 = PiecewiseLinearSpec::continuous({0, 0.3, 1}, {0, 0, 1});
    PoissonGameSpec s;
    s.prior = 0.5;
    s.players = {{u1, CostSpec::constant(0.05)}, {u2, CostSpec::constant(0.05)}};
    s.grid.n = 256;
    s.rule = unilateral_rule(2);
    auto uni = poisson_solve(s);
    s.rule = unanimity_rule(2);
    auto una = poisson_solve(s);
    CHECK(uni.unilateral);
    CHECK_FALSE(una.unilateral);
    // unanimity lets the keener player hold the group in longer
    CHECK(una.p_low <= uni.p_low);
    for (auto k : uni.equilibria) {
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t q = k; q <= uni.prior_index; ++q) CHECK(uni.objective[i][k] >= uni.objective[i][q] - 1e-9);
    }
    s.players.push_back(s.players[0]);
    s.rule = quota_rule(2, 3);
    CHECK_THROWS(poisson_solve(s));
  }

  TEST_CASE("competition harness") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 6; ++t) {
      GameSpec g;
      g.prior = 0.5;
      g.grid.n = 48;
      g.players = {{oracle::random_pwl(rng, 3), CostSpec::constant(0.05)},
                   {oracle::random_pwl(rng, 3), CostSpec::constant(0.05)}};
      g.rule = unanimity_rule(2);
      auto rep = competition_harness(g, {oracle::random_pwl(rng, 3), CostSpec::constant(0.05)});
      CHECK_MESSAGE(rep.ok(), rep.lines.back());
    }
    GameSpec bad;
    bad.players = {{PiecewiseLinearSpec::linear(0, 1), CostSpec::constant(0.1)}};
    bad.rule = unilateral_rule(1);
    bad.rule.minimal = {};
    CHECK_THROWS(competition_harness(bad, bad.players[0]));
  }
}
