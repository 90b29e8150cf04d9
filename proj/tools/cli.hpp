#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cstop/applications.hpp"
#include "cstop/committee.hpp"
#include "cstop/equilibrium.hpp"
#include "cstop/montecarlo.hpp"

namespace cstop::cli {

// Input problem located by a JSON pointer into the config document.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error((pointer.empty() ? std::string("<document>") : pointer) + ": " + message),
        pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct CompareBlock {
  std::string axis;  // "misalignment" or "rule"
  PiecewiseLinearSpec f, g;
  std::vector<double> b;
  std::vector<CoalitionRule> rules;
};

struct Config {
  int version = 1;
  GameSpec game;                           // process may be Poisson
  std::optional<CommitteeSpec> committee;  // set when payoffs are committee-type
  EnumScope scope = EnumScope::single;
  SimConfig sim;
  std::vector<std::pair<double, double>> sim_region;
  std::vector<std::vector<std::pair<double, double>>> profile;  // per player, optional
  std::vector<double> lambda;                                    // efficiency weights
  std::optional<CompareBlock> compare;
};

Config parse_config(const nlohmann::json& doc);
Config load_config(const std::string& path);

PiecewiseLinearSpec parse_pwl(const nlohmann::json& j, const std::string& ptr);
CoalitionRule parse_rule(const nlohmann::json& j, std::size_t n_players, const std::string& ptr);

// "0.3,0.7" or "0.1,0.2;0.4,0.8"
std::vector<std::pair<double, double>> parse_intervals(const std::string& text);

nlohmann::json region_to_json(const SamplingRegion& region);
SamplingRegion region_from_json(const nlohmann::json& j, const GridPtr& grid);

// Shortest round-trip decimal, independent of the locale.
std::string format_number(double v);

// p, then per player u, phi, net, V, then in_region.
std::string closures_csv(const Game& game, const SamplingRegion& region);
std::string regions_csv(const Game& game, const std::vector<EquilibriumEntry>& entries);
std::string closures_svg(const Game& game, const SamplingRegion& region);
nlohmann::json certificate_json(const Game& game, const EquilibriumCertificate& cert);

// Exit codes: 0 success, 2 computed but failed certification, 1 bad input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cstop::cli
