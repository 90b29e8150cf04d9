#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cstop/region.hpp"

namespace cstop {

// Players are 0-based; bit i of a coalition mask is player i.
using Coalition = std::uint32_t;

struct CoalitionRule {
  std::size_t n_players = 0;
  std::vector<Coalition> minimal;  // antichain, sorted

  std::string describe() const;  // 1-based, e.g. "{1,2} {1,3}"
};

Coalition coalition_of(const std::vector<std::size_t>& players);
std::vector<std::size_t> members(Coalition c);

CoalitionRule normalize_rule(const std::vector<Coalition>& coalitions, std::size_t n);
CoalitionRule quota_rule(std::size_t q, std::size_t n);
CoalitionRule chair_rule(std::size_t q, std::size_t chair, std::size_t n);
CoalitionRule unilateral_rule(std::size_t n);
CoalitionRule unanimity_rule(std::size_t n);

bool is_decisive(const CoalitionRule& rule, Coalition stopped);
// Every decisive coalition of rule a is decisive under rule b.
bool rule_subset(const CoalitionRule& a, const CoalitionRule& b);

SamplingRegion collective_region(const CoalitionRule& rule, const std::vector<SamplingRegion>& profile);

struct Envelopes {
  SamplingRegion C;  // collective region if player i never stops
  SamplingRegion S;  // collective region if player i always stops
};

// profile[i] is ignored.
Envelopes player_envelopes(const CoalitionRule& rule, std::size_t i,
                           const std::vector<SamplingRegion>& profile);

struct PlayerClasses {
  std::vector<std::size_t> uni;  // {i} is a minimal coalition
  std::vector<std::size_t> una;  // i belongs to every minimal coalition
};

PlayerClasses classify_players(const CoalitionRule& rule);

}  // namespace cstop
