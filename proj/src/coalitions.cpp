#include "cstop/coalitions.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace cstop {

std::string CoalitionRule::describe() const {
  std::string s;
  for (Coalition c : minimal) {
    if (!s.empty()) s += ' ';
    s += '{';
    bool first = true;
    for (auto i : members(c)) {
      if (!first) s += ',';
      s += std::to_string(i + 1);
      first = false;
    }
    s += '}';
  }
  return s;
}

Coalition coalition_of(const std::vector<std::size_t>& players) {
  Coalition c = 0;
  for (auto i : players) {
    if (i >= 32) throw std::invalid_argument("at most 32 players supported");
    c |= Coalition{1} << i;
  }
  return c;
}

std::vector<std::size_t> members(Coalition c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; c; ++i, c >>= 1)
    if (c & 1u) out.push_back(i);
  return out;
}

CoalitionRule normalize_rule(const std::vector<Coalition>& coalitions, std::size_t n) {
  if (coalitions.empty()) throw std::invalid_argument("rule needs at least one coalition");
  if (n == 0 || n > 32) throw std::invalid_argument("player count must be in 1..32");
  const Coalition all = n == 32 ? ~Coalition{0} : ((Coalition{1} << n) - 1);
  for (Coalition c : coalitions) {
    if (c == 0) throw std::invalid_argument("coalitions must be non-empty");
    if (c & ~all) throw std::invalid_argument("coalition names a player outside 1..n");
  }
  std::vector<Coalition> sorted = coalitions;
  std::sort(sorted.begin(), sorted.end(), [](Coalition a, Coalition b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::vector<Coalition> minimal;
  for (Coalition c : sorted) {
    bool dominated = std::any_of(minimal.begin(), minimal.end(),
                                 [c](Coalition m) { return (m & c) == m; });
    if (!dominated) minimal.push_back(c);
  }
  std::sort(minimal.begin(), minimal.end());
  return {n, std::move(minimal)};
}

CoalitionRule quota_rule(std::size_t q, std::size_t n) {
  if (q < 1 || q > n) throw std::invalid_argument("quota must lie in 1..n");
  if (n > 20) throw std::invalid_argument("quota rules enumerate subsets; n <= 20");
  std::vector<Coalition> cs;
  for (Coalition c = 1; c < (Coalition{1} << n); ++c)
    if (static_cast<std::size_t>(std::popcount(c)) == q) cs.push_back(c);
  return normalize_rule(cs, n);
}

CoalitionRule chair_rule(std::size_t q, std::size_t chair, std::size_t n) {
  if (chair >= n) throw std::invalid_argument("chairperson index out of range");
  auto base = quota_rule(q, n);
  std::vector<Coalition> cs;
  const Coalition bit = Coalition{1} << chair;
  for (Coalition c : base.minimal) cs.push_back(c | bit);
  return normalize_rule(cs, n);
}

CoalitionRule unilateral_rule(std::size_t n) { return quota_rule(1, n); }
CoalitionRule unanimity_rule(std::size_t n) { return quota_rule(n, n); }

bool is_decisive(const CoalitionRule& rule, Coalition stopped) {
  return std::any_of(rule.minimal.begin(), rule.minimal.end(),
                     [stopped](Coalition m) { return (m & stopped) == m; });
}

bool rule_subset(const CoalitionRule& a, const CoalitionRule& b) {
  return std::all_of(a.minimal.begin(), a.minimal.end(),
                     [&b](Coalition m) { return is_decisive(b, m); });
}

namespace {

SamplingRegion union_over(Coalition g, const std::vector<SamplingRegion>& profile, const GridPtr& grid) {
  auto r = SamplingRegion::empty(grid);
  for (auto j : members(g)) r = r.unite(profile.at(j));
  return r;
}

}  // namespace

SamplingRegion collective_region(const CoalitionRule& rule, const std::vector<SamplingRegion>& profile) {
  if (profile.size() != rule.n_players) throw std::invalid_argument("profile size != player count");
  const auto& grid = profile.front().grid();
  auto r = SamplingRegion::full(grid);
  for (Coalition g : rule.minimal) r = r.intersect(union_over(g, profile, grid));
  return r;
}

Envelopes player_envelopes(const CoalitionRule& rule, std::size_t i,
                           const std::vector<SamplingRegion>& profile) {
  if (profile.size() != rule.n_players) throw std::invalid_argument("profile size != player count");
  const GridPtr& grid = profile[i == 0 && profile.size() > 1 ? 1 : 0].grid();
  const Coalition bit = Coalition{1} << i;
  auto C = SamplingRegion::full(grid);
  auto S = SamplingRegion::full(grid);
  for (Coalition g : rule.minimal) {
    auto others = union_over(g & ~bit, profile, grid);
    if (!(g & bit)) C = C.intersect(others);
    S = S.intersect(others);
  }
  return {std::move(C), std::move(S)};
}

PlayerClasses classify_players(const CoalitionRule& rule) {
  PlayerClasses pc;
  Coalition common = ~Coalition{0};
  for (Coalition g : rule.minimal) {
    common &= g;
    if (std::popcount(g) == 1) pc.uni.push_back(static_cast<std::size_t>(std::countr_zero(g)));
  }
  pc.una = members(common);
  std::sort(pc.uni.begin(), pc.uni.end());
  return pc;
}

}  // namespace cstop
