#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "metricpc/exactarith.hpp"
#include "metricpc/paircorr.hpp"
#include "metricpc/sequence.hpp"

namespace metricpc {

// Unordered index pairs (i <= j) the energy counters may hold in memory at once.
inline constexpr std::uint64_t kDefaultPairBudget = 1ULL << 26;

// E(A) = sum over v of (#ordered (i, j) with a_i + a_j = v)^2. Sums are
// grouped by a double modular fingerprint and every group is confirmed with
// exact big-integer sums, so the count is exact. Throws ConfigError on
// duplicates, BudgetError when N(N+1)/2 exceeds pair_budget.
Natural additive_energy(const std::vector<Natural>& a,
                        std::uint64_t pair_budget = kDefaultPairBudget);

// The same quantity via signed differences: N^2 + 2 * sum_{d > 0} r(d)^2.
Natural additive_energy_differences(const std::vector<Natural>& a,
                                    std::uint64_t pair_budget = kDefaultPairBudget);

// Direct count of quadruples with a + b = c + d; small inputs only.
Natural additive_energy_quadruples(const std::vector<Natural>& a);

enum class RepFilter { All, GG, AG, AAdiff, AAsame };
const char* filter_name(RepFilter f);

struct RepCounts {
  RepFilter filter = RepFilter::All;
  // (d, r(d)) for d > 0, sorted by d.
  std::vector<std::pair<Natural, std::uint64_t>> counts;

  std::uint64_t at(const Natural& d) const;
  std::uint64_t max_count() const;
  std::uint64_t total() const;
};

// r_{X-Y}(d) = #{(x, y) : x - y = d} for d > 0.
RepCounts representation_counts(const std::vector<Natural>& x, const std::vector<Natural>& y);

// Positive differences a_j - a_i (i < j < N) over the index pairs of one
// provenance class.
RepCounts representation_counts(const IntegerSequence& seq, std::size_t n, RepFilter filter,
                                std::uint64_t pair_budget = kDefaultPairBudget);

}  // namespace metricpc
