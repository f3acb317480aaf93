#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "metricpc/construction.hpp"
#include "metricpc/exactarith.hpp"

namespace metricpc {

struct Convergent {
  Natural p, q;
};

// alpha = 1/(a_1 + 1/(a_2 + ...)); convergents p_n/q_n from n = 1, seeded with
// (p_0, q_0) = (0, 1) and (p_-1, q_-1) = (1, 0).
struct CFExpansion {
  std::vector<Natural> partial_quotients;
  std::vector<Convergent> convergents;
  // The expansion reached alpha exactly (as opposed to stopping at max_terms).
  bool complete = false;
};

inline constexpr std::size_t kAllTerms = std::numeric_limits<std::size_t>::max();

// alpha in [0, 1); alpha = 0 gives an empty expansion.
CFExpansion cf_expand(const Rational& alpha, std::size_t max_terms = kAllTerms);
CFExpansion cf_expand(const Alpha& alpha, std::size_t max_terms = kAllTerms);

enum class LegendreOutcome { IsConvergent, NotApplicable, Violation };
const char* outcome_name(LegendreOutcome o);

// If |alpha - a/b| < 1/(2 b^2), a/b (reduced) must be 0/1 or a convergent.
LegendreOutcome legendre_check(const Rational& alpha, const Natural& a, const Natural& b);
LegendreOutcome legendre_check(const CFExpansion& cf, const Rational& alpha, const Natural& a,
                               const Natural& b);

struct BorelBernsteinScan {
  std::vector<std::size_t> violations;  // 1-based n with a_n > b_n
  std::optional<std::size_t> last() const {
    if (violations.empty()) return std::nullopt;
    return violations.back();
  }
};

// exceeds(n, a_n) decides a_n > b_n.
BorelBernsteinScan borel_bernstein_scan(
    const CFExpansion& cf, const std::function<bool(std::size_t, const Natural&)>& exceeds);
// b_n = n^e, compared exactly.
BorelBernsteinScan borel_bernstein_scan(const CFExpansion& cf, const Rational& exponent);

struct MjSet {
  enum class Route { AllQ, Bruteforce, Convergents, FirstHit };
  int j = 0;
  Rational s;
  std::uint64_t modulus = 0;
  Natural Q;
  std::vector<Natural> members;  // increasing
  Route route = Route::Bruteforce;
  // Convergent denominators whose multiples make up the members (Convergents route).
  std::vector<Natural> generators;
  // More members than 10 j^(1/4): typical only for degenerate alpha.
  bool large = false;
};

// Q_j = floor(2^j / j^(1/4 + epsilon/3)).
Natural mj_bound(int j, const Rational& epsilon);

inline constexpr int kMjBruteforceMaxJ = 26;
inline constexpr std::uint64_t kMjMaxMembers = 50'000'000;

// {q <= Q_j : ||m q alpha|| <= s / 2^j} by a direct scan; j <= 26.
MjSet compute_Mj_bruteforce(const Alpha& alpha, int j, const Rational& s, std::uint64_t m,
                            const Rational& epsilon);
// The same set from the continued fraction of {m alpha}: when 2 Q s < 2^j every
// member is a multiple of a convergent denominator; otherwise the members are
// enumerated by a Euclid-style first-hit search. Exact for every j.
MjSet compute_Mj_cf(const Alpha& alpha, int j, const Rational& s, std::uint64_t m,
                    const Rational& epsilon);

// Smallest x >= 0 with l <= (a x) mod m <= r (0 <= l <= r < m), if any.
std::optional<Natural> first_hit(const Natural& a, const Natural& m, const Natural& l,
                                 const Natural& r);

struct DivisibilityEvent {
  int j = 0;
  std::size_t n = 0;  // convergent index (1-based)
  Natural q;
  std::uint64_t modulus = 0;
  Natural k;  // q / m_j
};

// All (j, n) with m_j | q_n and q_n / m_j in [2^j / j^2, 2^j], j in [j_lo, j_hi].
std::vector<DivisibilityEvent> divisibility_events(const CFExpansion& cf,
                                                   const ModuliSchedule& schedule, int j_lo,
                                                   int j_hi);
std::vector<DivisibilityEvent> divisibility_events(const Alpha& alpha,
                                                   const ModuliSchedule& schedule, int j_lo,
                                                   int j_hi);

// sum over j in [j_lo, j_hi] and integers k in [2^j / j^2, 2^j] of 2 / (k m_j).
double divisibility_measure(const ModuliSchedule& schedule, int j_lo, int j_hi);

}  // namespace metricpc
