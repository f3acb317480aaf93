#include "metricpc/diophantine.hpp"

#include <algorithm>
#include <cmath>

#include "metricpc/errors.hpp"

namespace metricpc {

CFExpansion cf_expand(const Rational& alpha, std::size_t max_terms) {
  if (sgn(alpha) < 0 || alpha >= 1) throw ConfigError("alpha must lie in [0, 1)");
  CFExpansion cf;
  Natural num = alpha.get_num(), den = alpha.get_den();
  Natural p_prev = 1, q_prev = 0, p = 0, q = 1;
  while (sgn(num) != 0 && cf.partial_quotients.size() < max_terms) {
    Natural a, r;
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
    den = num;
    num = r;
    Natural p_next = a * p + p_prev, q_next = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    cf.partial_quotients.push_back(std::move(a));
    cf.convergents.push_back({p, q});
  }
  cf.complete = sgn(num) == 0;
  return cf;
}

CFExpansion cf_expand(const Alpha& alpha, std::size_t max_terms) {
  return cf_expand(alpha.value(), max_terms);
}

const char* outcome_name(LegendreOutcome o) {
  switch (o) {
    case LegendreOutcome::IsConvergent: return "IsConvergent";
    case LegendreOutcome::NotApplicable: return "NotApplicable";
    case LegendreOutcome::Violation: return "Violation";
  }
  return "?";
}

LegendreOutcome legendre_check(const CFExpansion& cf, const Rational& alpha, const Natural& a,
                               const Natural& b) {
  if (sgn(b) <= 0) throw ConfigError("legendre_check needs b >= 1");
  Rational ab(a, b);
  ab.canonicalize();
  const Natural& p = ab.get_num();
  const Natural& q = ab.get_den();
  // The hypothesis is strongest, and the statement meant, for a/b in lowest terms.
  if (abs(alpha - ab) >= Rational(Natural(1), 2 * q * q)) return LegendreOutcome::NotApplicable;
  if (sgn(p) == 0 && q == 1) return LegendreOutcome::IsConvergent;
  for (const auto& c : cf.convergents) {
    if (c.p == p && c.q == q) return LegendreOutcome::IsConvergent;
  }
  return LegendreOutcome::Violation;
}

LegendreOutcome legendre_check(const Rational& alpha, const Natural& a, const Natural& b) {
  return legendre_check(cf_expand(alpha), alpha, a, b);
}

BorelBernsteinScan borel_bernstein_scan(
    const CFExpansion& cf, const std::function<bool(std::size_t, const Natural&)>& exceeds) {
  if (cf.partial_quotients.empty()) throw ConfigError("empty continued fraction");
  BorelBernsteinScan out;
  for (std::size_t n = 1; n <= cf.partial_quotients.size(); ++n) {
    if (exceeds(n, cf.partial_quotients[n - 1])) out.violations.push_back(n);
  }
  return out;
}

BorelBernsteinScan borel_bernstein_scan(const CFExpansion& cf, const Rational& exponent) {
  if (sgn(exponent) < 0 || !exponent.get_num().fits_ulong_p() || !exponent.get_den().fits_ulong_p()) {
    throw ConfigError("unsupported bound exponent " + to_string(exponent));
  }
  const unsigned long e_num = exponent.get_num().get_ui(), e_den = exponent.get_den().get_ui();
  return borel_bernstein_scan(cf, [=](std::size_t n, const Natural& a) {
    // a > n^(e_num / e_den)  <=>  a^e_den > n^e_num
    Natural lhs, rhs;
    mpz_pow_ui(lhs.get_mpz_t(), a.get_mpz_t(), e_den);
    mpz_ui_pow_ui(rhs.get_mpz_t(), n, e_num);
    return lhs > rhs;
  });
}

Natural mj_bound(int j, const Rational& epsilon) {
  Rational e = Rational(1, 4) + epsilon / 3;
  e.canonicalize();
  return floor_pow2_over_power(j, e);
}

namespace {

struct MjSetup {
  Natural den, y, thr;  // y = (m * num) mod den, thr = floor(s den / 2^j)
  bool covers_all;      // s / 2^j >= 1/2
};

MjSetup mj_setup(const Alpha& alpha, int j, const Rational& s, std::uint64_t m) {
  if (j < 1) throw ConfigError("j must be at least 1");
  if (sgn(s) < 0) throw ConfigError("s must be non-negative");
  if (m == 0) throw ConfigError("modulus must be positive");
  MjSetup st;
  st.den = alpha.denominator();
  st.y = alpha.residue(Natural(static_cast<unsigned long>(m)));
  Natural scaled = s.get_num() * st.den;
  Natural div = s.get_den();
  mpz_mul_2exp(div.get_mpz_t(), div.get_mpz_t(), static_cast<mp_bitcnt_t>(j));
  mpz_fdiv_q(st.thr.get_mpz_t(), scaled.get_mpz_t(), div.get_mpz_t());
  st.covers_all = 2 * s.get_num() >= div;
  return st;
}

MjSet mj_base(int j, const Rational& s, std::uint64_t m, const Rational& epsilon) {
  MjSet out;
  out.j = j;
  out.s = s;
  out.modulus = m;
  out.Q = mj_bound(j, epsilon);
  return out;
}

void finish(MjSet& out) {
  // #M > 10 j^(1/4)  <=>  #M^4 > 10^4 j
  Natural c(static_cast<unsigned long>(out.members.size()));
  out.large = c * c * c * c > Natural(10000) * out.j;
}

void all_q(MjSet& out) {
  if (out.Q > kMjMaxMembers) throw BudgetError("M_j would list " + out.Q.get_str() + " members");
  const auto q = out.Q.get_ui();
  out.members.reserve(q);
  for (unsigned long k = 1; k <= q; ++k) out.members.emplace_back(k);
  out.route = MjSet::Route::AllQ;
}

}  // namespace

MjSet compute_Mj_bruteforce(const Alpha& alpha, int j, const Rational& s, std::uint64_t m,
                            const Rational& epsilon) {
  if (j > kMjBruteforceMaxJ) {
    throw BudgetError("brute-force M_j is limited to j <= " + std::to_string(kMjBruteforceMaxJ));
  }
  const auto st = mj_setup(alpha, j, s, m);
  MjSet out = mj_base(j, s, m, epsilon);
  out.route = MjSet::Route::Bruteforce;
  const std::uint64_t Q = out.Q.get_ui();

  // Fixed-width limb arithmetic: x <- x + y mod den, test x <= thr or x >= den - thr.
  const auto n = static_cast<std::size_t>(mpz_size(st.den.get_mpz_t()));
  auto limbs = [n](const Natural& v) {
    std::vector<mp_limb_t> out(n, 0);
    for (std::size_t k = 0; k < std::min(n, static_cast<std::size_t>(mpz_size(v.get_mpz_t()))); ++k) {
      out[k] = mpz_getlimbn(v.get_mpz_t(), static_cast<mp_size_t>(k));
    }
    return out;
  };
  const Natural hi_v = st.thr >= st.den ? Natural(0) : Natural(st.den - st.thr);
  const auto den = limbs(st.den), y = limbs(st.y), lo = limbs(std::min(st.thr, Natural(st.den - 1)));
  const auto hi = limbs(hi_v);
  const bool hi_active = st.thr < st.den && sgn(hi_v) > 0;
  std::vector<mp_limb_t> x(n, 0);
  const auto sn = static_cast<mp_size_t>(n);
  for (std::uint64_t q = 1; q <= Q; ++q) {
    const mp_limb_t carry = mpn_add_n(x.data(), x.data(), y.data(), sn);
    if (carry != 0 || mpn_cmp(x.data(), den.data(), sn) >= 0) mpn_sub_n(x.data(), x.data(), den.data(), sn);
    if (mpn_cmp(x.data(), lo.data(), sn) <= 0 || (hi_active && mpn_cmp(x.data(), hi.data(), sn) >= 0)) {
      if (out.members.size() >= kMjMaxMembers) throw BudgetError("M_j member count over budget");
      out.members.emplace_back(static_cast<unsigned long>(q));
    }
  }
  finish(out);
  return out;
}

namespace {

std::optional<Natural> go(const Natural& a_in, const Natural& m, const Natural& l, const Natural& r) {
  if (sgn(l) == 0) return Natural(0);
  Natural a = a_in % m;
  if (sgn(a) == 0) return std::nullopt;
  Natural k;
  mpz_cdiv_q(k.get_mpz_t(), l.get_mpz_t(), a.get_mpz_t());
  if (a * k <= r) return k;
  // No multiple of a lies in [l, r]: solve for the wrap count y instead,
  // l <= a x - m y <= r  <=>  (m y) mod a in [(-r) mod a, (-l) mod a].
  Natural rl = (a - r % a) % a, ll = (a - l % a) % a;
  auto y = go(m, a, rl, ll);
  if (!y) return std::nullopt;
  Natural x = l + m * *y;
  mpz_cdiv_q(x.get_mpz_t(), x.get_mpz_t(), a.get_mpz_t());
  return x;
}

// Smallest x >= 0 with (a x) mod m in the cyclic interval [lo, hi].
std::optional<Natural> first_hit_cyclic(const Natural& a, const Natural& m, const Natural& lo,
                                        const Natural& hi) {
  if (lo <= hi) return first_hit(a, m, lo, hi);
  auto x1 = first_hit(a, m, lo, m - 1);
  auto x2 = first_hit(a, m, 0, hi);
  if (!x1) return x2;
  if (!x2) return x1;
  return std::min(*x1, *x2);
}

}  // namespace

std::optional<Natural> first_hit(const Natural& a, const Natural& m, const Natural& l,
                                 const Natural& r) {
  if (sgn(m) <= 0 || sgn(l) < 0 || l > r || r >= m) throw ConfigError("first_hit needs 0 <= l <= r < m");
  return go(a, m, l, r);
}

MjSet compute_Mj_cf(const Alpha& alpha, int j, const Rational& s, std::uint64_t m,
                    const Rational& epsilon) {
  const auto st = mj_setup(alpha, j, s, m);
  MjSet out = mj_base(j, s, m, epsilon);
  if (st.covers_all) {
    all_q(out);
    finish(out);
    return out;
  }
  const Natural& den = st.den;
  const Natural two_pow_j = pow2(static_cast<std::uint64_t>(j));
  // Legendre regime: ||q beta|| <= s/2^j < 1/(2Q) <= 1/(2q) makes q a multiple
  // of a convergent denominator of beta = {m alpha}.
  if (2 * out.Q * s.get_num() < s.get_den() * two_pow_j) {
    out.route = MjSet::Route::Convergents;
    Rational beta(st.y, den);
    beta.canonicalize();
    const auto cf = cf_expand(beta);
    std::vector<Natural> qs{Natural(1)};
    for (const auto& c : cf.convergents) qs.push_back(c.q);
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    std::vector<Natural> members;
    for (const auto& q : qs) {
      if (q > out.Q) break;
      Natural r = q * st.y % den;
      Natural e = std::min(r, Natural(den - r));
      Natural gmax = out.Q / q;
      if (sgn(e) > 0) gmax = std::min(gmax, Natural(st.thr / e));
      if (sgn(gmax) == 0) continue;
      if (gmax + members.size() > kMjMaxMembers) throw BudgetError("M_j member count over budget");
      out.generators.push_back(q);
      for (unsigned long g = 1; g <= gmax.get_ui(); ++g) members.push_back(q * g);
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    out.members = std::move(members);
    finish(out);
    return out;
  }

  // Wide window: walk the hits of (q y) mod den in [den - thr, thr] one by one.
  out.route = MjSet::Route::FirstHit;
  Natural x0 = 1;
  while (x0 <= out.Q) {
    Natural b = st.y * x0 % den;
    Natural lo = ((den - st.thr) - b) % den;
    if (sgn(lo) < 0) lo += den;
    Natural hi = (st.thr - b) % den;
    if (sgn(hi) < 0) hi += den;
    auto dx = first_hit_cyclic(st.y, den, lo, hi);
    if (!dx) break;
    Natural q = x0 + *dx;
    if (q > out.Q) break;
    if (out.members.size() >= kMjMaxMembers) throw BudgetError("M_j member count over budget");
    out.members.push_back(q);
    x0 = q + 1;
  }
  finish(out);
  return out;
}

std::vector<DivisibilityEvent> divisibility_events(const CFExpansion& cf,
                                                   const ModuliSchedule& schedule, int j_lo,
                                                   int j_hi) {
  if (j_lo > j_hi) throw ConfigError("empty j range");
  std::vector<DivisibilityEvent> out;
  for (int j = j_lo; j <= j_hi; ++j) {
    const std::uint64_t m = schedule.modulus(j);
    const Natural upper = pow2(static_cast<std::uint64_t>(j));
    const Natural jj = Natural(j) * j;
    for (std::size_t n = 1; n <= cf.convergents.size(); ++n) {
      const Natural& q = cf.convergents[n - 1].q;
      if (mpz_divisible_ui_p(q.get_mpz_t(), m) == 0) continue;
      Natural k = q / m;
      if (k > upper) break;  // denominators increase
      if (k * jj >= upper) out.push_back({j, n, q, m, k});
    }
  }
  return out;
}

std::vector<DivisibilityEvent> divisibility_events(const Alpha& alpha,
                                                   const ModuliSchedule& schedule, int j_lo,
                                                   int j_hi) {
  return divisibility_events(cf_expand(alpha), schedule, j_lo, j_hi);
}

namespace {

// H(n) - H(m) for 0 <= m <= n.
long double harmonic_diff(long double n, long double m) {
  auto h = [](long double x) {
    if (x == 0) return 0.0L;
    return std::log(x) + 0.5772156649015328606L + 1 / (2 * x) - 1 / (12 * x * x) +
           1 / (120 * x * x * x * x);
  };
  return h(n) - h(m);
}

}  // namespace

double divisibility_measure(const ModuliSchedule& schedule, int j_lo, int j_hi) {
  long double total = 0;
  for (int j = j_lo; j <= j_hi; ++j) {
    const long double m = static_cast<long double>(schedule.modulus(j));
    const long double b = std::ldexp(1.0L, j);
    const long double a = std::ceil(b / (static_cast<long double>(j) * j));
    long double sum = 0;
    if (b - a < 1e6L) {
      for (long double k = a; k <= b; k += 1) sum += 1 / k;
    } else {
      sum = harmonic_diff(b, a - 1);
    }
    total += 2 * sum / m;
  }
  return static_cast<double>(total);
}

}  // namespace metricpc
