#include "metricpc/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "metricpc/errors.hpp"

namespace metricpc {

namespace {

using u128 = unsigned __int128;

// M = N * s_den and r = (m * s_num) mod M, so that m s / N = r / M mod 1.
struct Phase {
  std::uint64_t modulus;
  std::uint64_t step;
};

Phase phase_of(const Natural& m, const Rational& s, std::uint64_t N) {
  if (N == 0) throw ConfigError("N must be positive");
  if (sgn(s) < 0) throw ConfigError("s must be non-negative");
  const Natural M = s.get_den() * Natural(static_cast<unsigned long>(N));
  if (bit_length(M) > 62) throw ConfigError("N * den(s) must stay below 2^62");
  Natural r = m * s.get_num();
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), M.get_mpz_t());
  return {M.get_ui(), r.get_ui()};
}

double sin_turns(std::uint64_t num, std::uint64_t den) {
  return std::sin(2 * std::numbers::pi * (static_cast<double>(num) / static_cast<double>(den)));
}

// 2 * sum_{h=1..H} c_{h b} c_{h a}.
double resonance_sum(const Natural& a, const Natural& b, const Rational& s, std::uint64_t N,
                     std::uint64_t H) {
  const Phase pa = phase_of(a, s, N), pb = phase_of(b, s, N);
  const double scale = 1.0 / (std::numbers::pi * std::numbers::pi * a.get_d() * b.get_d());
  double sum = 0;
  std::uint64_t ra = 0, rb = 0;
  for (std::uint64_t h = 1; h <= H; ++h) {
    ra += pa.step;
    if (ra >= pa.modulus) ra -= pa.modulus;
    rb += pb.step;
    if (rb >= pb.modulus) rb -= pb.modulus;
    const double hh = static_cast<double>(h);
    sum += sin_turns(ra, pa.modulus) * sin_turns(rb, pb.modulus) / (hh * hh);
  }
  return 2 * scale * sum;
}

}  // namespace

FourierCoeff fourier_c(std::int64_t n, const Rational& s, std::uint64_t N) {
  FourierCoeff c{n, 0};
  if (n == 0) {
    c.value = 2 * s.get_d() / static_cast<double>(N);
    return c;
  }
  const std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  const Phase p = phase_of(Natural(static_cast<unsigned long>(m)), s, N);
  // sin is odd and so is 1/n: c_{-n} = c_n.
  c.value = sin_turns(p.step, p.modulus) / (std::numbers::pi * static_cast<double>(m));
  return c;
}

TruncatedSum fourier_C(const Natural& u, const Natural& v, const Rational& s, std::uint64_t N,
                       std::uint64_t H) {
  if (sgn(u) <= 0 || sgn(v) <= 0) throw ConfigError("C(u, v) needs u, v >= 1");
  if (H == 0) throw ConfigError("H must be at least 1");
  Natural g;
  mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
  const Natural a = u / g, b = v / g;
  TruncatedSum out;
  out.value = resonance_sum(a, b, s, N, H);
  out.tail_bound = 2.0 / (a.get_d() * b.get_d() * static_cast<double>(H));
  return out;
}

double parseval_target(const Rational& s, std::uint64_t N) {
  const double x = 2 * s.get_d() / static_cast<double>(N);
  return x - x * x;
}

VarianceEstimate variance_fourier(const RepCounts& rep, const Rational& s, std::uint64_t N,
                                  std::uint64_t H) {
  VarianceEstimate est;
  est.method = VarianceEstimate::Method::FourierTruncated;
  est.parameter = H;
  const double n2 = static_cast<double>(N) * static_cast<double>(N);

  // C(u, u) does not depend on u.
  const auto cuu = fourier_C(Natural(1), Natural(1), s, N, H);
  double sum_r2 = 0;
  for (const auto& [d, r] : rep.counts) sum_r2 += static_cast<double>(r) * static_cast<double>(r);
  est.diagonal = sum_r2 * cuu.value / n2;
  double tail = sum_r2 * cuu.tail_bound / n2;

  const std::size_t k = rep.counts.size();
  if (k > kOffDiagonalMaxKeys) {
    est.off_diagonal_computed = false;
  } else if (k > 1) {
    const double pairs = static_cast<double>(k) * static_cast<double>(k - 1) / 2;
    const auto h_off = static_cast<std::uint64_t>(
        std::clamp(4e8 / pairs, 1.0, static_cast<double>(H)));
    est.off_diagonal_H = h_off;
    double off = 0;
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t y = x + 1; y < k; ++y) {
        const auto c = fourier_C(rep.counts[x].first, rep.counts[y].first, s, N, h_off);
        const double w = 2.0 * static_cast<double>(rep.counts[x].second) *
                         static_cast<double>(rep.counts[y].second) / n2;
        off += w * c.value;
        tail += w * c.tail_bound;
      }
    }
    est.off_diagonal = off;
  }
  est.value = est.diagonal + est.off_diagonal;
  est.error_bound = tail;
  return est;
}

}  // namespace metricpc
