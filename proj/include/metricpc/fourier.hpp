#pragma once

// Fourier side of the window indicator I(x) = [||x|| <= s/N]:
// I(x) = sum_n c_n e(n x). These are double-precision diagnostics; every
// truncated sum carries a rigorous bound on the omitted tail.

#include <cstdint>

#include "metricpc/energy.hpp"
#include "metricpc/exactarith.hpp"

namespace metricpc {

struct FourierCoeff {
  std::int64_t n = 0;
  double value = 0;
};

// c_0 = 2s/N, c_n = sin(2 pi n s / N) / (pi n). The phase n s / N is reduced
// exactly before the sine is taken.
FourierCoeff fourier_c(std::int64_t n, const Rational& s, std::uint64_t N);

struct TruncatedSum {
  double value = 0;
  double tail_bound = 0;
};

// C(u, v) = sum over h != 0 of c_{h v/g} c_{h u/g}, g = gcd(u, v), i.e. the
// pairs (n1, n2) with n1 u = n2 v, truncated to |h| <= H. Tail <= 2 g^2 / (u v H).
TruncatedSum fourier_C(const Natural& u, const Natural& v, const Rational& s, std::uint64_t N,
                       std::uint64_t H);

// sum over n != 0 of c_n^2 = 2s/N - (2s/N)^2 (exact value, for s/N <= 1/2).
double parseval_target(const Rational& s, std::uint64_t N);

struct VarianceEstimate {
  enum class Method { FourierTruncated, MonteCarlo, GridIntegration };
  Method method = Method::FourierTruncated;
  std::uint64_t parameter = 0;  // H, number of alphas, or grid size
  double value = 0;
  double error_bound = 0;
  double diagonal = 0;
  double off_diagonal = 0;
  // False when the off-diagonal part was skipped (too many differences).
  bool off_diagonal_computed = true;
  std::uint64_t off_diagonal_H = 0;
};

// Above this many distinct differences the off-diagonal sum is skipped.
inline constexpr std::size_t kOffDiagonalMaxKeys = 10'000;

// (1/N^2) sum_{u,v} r(u) r(v) C_H(u, v): the variance over alpha of
// (1/N) sum_d r(d) I(d alpha), which is R(c)/2 for the class c the counts were
// taken from (so Var R(c) is four times this). The off-diagonal part uses a
// smaller truncation when keys^2 * H would be too costly; its tail is included
// in error_bound either way.
VarianceEstimate variance_fourier(const RepCounts& rep, const Rational& s, std::uint64_t N,
                                  std::uint64_t H);

}  // namespace metricpc
