#pragma once

// Exact integers, exact points of the unit interval, and the fractional-part
// arithmetic everything else is built on. Nothing in here rounds.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace metricpc {

// Arbitrary-precision integer. Used for non-negative quantities throughout
// (sequence values, moduli, denominators); signed only transiently.
using Natural = mpz_class;
using Rational = mpq_class;

// Bits of headroom a dyadic alpha must carry beyond the largest integer it is
// multiplied with.
inline constexpr std::uint32_t kGuardBits = 64;

std::size_t bit_length(const Natural& n);
Natural pow2(std::uint64_t exponent);
Natural parse_natural(std::string_view text);
std::uint64_t to_u64(const Natural& n);

// Accepts "p/q" or "p". Throws ConfigError on malformed input or q == 0.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

// alpha = numerator / 2^precision_bits in [0, 1).
class DyadicAlpha {
 public:
  DyadicAlpha(Natural numerator, std::uint32_t precision_bits);

  const Natural& numerator() const { return numerator_; }
  std::uint32_t precision_bits() const { return precision_bits_; }
  Rational value() const;

  friend bool operator==(const DyadicAlpha& a, const DyadicAlpha& b) {
    return a.precision_bits_ == b.precision_bits_ && a.numerator_ == b.numerator_;
  }

 private:
  Natural numerator_;
  std::uint32_t precision_bits_;
};

// alpha = numerator / denominator in [0, 1), stored reduced.
class RationalAlpha {
 public:
  RationalAlpha(Natural numerator, Natural denominator);
  explicit RationalAlpha(const Rational& value);

  const Natural& numerator() const { return numerator_; }
  const Natural& denominator() const { return denominator_; }
  Rational value() const { return Rational(numerator_, denominator_); }

 private:
  Natural numerator_;
  Natural denominator_;
};

// Either flavour of exact alpha behind one interface. Residues a*alpha mod 1
// are represented by their numerator over denominator().
class Alpha {
 public:
  Alpha(const DyadicAlpha& alpha);     // NOLINT(google-explicit-constructor)
  Alpha(const RationalAlpha& alpha);   // NOLINT(google-explicit-constructor)

  const Natural& numerator() const { return numerator_; }
  const Natural& denominator() const { return denominator_; }
  bool is_dyadic() const { return dyadic_; }
  // Only meaningful when is_dyadic().
  std::uint32_t precision_bits() const { return precision_bits_; }
  Rational value() const { return Rational(numerator_, denominator_); }

  // (a * numerator) mod denominator, i.e. the numerator of {a * alpha}.
  Natural residue(const Natural& a) const;
  // x <- x mod denominator, for x >= 0.
  void reduce(Natural& x) const;

  // Precision guard: throws PrecisionError if this is a dyadic alpha and an
  // integer of max_bits bits exceeds precision_bits - kGuardBits. Rational
  // alphas are never guarded.
  void require_precision(std::size_t max_bits) const;

  // "0xHEX/2^P" for dyadic, "p/q" otherwise.
  std::string to_string() const;

 private:
  Natural numerator_;
  Natural denominator_;
  bool dyadic_;
  std::uint32_t precision_bits_ = 0;
};

// Distance to the nearest integer, min(x, 1 - x), as an exact rational.
struct UnitDistance {
  Rational value;
};

// {a * alpha}, exactly.
DyadicAlpha frac_mul(const Natural& a, const DyadicAlpha& alpha);
RationalAlpha frac_mul(const Natural& a, const RationalAlpha& alpha);

UnitDistance dist_nearest(const DyadicAlpha& x);
UnitDistance dist_nearest(const RationalAlpha& x);
UnitDistance dist_nearest(const Alpha& x);

// Uniform numerator on [0, 2^precision_bits), deterministic per seed
// (std::mt19937_64, whose output sequence is fixed by the standard).
// Requires precision_bits >= 64.
DyadicAlpha sample_alpha(std::uint64_t seed, std::uint32_t precision_bits);

// "0xHEX/2^P" gives a dyadic alpha; decimal "p/q" (or "0") gives a rational one.
Alpha parse_alpha(std::string_view text);

// Stream derivation for per-item seeds: splitmix64 finalizer.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace metricpc
