#include "metricpc/exactarith.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <vector>

#include "metricpc/errors.hpp"

namespace metricpc {

std::size_t bit_length(const Natural& n) {
  if (sgn(n) == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

Natural pow2(std::uint64_t exponent) {
  Natural r;
  mpz_setbit(r.get_mpz_t(), exponent);
  return r;
}

Natural parse_natural(std::string_view text) {
  if (text.empty() ||
      !std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ConfigError("not a non-negative integer: '" + std::string(text) + "'");
  }
  return Natural(std::string(text), 10);
}

std::uint64_t to_u64(const Natural& n) {
  if (sgn(n) < 0 || bit_length(n) > 64) {
    throw ConfigError("integer does not fit in 64 bits: " + n.get_str());
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  Natural num, den = 1;
  if (slash == std::string_view::npos) {
    num = parse_natural(text);
  } else {
    num = parse_natural(text.substr(0, slash));
    den = parse_natural(text.substr(slash + 1));
  }
  if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

DyadicAlpha::DyadicAlpha(Natural numerator, std::uint32_t precision_bits)
    : numerator_(std::move(numerator)), precision_bits_(precision_bits) {
  if (precision_bits_ == 0) throw ConfigError("dyadic alpha needs at least one bit");
  if (sgn(numerator_) < 0 || bit_length(numerator_) > precision_bits_) {
    throw ConfigError("dyadic numerator outside [0, 2^" + std::to_string(precision_bits_) + ")");
  }
}

Rational DyadicAlpha::value() const {
  Rational q(numerator_, pow2(precision_bits_));
  q.canonicalize();
  return q;
}

namespace {

Rational checked_ratio(Natural num, Natural den) {
  if (den == 0) throw ConfigError("zero denominator");
  return Rational(std::move(num), std::move(den));
}

}  // namespace

RationalAlpha::RationalAlpha(Natural numerator, Natural denominator)
    : RationalAlpha(checked_ratio(std::move(numerator), std::move(denominator))) {}

RationalAlpha::RationalAlpha(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  if (sgn(q) < 0 || q >= 1) throw ConfigError("alpha must lie in [0, 1): " + to_string(q));
  numerator_ = q.get_num();
  denominator_ = q.get_den();
}

Alpha::Alpha(const DyadicAlpha& alpha)
    : numerator_(alpha.numerator()),
      denominator_(pow2(alpha.precision_bits())),
      dyadic_(true),
      precision_bits_(alpha.precision_bits()) {}

Alpha::Alpha(const RationalAlpha& alpha)
    : numerator_(alpha.numerator()), denominator_(alpha.denominator()), dyadic_(false) {}

void Alpha::reduce(Natural& x) const {
  if (dyadic_) {
    mpz_fdiv_r_2exp(x.get_mpz_t(), x.get_mpz_t(), precision_bits_);
  } else {
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), denominator_.get_mpz_t());
  }
}

Natural Alpha::residue(const Natural& a) const {
  Natural x = a * numerator_;
  reduce(x);
  return x;
}

void Alpha::require_precision(std::size_t max_bits) const {
  if (!dyadic_) return;
  if (precision_bits_ < kGuardBits || max_bits > precision_bits_ - kGuardBits) {
    throw PrecisionError("precision guard: integers of " + std::to_string(max_bits) +
                         " bits need alpha precision >= " + std::to_string(max_bits + kGuardBits) +
                         " bits, have " + std::to_string(precision_bits_));
  }
}

std::string Alpha::to_string() const {
  if (dyadic_) {
    return "0x" + numerator_.get_str(16) + "/2^" + std::to_string(precision_bits_);
  }
  return numerator_.get_str() + "/" + denominator_.get_str();
}

DyadicAlpha frac_mul(const Natural& a, const DyadicAlpha& alpha) {
  Natural x = a * alpha.numerator();
  mpz_fdiv_r_2exp(x.get_mpz_t(), x.get_mpz_t(), alpha.precision_bits());
  return DyadicAlpha(std::move(x), alpha.precision_bits());
}

RationalAlpha frac_mul(const Natural& a, const RationalAlpha& alpha) {
  Natural x = a * alpha.numerator();
  mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), alpha.denominator().get_mpz_t());
  return RationalAlpha(std::move(x), alpha.denominator());
}

namespace {

UnitDistance nearest(const Rational& x) {
  Rational other = 1 - x;
  return UnitDistance{x <= other ? x : other};
}

}  // namespace

UnitDistance dist_nearest(const DyadicAlpha& x) { return nearest(x.value()); }
UnitDistance dist_nearest(const RationalAlpha& x) { return nearest(x.value()); }
UnitDistance dist_nearest(const Alpha& x) { return nearest(x.value()); }

DyadicAlpha sample_alpha(std::uint64_t seed, std::uint32_t precision_bits) {
  if (precision_bits < 64) {
    throw ConfigError("sample_alpha needs precision >= 64 bits, got " +
                      std::to_string(precision_bits));
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> words((precision_bits + 63) / 64);
  for (auto& w : words) w = rng();
  Natural t;
  mpz_import(t.get_mpz_t(), words.size(), -1, sizeof(std::uint64_t), 0, 0, words.data());
  mpz_fdiv_r_2exp(t.get_mpz_t(), t.get_mpz_t(), precision_bits);
  return DyadicAlpha(std::move(t), precision_bits);
}

Alpha parse_alpha(std::string_view text) {
  if (text.starts_with("0x") || text.starts_with("0X")) {
    auto slash = text.find("/2^");
    if (slash == std::string_view::npos) {
      throw ConfigError("hex alpha must look like 0xHEX/2^P: '" + std::string(text) + "'");
    }
    std::string hex(text.substr(2, slash - 2));
    if (hex.empty() || !std::all_of(hex.begin(), hex.end(),
                                    [](unsigned char c) { return std::isxdigit(c); })) {
      throw ConfigError("bad hex digits in alpha '" + std::string(text) + "'");
    }
    Natural p = parse_natural(text.substr(slash + 3));
    if (p == 0 || bit_length(p) > 31) throw ConfigError("bad precision in '" + std::string(text) + "'");
    return DyadicAlpha(Natural(hex, 16), static_cast<std::uint32_t>(p.get_ui()));
  }
  return RationalAlpha(parse_rational(text));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace metricpc
