#include "metricpc/fractional.hpp"

#include "metricpc/errors.hpp"

namespace metricpc {

namespace {

// Bits [lo, lo + 128) of x.
u128 bit_window(const Natural& x, std::size_t lo) {
  const mpz_srcptr z = x.get_mpz_t();
  const std::size_t li = lo / 64, sh = lo % 64;
  const auto size = static_cast<std::size_t>(mpz_size(z));
  auto limb = [&](std::size_t k) -> std::uint64_t {
    return k < size ? static_cast<std::uint64_t>(mpz_getlimbn(z, static_cast<mp_size_t>(k))) : 0;
  };
  u128 w = (static_cast<u128>(limb(li + 1)) << 64) | limb(li);
  if (sh == 0) return w;
  return (w >> sh) | (static_cast<u128>(limb(li + 2)) << (128 - sh));
}

u128 to_u128(const Natural& x) { return bit_window(x, 0); }

}  // namespace

u128 residue_key(const Natural& x, const Natural& den) {
  Natural q = x;
  mpz_mul_2exp(q.get_mpz_t(), q.get_mpz_t(), 128);
  mpz_fdiv_q(q.get_mpz_t(), q.get_mpz_t(), den.get_mpz_t());
  return to_u128(q);
}

namespace {

class KeyMaker {
 public:
  KeyMaker(const Natural& den, bool dyadic, std::uint32_t p) : den_(den), dyadic_(dyadic), p_(p) {}

  u128 operator()(const Natural& x) const {
    if (!dyadic_) return residue_key(x, den_);
    if (p_ >= 128) return bit_window(x, p_ - 128);
    return to_u128(x) << (128 - p_);
  }

 private:
  const Natural& den_;
  bool dyadic_;
  std::uint32_t p_;
};

}  // namespace

void FractionalParts::set_exactness() {
  exact_ = false;
  if (sgn(den_) > 0 && mpz_popcount(den_.get_mpz_t()) == 1 && bit_length(den_) <= 129) exact_ = true;
}

FractionalParts FractionalParts::from_residues(std::vector<Natural> residues, Natural den) {
  if (sgn(den) <= 0) throw ConfigError("denominator must be positive");
  FractionalParts fp;
  fp.den_ = std::move(den);
  const bool dyadic = mpz_popcount(fp.den_.get_mpz_t()) == 1;
  const auto p = static_cast<std::uint32_t>(bit_length(fp.den_) - 1);
  KeyMaker key(fp.den_, dyadic, p);
  fp.keys_.reserve(residues.size());
  for (const auto& x : residues) {
    if (sgn(x) < 0 || x >= fp.den_) throw ConfigError("residue outside [0, den)");
    fp.keys_.push_back(key(x));
  }
  fp.residues_ = std::move(residues);
  fp.set_exactness();
  return fp;
}

FractionalParts::FractionalParts(const IntegerSequence& seq, const Alpha& alpha, std::size_t n) {
  if (n > seq.size()) {
    throw ConfigError("sequence has " + std::to_string(seq.size()) + " elements, N = " +
                      std::to_string(n) + " requested");
  }
  seq_ = seq.prefix(n);
  alpha_ = alpha;
  alpha.require_precision(seq_->max_bit_length());
  den_ = alpha.denominator();
  set_exactness();
  KeyMaker key(den_, alpha.is_dyadic(), alpha.precision_bits());
  keys_.reserve(n);

  Natural x, z, step, offset;
  auto add_mod = [&](Natural& acc, const Natural& a, const Natural& b) {
    mpz_add(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (acc >= den_) mpz_sub(acc.get_mpz_t(), acc.get_mpz_t(), den_.get_mpz_t());
  };
  auto mul_mod = [&](Natural& acc, std::uint64_t m) {
    mpz_mul_ui(acc.get_mpz_t(), acc.get_mpz_t(), m);
    alpha.reduce(acc);
  };
  auto power = [](std::uint64_t base, std::uint64_t e) {
    Natural r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
  };

  for (const auto& seg : seq_->segments()) {
    using Shape = IntegerSequence::Shape;
    switch (seg.shape) {
      case Shape::Explicit:
        for (const auto& v : seg.values) keys_.push_back(key(alpha.residue(v)));
        break;
      case Shape::PowerRun:
        z = alpha.residue(power(seg.base, seg.first));
        for (std::uint64_t k = 0; k < seg.length; ++k) {
          keys_.push_back(key(z));
          mul_mod(z, seg.base);
        }
        break;
      case Shape::BlockRange: {
        const Block& b = seg.block;
        if (b.kind == BlockKind::Geometric && b.tower) {
          for (std::uint64_t k = 0; k < seg.length; ++k) {
            keys_.push_back(key(alpha.residue(b.value(seg.first + k, seq.bit_budget()))));
          }
          break;
        }
        offset = alpha.residue(pow2(b.offset_exponent.get_ui()));
        if (b.kind == BlockKind::Geometric) {
          z = alpha.residue(power(b.base, seg.first));
          for (std::uint64_t k = 0; k < seg.length; ++k) {
            add_mod(x, offset, z);
            keys_.push_back(key(x));
            mul_mod(z, b.base);
          }
        } else {
          step = alpha.residue(Natural(b.modulus));
          z = alpha.residue(Natural(b.modulus) * Natural(seg.first));
          for (std::uint64_t k = 0; k < seg.length; ++k) {
            add_mod(x, offset, z);
            keys_.push_back(key(x));
            add_mod(z, z, step);
          }
        }
        break;
      }
    }
  }
}

Natural FractionalParts::residue(std::size_t i) const {
  if (i >= size()) throw ConfigError("fractional part index out of range");
  if (residues_) return (*residues_)[i];
  return alpha_->residue(seq_->value(i));
}

FractionalParts FractionalParts::prefix(std::size_t n) const {
  if (n > size()) throw ConfigError("prefix longer than the point set");
  FractionalParts out;
  out.keys_.assign(keys_.begin(), keys_.begin() + static_cast<std::ptrdiff_t>(n));
  out.den_ = den_;
  out.exact_ = exact_;
  if (residues_) out.residues_.emplace(residues_->begin(), residues_->begin() + static_cast<std::ptrdiff_t>(n));
  if (seq_) out.seq_ = seq_->prefix(n);
  out.alpha_ = alpha_;
  return out;
}

}  // namespace metricpc
