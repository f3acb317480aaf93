#pragma once

// Fractional parts {a_i alpha} of a sequence prefix. Each part X_i / den is
// summarized by the 128-bit key floor(X_i * 2^128 / den); keys order and
// space the points to within one unit of 2^-128, and the exact residue X_i is
// recomputed whenever a comparison falls inside that unit.

#include <cstdint>
#include <optional>
#include <vector>

#include "metricpc/exactarith.hpp"
#include "metricpc/sequence.hpp"

namespace metricpc {

using u128 = unsigned __int128;

class FractionalParts {
 public:
  // Applies the precision guard to the largest of the first n elements.
  FractionalParts(const IntegerSequence& seq, const Alpha& alpha, std::size_t n);

  // Points given directly as residues over den (e.g. i.i.d. samples).
  static FractionalParts from_residues(std::vector<Natural> residues, Natural den);

  std::size_t size() const { return keys_.size(); }
  const std::vector<u128>& keys() const { return keys_; }
  const Natural& denominator() const { return den_; }
  // Keys equal X_i * 2^128 / den exactly (dyadic den with at most 128 bits).
  bool keys_exact() const { return exact_; }
  // Exact numerator X_i of {a_i alpha}.
  Natural residue(std::size_t i) const;
  // The first n points.
  FractionalParts prefix(std::size_t n) const;

 private:
  FractionalParts() = default;
  void set_exactness();

  std::vector<u128> keys_;
  Natural den_;
  bool exact_ = false;
  std::optional<std::vector<Natural>> residues_;
  std::optional<IntegerSequence> seq_;
  std::optional<Alpha> alpha_;
};

// floor(x * 2^128 / den) for 0 <= x < den.
u128 residue_key(const Natural& x, const Natural& den);

}  // namespace metricpc
