#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "metricpc/fractional.hpp"
#include "metricpc/sequence.hpp"

namespace metricpc {

enum class PairClass { GG = 0, AG = 1, AAdiff = 2, AAsame = 3 };
inline constexpr std::array<PairClass, 4> kPairClasses{PairClass::GG, PairClass::AG,
                                                       PairClass::AAdiff, PairClass::AAsame};
const char* class_name(PairClass c);

struct PairCorrResult {
  std::size_t N = 0;
  std::vector<Rational> s_grid;
  std::vector<Rational> R;  // aligned with s_grid
  // classes[c][k]: contribution of class c at s_grid[k].
  std::optional<std::array<std::vector<Rational>, 4>> classes;
};

// R(s, N) = #{ordered (i, j), i != j : ||x_i - x_j|| <= s/N} / N, exact.
PairCorrResult pair_correlation(const FractionalParts& parts, const std::vector<Rational>& s_grid);
PairCorrResult pair_correlation(const IntegerSequence& seq, const Alpha& alpha,
                                const std::vector<Rational>& s_grid, std::size_t N);

// Unordered pairs within s/N, counted from the keys (exact).
std::uint64_t count_close_pairs(const FractionalParts& parts, const Rational& s);

// Direct O(N^2) double loop over exact residues; N <= 4096.
inline constexpr std::size_t kBruteforceMaxN = 4096;
Rational pair_correlation_bruteforce(const IntegerSequence& seq, const Alpha& alpha,
                                     const Rational& s, std::size_t N);
Rational pair_correlation_bruteforce(const std::vector<Natural>& residues, const Natural& den,
                                     const Rational& s);

// As pair_correlation, plus the contribution of each provenance class. Pairs
// are classed by the blocks their two elements come from.
PairCorrResult decompose_paircorr(const IntegerSequence& seq, const Alpha& alpha,
                                  const std::vector<Rational>& s_grid, std::size_t N);
PairCorrResult decompose_paircorr(const FractionalParts& parts, const IntegerSequence& seq,
                                  const std::vector<Rational>& s_grid);

// Header N,s_num,s_den,R,R_GG,R_AG,R_AAdiff,R_AAsame; class columns empty when absent.
void write_paircorr_csv_header(std::ostream& out);
void write_paircorr_csv(std::ostream& out, const PairCorrResult& result);

}  // namespace metricpc
