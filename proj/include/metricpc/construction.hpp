#pragma once

// The block construction: a schedule of prime moduli, geometric blocks that
// carry most of the elements, and arithmetic blocks that carry the additive
// energy. Blocks are laid out in increasing order, each separated from the
// previous one by a large power-of-two offset.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metricpc/exactarith.hpp"

namespace metricpc {

enum class ModuliMode { Faithful, GreedyWindow };
// What the greedy scan does when every prime in range clashes with the
// target window: fail, or take the least recently used prime and record the
// shorter window actually achieved.
enum class WindowFallback { Error, LeastRecent };
enum class GapPolicy { Faithful, Surrogate };
enum class BlockKind { Geometric, Arithmetic };

struct SequencePlan {
  Rational epsilon{1, 100};
  int j0 = 5;
  int jmax = 12;
  std::optional<Rational> beta;   // arithmetic block length 2^j / j^beta; default 1/4 + epsilon/3
  std::optional<Rational> gamma;  // moduli size j^gamma (greedy mode); default 1/4
  std::uint64_t geo_base = 2;
  GapPolicy gap_policy = GapPolicy::Surrogate;
  std::uint64_t gap_factor = 4;
  ModuliMode moduli_mode = ModuliMode::GreedyWindow;
  WindowFallback moduli_fallback = WindowFallback::LeastRecent;
  std::size_t bit_budget = 1'000'000;

  Rational block_exponent() const;
  Rational moduli_exponent() const;
  // 3 beta + gamma > 1, the parameter range in which the arithmetic blocks
  // are expected to stay invisible to the pair correlations.
  bool admissible_exponents() const;
  // Throws ConfigError.
  void validate() const;
};

// Flat key=value text, '#' comments. Keys: epsilon, j0, jmax, beta, gamma,
// geo_base, gap_factor, moduli_mode (faithful|greedy), moduli_fallback
// (error|least_recent), mode (faithful|surrogate), bit_budget. Unknown keys are rejected.
SequencePlan parse_plan(std::string_view text);
SequencePlan load_plan(const std::filesystem::path& path);
std::string format_plan(const SequencePlan& plan);
// Applies one key=value assignment; shared with the experiment config parser.
// Returns false if the key is not a plan key.
bool apply_plan_key(SequencePlan& plan, std::string_view key, std::string_view value);

struct ModulusEntry {
  int level = 0;
  std::uint64_t modulus = 0;
  // Faithful: d with 16^d <= j < 16^(d+1). Greedy: 0.
  int pool_id = 0;
  // Achieved window: m_j differs from m_i for every scheduled i with
  // j - window < i < j.
  int window = 0;
  // Faithful only: the pool held at least d^2 primes.
  bool full_pool = true;
};

class ModuliSchedule {
 public:
  ModuliSchedule(ModuliMode mode, int j0, std::vector<ModulusEntry> entries);

  ModuliMode mode() const { return mode_; }
  int j0() const { return j0_; }
  int jmax() const { return j0_ + static_cast<int>(entries_.size()) - 1; }
  const std::vector<ModulusEntry>& entries() const { return entries_; }
  const ModulusEntry& at(int j) const;
  std::uint64_t modulus(int j) const { return at(j).modulus; }

 private:
  ModuliMode mode_;
  int j0_;
  std::vector<ModulusEntry> entries_;
};

// ceil(3 ln j); 0 for j = 1.
int target_window(int j);

ModuliSchedule build_moduli(ModuliMode mode, int j0, int jmax,
                            const Rational& gamma = Rational(1, 4),
                            WindowFallback fallback = WindowFallback::Error);
ModuliSchedule build_moduli(const SequencePlan& plan);

// floor(2^j / j^e) for rational e >= 0, computed exactly.
Natural floor_pow2_over_power(int j, const Rational& e);
// floor(2^j / j^beta) + 1: h runs over 0..floor(2^j / j^beta).
std::uint64_t arithmetic_block_length(int j, const Rational& beta);

// One block. Element h is 2^offset_exponent + term(h), where term(h) is
// base^h (surrogate geometric), base^(level^h) (faithful geometric) or
// modulus * h (arithmetic).
struct Block {
  int level = 0;
  BlockKind kind = BlockKind::Geometric;
  Natural offset_exponent;
  std::uint64_t base = 0;
  bool tower = false;
  std::uint64_t modulus = 0;
  std::uint64_t count = 0;

  // Upper bound on the bit length of element h; SIZE_MAX when astronomically large.
  std::size_t bits_upper(std::uint64_t h) const;
  // Throws BudgetError when the element would exceed bit_budget bits.
  Natural value(std::uint64_t h, std::size_t bit_budget) const;
  Natural term(std::uint64_t h, std::size_t bit_budget) const;
};

std::vector<Block> build_blocks(const SequencePlan& plan, const ModuliSchedule& schedule);
std::vector<Block> build_blocks(const SequencePlan& plan);

// Every element of block k is below every element of block k+1 (exact when
// the values fit the budget, via bit lengths otherwise).
bool blocks_ordered(const std::vector<Block>& blocks, std::size_t bit_budget);

// min of block k+1 >= factor * max of block k for all k.
bool blocks_separated(const std::vector<Block>& blocks, std::uint64_t factor,
                      std::size_t bit_budget);

}  // namespace metricpc
