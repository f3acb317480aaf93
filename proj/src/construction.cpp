#include "metricpc/construction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "metricpc/errors.hpp"
#include "metricpc/primes.hpp"

namespace metricpc {

namespace {

constexpr std::size_t kHuge = std::numeric_limits<std::size_t>::max();

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  try {
    return to_u64(parse_natural(value));
  } catch (const ConfigError&) {
    throw ConfigError("plan key '" + std::string(key) + "' needs a non-negative integer, got '" +
                      std::string(value) + "'");
  }
}

int parse_int(std::string_view key, std::string_view value) {
  auto v = parse_u64(key, value);
  if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    throw ConfigError("plan key '" + std::string(key) + "' out of range");
  }
  return static_cast<int>(v);
}

std::size_t sat_add(std::size_t a, std::size_t b) { return a > kHuge - b ? kHuge : a + b; }

std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kHuge / a) return kHuge;
  return a * b;
}

// floor(x^(1/k)) for x >= 0.
Natural iroot(const Natural& x, unsigned long k) {
  Natural r;
  mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
  return r;
}

Natural npow(const Natural& base, unsigned long e) {
  Natural r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// Smallest power-of-two exponent e with 2^e >= x, x >= 1.
std::size_t ceil_log2(const Natural& x) {
  if (x <= 1) return 0;
  return bit_length(x - 1);
}

}  // namespace

Rational SequencePlan::block_exponent() const {
  if (beta) return *beta;
  Rational b = Rational(1, 4) + epsilon / 3;
  b.canonicalize();
  return b;
}

Rational SequencePlan::moduli_exponent() const { return gamma ? *gamma : Rational(1, 4); }

bool SequencePlan::admissible_exponents() const { return 3 * block_exponent() + moduli_exponent() > 1; }

void SequencePlan::validate() const {
  if (sgn(epsilon) <= 0 || epsilon > Rational(1, 100)) {
    throw ConfigError("epsilon must lie in (0, 1/100], got " + to_string(epsilon));
  }
  if (j0 < 1) throw ConfigError("j0 must be at least 1");
  if (j0 > jmax) {
    throw ConfigError("j0 = " + std::to_string(j0) + " exceeds jmax = " + std::to_string(jmax));
  }
  if (jmax > 62) throw ConfigError("jmax above 62 is not supported (block sizes 2^j)");
  if (geo_base < 2) throw ConfigError("geo_base must be at least 2");
  if (gap_factor < 4) throw ConfigError("gap_factor must be at least 4");
  if (sgn(block_exponent()) < 0) throw ConfigError("beta must be non-negative");
  if (sgn(moduli_exponent()) <= 0) throw ConfigError("gamma must be positive");
  if (bit_budget == 0) throw ConfigError("bit_budget must be positive");
}

bool apply_plan_key(SequencePlan& plan, std::string_view key, std::string_view value) {
  if (key == "epsilon") {
    plan.epsilon = parse_rational(value);
  } else if (key == "j0") {
    plan.j0 = parse_int(key, value);
  } else if (key == "jmax") {
    plan.jmax = parse_int(key, value);
  } else if (key == "beta") {
    plan.beta = parse_rational(value);
  } else if (key == "gamma") {
    plan.gamma = parse_rational(value);
  } else if (key == "geo_base") {
    plan.geo_base = parse_u64(key, value);
  } else if (key == "gap_factor") {
    plan.gap_factor = parse_u64(key, value);
  } else if (key == "bit_budget") {
    plan.bit_budget = parse_u64(key, value);
  } else if (key == "moduli_mode" || key == "moduli") {
    if (value == "faithful") {
      plan.moduli_mode = ModuliMode::Faithful;
    } else if (value == "greedy") {
      plan.moduli_mode = ModuliMode::GreedyWindow;
    } else {
      throw ConfigError("moduli_mode must be faithful or greedy, got '" + std::string(value) + "'");
    }
  } else if (key == "moduli_fallback") {
    if (value == "error") {
      plan.moduli_fallback = WindowFallback::Error;
    } else if (value == "least_recent") {
      plan.moduli_fallback = WindowFallback::LeastRecent;
    } else {
      throw ConfigError("moduli_fallback must be error or least_recent, got '" + std::string(value) +
                        "'");
    }
  } else if (key == "mode" || key == "gap_policy") {
    if (value == "faithful") {
      plan.gap_policy = GapPolicy::Faithful;
    } else if (value == "surrogate") {
      plan.gap_policy = GapPolicy::Surrogate;
    } else {
      throw ConfigError("mode must be faithful or surrogate, got '" + std::string(value) + "'");
    }
  } else {
    return false;
  }
  return true;
}

SequencePlan parse_plan(std::string_view text) {
  SequencePlan plan;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l = line;
    if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    auto eq = l.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("plan line " + std::to_string(lineno) + ": expected key=value");
    }
    auto key = trim(l.substr(0, eq));
    auto value = trim(l.substr(eq + 1));
    if (!apply_plan_key(plan, key, value)) {
      throw ConfigError("plan line " + std::to_string(lineno) + ": unknown key '" +
                        std::string(key) + "'");
    }
  }
  plan.validate();
  return plan;
}

SequencePlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read plan file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_plan(ss.str());
}

std::string format_plan(const SequencePlan& plan) {
  std::ostringstream out;
  out << "epsilon=" << to_string(plan.epsilon) << "\n"
      << "j0=" << plan.j0 << "\n"
      << "jmax=" << plan.jmax << "\n"
      << "beta=" << to_string(plan.block_exponent()) << "\n"
      << "gamma=" << to_string(plan.moduli_exponent()) << "\n"
      << "geo_base=" << plan.geo_base << "\n"
      << "gap_factor=" << plan.gap_factor << "\n"
      << "moduli_mode=" << (plan.moduli_mode == ModuliMode::Faithful ? "faithful" : "greedy") << "\n"
      << "moduli_fallback="
      << (plan.moduli_fallback == WindowFallback::Error ? "error" : "least_recent") << "\n"
      << "mode=" << (plan.gap_policy == GapPolicy::Faithful ? "faithful" : "surrogate") << "\n"
      << "bit_budget=" << plan.bit_budget << "\n";
  return out.str();
}

ModuliSchedule::ModuliSchedule(ModuliMode mode, int j0, std::vector<ModulusEntry> entries)
    : mode_(mode), j0_(j0), entries_(std::move(entries)) {}

const ModulusEntry& ModuliSchedule::at(int j) const {
  if (j < j0_ || j > jmax()) {
    throw ConfigError("level " + std::to_string(j) + " outside the moduli schedule [" +
                      std::to_string(j0_) + ", " + std::to_string(jmax()) + "]");
  }
  return entries_[static_cast<std::size_t>(j - j0_)];
}

int target_window(int j) {
  if (j <= 1) return 0;
  return static_cast<int>(std::ceil(3.0 * std::log(static_cast<double>(j))));
}

namespace {

// Achieved window: distance back to the previous level with the same modulus,
// or the whole scheduled prefix when there is none.
void record_windows(std::vector<ModulusEntry>& entries, int j0) {
  std::unordered_map<std::uint64_t, int> seen;
  for (auto& e : entries) {
    auto it = seen.find(e.modulus);
    e.window = it == seen.end() ? e.level - j0 + 1 : e.level - it->second;
    seen[e.modulus] = e.level;
  }
}

std::vector<ModulusEntry> greedy_moduli(int j0, int jmax, const Rational& gamma,
                                        WindowFallback fallback) {
  const unsigned long a = gamma.get_num().get_ui();
  const unsigned long b = gamma.get_den().get_ui();
  if (!gamma.get_num().fits_ulong_p() || !gamma.get_den().fits_ulong_p() || a > 64 || b > 64) {
    throw ConfigError("gamma " + to_string(gamma) + " has too large a numerator or denominator");
  }
  const Natural eight_b = npow(8, b);
  auto bounds = [&](int j) {
    Natural ja = npow(j, a);
    Natural lo = iroot(ja, b);
    if (npow(lo, b) != ja) lo += 1;
    Natural hi = iroot(eight_b * ja, b);
    return std::pair{lo, hi};
  };

  const auto top = bounds(jmax).second;
  const auto primes = primes_in_range(2, to_u64(top));

  std::unordered_map<std::uint64_t, int> last_use;
  std::vector<ModulusEntry> entries;
  entries.reserve(static_cast<std::size_t>(jmax - j0 + 1));
  for (int j = j0; j <= jmax; ++j) {
    auto [lo, hi] = bounds(j);
    const int w = target_window(j);
    const auto lo64 = to_u64(lo), hi64 = to_u64(hi);
    std::uint64_t chosen = 0;
    for (auto it = std::lower_bound(primes.begin(), primes.end(), lo64);
         it != primes.end() && *it <= hi64; ++it) {
      bool clash = false;
      for (int i = j - 1; i > j - w && i >= j0; --i) {
        if (entries[static_cast<std::size_t>(i - j0)].modulus == *it) {
          clash = true;
          break;
        }
      }
      if (!clash) {
        chosen = *it;
        break;
      }
    }
    if (chosen == 0 && fallback == WindowFallback::LeastRecent) {
      int oldest = j;
      for (auto it = std::lower_bound(primes.begin(), primes.end(), lo64);
           it != primes.end() && *it <= hi64; ++it) {
        auto u = last_use.find(*it);
        const int used = u == last_use.end() ? j0 - 1 : u->second;
        if (used < oldest) {
          oldest = used;
          chosen = *it;
        }
      }
    }
    if (chosen == 0) {
      throw ConfigError("greedy moduli: no admissible prime in [" + lo.get_str() + ", " +
                        hi.get_str() + "] for j = " + std::to_string(j));
    }
    last_use[chosen] = j;
    entries.push_back({j, chosen, 0, 0, true});
  }
  return entries;
}

std::vector<ModulusEntry> faithful_moduli(int j0, int jmax) {
  std::vector<ModulusEntry> entries;
  std::vector<std::uint64_t> pool;
  int pool_d = -1;
  for (int j = j0; j <= jmax; ++j) {
    int d = 0;
    for (std::uint64_t p = 16; p <= static_cast<std::uint64_t>(j); p *= 16) ++d;
    if (d == 0) {
      throw ConfigError("faithful moduli need j >= 16: there is no prime in (1, 2) for j = " +
                        std::to_string(j));
    }
    if (d != pool_d) {
      const std::uint64_t lo = 1ULL << d;
      pool = primes_in_range(lo + 1, 2 * lo - 1);
      const auto want = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
      if (pool.size() > want) pool.resize(want);
      pool_d = d;
    }
    const auto want = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
    const bool full = pool.size() == want;
    const auto r = static_cast<std::uint64_t>(j) % (full ? want : pool.size());
    entries.push_back({j, pool[r], d, 0, full});
  }
  return entries;
}

}  // namespace

ModuliSchedule build_moduli(ModuliMode mode, int j0, int jmax, const Rational& gamma,
                            WindowFallback fallback) {
  if (j0 < 1 || j0 > jmax) {
    throw ConfigError("moduli schedule needs 1 <= j0 <= jmax, got j0 = " + std::to_string(j0) +
                      ", jmax = " + std::to_string(jmax));
  }
  auto entries = mode == ModuliMode::Faithful ? faithful_moduli(j0, jmax)
                                              : greedy_moduli(j0, jmax, gamma, fallback);
  record_windows(entries, j0);
  return ModuliSchedule(mode, j0, std::move(entries));
}

ModuliSchedule build_moduli(const SequencePlan& plan) {
  plan.validate();
  return build_moduli(plan.moduli_mode, plan.j0, plan.jmax, plan.moduli_exponent(),
                      plan.moduli_fallback);
}

Natural floor_pow2_over_power(int j, const Rational& e) {
  if (j < 1 || sgn(e) < 0) throw ConfigError("floor_pow2_over_power needs j >= 1, e >= 0");
  const unsigned long a = e.get_num().get_ui();
  const unsigned long b = e.get_den().get_ui();
  // floor((2^(jb) / j^a)^(1/b)) = floor(2^j / j^(a/b)); the inner floor does not
  // change the outer one.
  Natural x = pow2(static_cast<std::uint64_t>(j) * b) / npow(j, a);
  return iroot(x, b);
}

std::uint64_t arithmetic_block_length(int j, const Rational& beta) {
  return to_u64(floor_pow2_over_power(j, beta)) + 1;
}

std::size_t Block::bits_upper(std::uint64_t h) const {
  std::size_t offset_bits = offset_exponent.fits_ulong_p() ? offset_exponent.get_ui() + 1 : kHuge;
  std::size_t term_bits = 0;
  if (kind == BlockKind::Arithmetic) {
    term_bits = bit_length(Natural(modulus)) + bit_length(Natural(h));
  } else {
    const std::size_t bb = bit_length(Natural(base));
    std::size_t e = h;
    if (tower) {
      Natural ex = npow(level, h);
      e = ex.fits_ulong_p() ? ex.get_ui() : kHuge;
    }
    term_bits = sat_add(sat_mul(e, bb), 1);
  }
  return sat_add(std::max(offset_bits, term_bits), 1);
}

Natural Block::term(std::uint64_t h, std::size_t bit_budget) const {
  if (h >= count) throw ConfigError("block element index out of range");
  if (kind == BlockKind::Arithmetic) return Natural(modulus) * Natural(h);
  unsigned long e = h;
  if (tower) {
    Natural ex = npow(level, h);
    if (!ex.fits_ulong_p()) throw BudgetError("geometric term exponent too large");
    e = ex.get_ui();
  }
  const std::size_t bits = sat_mul(e, bit_length(Natural(base)));
  if (bits > bit_budget) {
    throw BudgetError("geometric term needs about " + std::to_string(bits) + " bits, budget is " +
                      std::to_string(bit_budget));
  }
  return npow(Natural(base), e);
}

Natural Block::value(std::uint64_t h, std::size_t bit_budget) const {
  const std::size_t bits = bits_upper(h);
  if (bits > sat_add(bit_budget, 2)) {
    throw BudgetError("block element (level " + std::to_string(level) + ") needs about " +
                      (bits == kHuge ? std::string("astronomically many")
                                     : std::to_string(bits)) +
                      " bits, budget is " + std::to_string(bit_budget));
  }
  return pow2(offset_exponent.get_ui()) + term(h, bit_budget);
}

namespace {

std::string level_name(BlockKind kind, int j) {
  return std::string(kind == BlockKind::Geometric ? "P_G(" : "P_A(") + std::to_string(j) + ")";
}

std::vector<Block> surrogate_blocks(const SequencePlan& plan, const ModuliSchedule& schedule) {
  std::vector<Block> blocks;
  const Rational beta = plan.block_exponent();
  Natural max_so_far = 1;
  for (int j = plan.j0; j <= plan.jmax; ++j) {
    for (BlockKind kind : {BlockKind::Geometric, BlockKind::Arithmetic}) {
      Block b;
      b.level = j;
      b.kind = kind;
      b.offset_exponent = static_cast<unsigned long>(ceil_log2(max_so_far * plan.gap_factor));
      if (kind == BlockKind::Geometric) {
        b.base = plan.geo_base;
        b.count = 1ULL << j;
      } else {
        b.modulus = schedule.modulus(j);
        b.count = arithmetic_block_length(j, beta);
      }
      const std::size_t bits = b.bits_upper(b.count - 1);
      if (bits > plan.bit_budget + 2) {
        throw BudgetError(level_name(kind, j) + " would need elements of about " +
                          std::to_string(bits) + " bits, over the budget of " +
                          std::to_string(plan.bit_budget) + "; lower jmax or raise bit_budget");
      }
      max_so_far = b.value(b.count - 1, plan.bit_budget + 2);
      blocks.push_back(std::move(b));
    }
  }
  return blocks;
}

// log2 of the bit length of the largest element, for the refusal message.
std::string faithful_estimate(const SequencePlan& plan) {
  long double log2_bits = 0;  // max so far is 1
  std::ostringstream out;
  for (int j = plan.j0; j <= plan.jmax; ++j) {
    const long double tower_bits_log2 =
        static_cast<long double>((1ULL << j) - 1) * std::log2(static_cast<long double>(j)) +
        std::log2(std::log2(3.0L));
    long double g = std::max(std::exp2(log2_bits), tower_bits_log2);
    long double a = std::exp2(g);
    log2_bits = a;
    if (!std::isfinite(static_cast<double>(a)) || a > 1e300L) {
      out << "elements of " << level_name(BlockKind::Arithmetic, j)
          << " would have more than 2^(10^300) bits";
      return out.str();
    }
  }
  out << "largest element would have about 2^" << static_cast<double>(log2_bits) << " bits";
  return out.str();
}

std::vector<Block> faithful_blocks(const SequencePlan& plan, const ModuliSchedule& schedule) {
  if (plan.jmax > 4) {
    throw BudgetError("faithful construction refused for jmax = " + std::to_string(plan.jmax) +
                      " > 4: " + faithful_estimate(plan));
  }
  const Rational beta = plan.block_exponent();
  std::vector<Block> blocks;
  Natural max_prev = 1;  // max P_A(j0 - 1), read as 1
  for (int j = plan.j0; j <= plan.jmax; ++j) {
    for (BlockKind kind : {BlockKind::Geometric, BlockKind::Arithmetic}) {
      if (blocks.size() > 0) {
        const Block& prev = blocks.back();
        try {
          max_prev = prev.value(prev.count - 1, plan.bit_budget);
        } catch (const BudgetError&) {
          throw BudgetError("faithful construction refused: the offset of " + level_name(kind, j) +
                            " is 2^(max " + level_name(prev.kind, prev.level) +
                            "), whose exponent exceeds the bit budget; " + faithful_estimate(plan));
        }
      }
      Block b;
      b.level = j;
      b.kind = kind;
      b.offset_exponent = max_prev;
      if (kind == BlockKind::Geometric) {
        if (j < 2) {
          throw ConfigError("faithful geometric block at j = 1 repeats 3^(1^h) = 3; use j0 >= 2");
        }
        b.base = 3;
        b.tower = true;
        b.count = 1ULL << j;
      } else {
        b.modulus = schedule.modulus(j);
        b.count = arithmetic_block_length(j, beta);
      }
      blocks.push_back(std::move(b));
    }
  }
  return blocks;
}

}  // namespace

std::vector<Block> build_blocks(const SequencePlan& plan, const ModuliSchedule& schedule) {
  plan.validate();
  if (schedule.j0() > plan.j0 || schedule.jmax() < plan.jmax) {
    throw ConfigError("moduli schedule does not cover the plan's levels");
  }
  return plan.gap_policy == GapPolicy::Surrogate ? surrogate_blocks(plan, schedule)
                                                  : faithful_blocks(plan, schedule);
}

std::vector<Block> build_blocks(const SequencePlan& plan) {
  return build_blocks(plan, build_moduli(plan));
}

namespace {

bool within_block_increasing(const Block& b) {
  if (b.count == 0) return false;
  if (b.kind == BlockKind::Arithmetic) return b.modulus >= 1 || b.count == 1;
  if (b.base < 2) return b.count == 1;
  return !b.tower || b.level >= 2 || b.count == 1;
}

// Compares factor * max(prev) against min(next) = 2^E + term(0).
bool gap_holds(const Block& prev, const Block& next, std::uint64_t factor, bool strict,
               std::size_t bit_budget) {
  const std::size_t max_bits = prev.bits_upper(prev.count - 1);
  const std::size_t min_bits = next.bits_upper(0);
  if (max_bits <= bit_budget + 2 && min_bits <= bit_budget + 2) {
    Natural lhs = prev.value(prev.count - 1, bit_budget + 2) * factor;
    Natural rhs = next.value(0, bit_budget + 2);
    return strict ? lhs < rhs : lhs <= rhs;
  }
  // max(prev) * factor < 2^(max_bits + bitlen(factor)) <= 2^E <= min(next).
  const std::size_t need = sat_add(max_bits, bit_length(Natural(factor)));
  return need != kHuge && next.offset_exponent >= static_cast<unsigned long>(need);
}

}  // namespace

bool blocks_ordered(const std::vector<Block>& blocks, std::size_t bit_budget) {
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (!within_block_increasing(blocks[k])) return false;
    if (k + 1 < blocks.size() && !gap_holds(blocks[k], blocks[k + 1], 1, true, bit_budget)) {
      return false;
    }
  }
  return true;
}

bool blocks_separated(const std::vector<Block>& blocks, std::uint64_t factor,
                      std::size_t bit_budget) {
  for (std::size_t k = 0; k + 1 < blocks.size(); ++k) {
    if (!gap_holds(blocks[k], blocks[k + 1], factor, false, bit_budget)) return false;
  }
  return true;
}

}  // namespace metricpc
