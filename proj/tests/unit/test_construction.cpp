#include <doctest.h>

#include <cmath>
#include <sstream>

#include "metricpc/construction.hpp"
#include "metricpc/errors.hpp"
#include "metricpc/sequence.hpp"

using namespace metricpc;

TEST_CASE("faithful moduli") {
  const auto s = build_moduli(ModuliMode::Faithful, 16, 301);
  // d = 1: primes in (2, 4) = {3}.
  CHECK(s.modulus(17) == 3);
  CHECK(s.at(17).window == 1);
  CHECK(s.at(17).pool_id == 1);
  CHECK(s.at(17).full_pool);  // d^2 = 1 prime wanted
  CHECK_FALSE(s.at(300).full_pool);
  // d = 2: primes in (4, 8) = {5, 7}; 300 mod 2 = 0.
  CHECK(s.modulus(300) == 5);
  CHECK(s.modulus(301) == 7);
  CHECK(s.at(300).pool_id == 2);
  CHECK(s.at(300).window == 2);
  for (int j = 16; j <= 301; ++j) {
    const double ratio = static_cast<double>(s.modulus(j)) / std::pow(j, 0.25);
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);
  }
  CHECK_THROWS_AS(build_moduli(ModuliMode::Faithful, 15, 20), ConfigError);
}

TEST_CASE("greedy moduli by hand") {
  // j = 1..5: ranges [j^(1/4), 8 j^(1/4)] hold 2, 3, 5, 7, 11, and the windows
  // ceil(3 ln j) exclude every earlier choice.
  const auto s = build_moduli(ModuliMode::GreedyWindow, 1, 5);
  CHECK(s.modulus(1) == 2);
  CHECK(s.modulus(2) == 3);
  CHECK(s.modulus(3) == 5);
  CHECK(s.modulus(4) == 7);
  CHECK(s.modulus(5) == 11);
  // j = 6: [1.56, 12.5] holds only 2, 3, 5, 7, 11, all inside the window of 6.
  CHECK_THROWS_WITH_AS(build_moduli(ModuliMode::GreedyWindow, 1, 6), doctest::Contains("j = 6"),
                       ConfigError);
  const auto lru = build_moduli(ModuliMode::GreedyWindow, 1, 6, Rational(1, 4),
                                WindowFallback::LeastRecent);
  CHECK(lru.modulus(6) == 2);
  CHECK(lru.at(6).window == 5);
  CHECK(target_window(6) == 6);
}

TEST_CASE("greedy moduli stay in range and honour the recorded window") {
  const auto s = build_moduli(ModuliMode::GreedyWindow, 5, 3000, Rational(1, 4),
                              WindowFallback::LeastRecent);
  for (const auto& e : s.entries()) {
    const Natural m4 = Natural(e.modulus) * e.modulus * e.modulus * e.modulus;
    CHECK(m4 >= e.level);
    CHECK(m4 <= Natural(4096) * e.level);
    for (int i = std::max(5, e.level - e.window + 1); i < e.level; ++i) {
      CHECK(s.modulus(i) != e.modulus);
    }
  }
}

TEST_CASE("block lengths") {
  SequencePlan plan;
  plan.jmax = 12;
  CHECK(plan.block_exponent() == Rational(19, 75));
  const std::uint64_t expected[] = {22, 41, 79, 152, 294, 572, 1116, 2183};
  for (int j = 5; j <= 12; ++j) {
    CHECK(arithmetic_block_length(j, plan.block_exponent()) == expected[j - 5]);
  }
  CHECK(floor_pow2_over_power(16, Rational(1, 4)) == 32768);
  CHECK(floor_pow2_over_power(10, Rational(0)) == 1024);
}

TEST_CASE("surrogate blocks") {
  SequencePlan plan;
  plan.jmax = 9;
  const auto blocks = build_blocks(plan);
  REQUIRE(blocks.size() == 10);
  CHECK(blocks[0].kind == BlockKind::Geometric);
  CHECK(blocks[0].count == 32);
  CHECK(blocks[1].kind == BlockKind::Arithmetic);
  CHECK(blocks[1].count == 22);
  CHECK(blocks_ordered(blocks, plan.bit_budget));
  CHECK(blocks_separated(blocks, 4, plan.bit_budget));
  // First offset: smallest power of two >= 4 * 1.
  CHECK(blocks[0].value(0, plan.bit_budget) == 5);
  CHECK(blocks[0].value(31, plan.bit_budget) == Natural(4) + pow2(31));
  // P_A(5) starts at the smallest power of two >= 4 (4 + 2^31).
  CHECK(blocks[1].value(0, plan.bit_budget) == pow2(34));
  CHECK(blocks[1].value(1, plan.bit_budget) == pow2(34) + blocks[1].modulus);
}

TEST_CASE("faithful blocks") {
  SequencePlan plan;
  plan.gap_policy = GapPolicy::Faithful;
  plan.j0 = 3;
  plan.jmax = 3;
  const auto blocks = build_blocks(plan);
  REQUIRE(blocks.size() == 2);
  const Block& g = blocks[0];
  CHECK(g.count == 8);
  CHECK(g.offset_exponent == 1);
  Natural e = 1;
  for (std::uint64_t h = 0; h < 8; ++h) {
    Natural t;
    mpz_ui_pow_ui(t.get_mpz_t(), 3, e.get_ui());
    CHECK(g.value(h, plan.bit_budget) == 2 + t);
    e *= 3;
  }
  CHECK(blocks[1].offset_exponent == g.value(7, plan.bit_budget));
  CHECK_THROWS_AS(blocks[1].value(0, plan.bit_budget), BudgetError);

  plan.jmax = 5;
  CHECK_THROWS_WITH_AS(build_blocks(plan), doctest::Contains("jmax = 5 > 4"), BudgetError);
  plan.j0 = 1;
  plan.jmax = 2;
  CHECK_THROWS_AS(build_blocks(plan), ConfigError);
}

TEST_CASE("bit budget") {
  SequencePlan plan;
  plan.jmax = 25;
  CHECK_THROWS_AS(build_blocks(plan), BudgetError);
  plan.bit_budget = 100'000'000;
  CHECK_NOTHROW(build_blocks(plan));
}

TEST_CASE("plan text round trip") {
  const auto plan = parse_plan("# desk plan\nepsilon = 1/200\nj0=6\njmax=10\ngeo_base=3\n"
                               "moduli_mode=greedy\nmoduli_fallback=error\nmode=surrogate\n");
  CHECK(plan.epsilon == Rational(1, 200));
  CHECK(plan.j0 == 6);
  CHECK(plan.geo_base == 3);
  CHECK(plan.moduli_fallback == WindowFallback::Error);
  const auto again = parse_plan(format_plan(plan));
  CHECK(format_plan(again) == format_plan(plan));
  CHECK_THROWS_AS(parse_plan("colour=red\n"), ConfigError);
  CHECK_THROWS_AS(parse_plan("epsilon=1/50\n"), ConfigError);
  CHECK_THROWS_AS(parse_plan("gap_factor=3\n"), ConfigError);
  CHECK(parse_plan("beta=1/3\ngamma=1/4\n").admissible_exponents());
  CHECK_FALSE(parse_plan("beta=1/10\ngamma=1/4\n").admissible_exponents());
}

TEST_CASE("assembled sequence") {
  SequencePlan plan;
  plan.jmax = 10;
  const auto one = assemble_sequence(plan, 1);
  CHECK(one.value(0) == 5);
  CHECK(one.provenance(0).level == 5);
  CHECK(one.provenance(0).kind == ProvenanceKind::Geometric);

  const auto blocks = build_blocks(plan);
  const auto bounds = block_boundaries(blocks);
  const auto seq = assemble_sequence(plan, bounds.back());
  CHECK(seq.top_level() == 10);
  const auto values = seq.values();
  for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i - 1] < values[i]);
  CHECK(seq.count_kind(ProvenanceKind::Geometric) + seq.count_kind(ProvenanceKind::Arithmetic) ==
        seq.size());
  // Arithmetic fraction at the end of each P_A(j) decreases with j.
  double prev = 1.0;
  for (std::size_t k = 1; k < bounds.size(); k += 2) {
    const auto pre = seq.prefix(bounds[k]);
    const double frac = static_cast<double>(pre.count_kind(ProvenanceKind::Arithmetic)) /
                        static_cast<double>(pre.size());
    CHECK(frac < prev);
    prev = frac;
  }
  const auto p = seq.provenance(bounds[0]);
  CHECK(p.kind == ProvenanceKind::Arithmetic);
  CHECK(p.modulus == blocks[1].modulus);
  CHECK_THROWS_WITH_AS(assemble_sequence(plan, bounds.back() + 1), doctest::Contains("raise jmax"),
                       ConfigError);
}

TEST_CASE("reference sequences") {
  ReferenceParams params;
  auto lin = reference_sequence(ReferenceKind::Linear, params, 5).values();
  CHECK(lin == std::vector<Natural>{1, 2, 3, 4, 5});
  auto sq = reference_sequence(ReferenceKind::Power, params, 4).values();
  CHECK(sq == std::vector<Natural>{1, 4, 9, 16});
  auto pr = reference_sequence(ReferenceKind::Primes, params, 5).values();
  CHECK(pr == std::vector<Natural>{2, 3, 5, 7, 11});
  auto lac = reference_sequence(ReferenceKind::Lacunary, params, 70);
  CHECK(lac.value(0) == 2);
  CHECK(lac.value(69) == pow2(70));
  CHECK(lac.max_bit_length() == 71);
  CHECK(lac.provenance(3).kind == ProvenanceKind::Reference);
  params.custom = {1, 5, 9};
  CHECK(reference_sequence(ReferenceKind::Custom, params, 3).value(2) == 9);
  CHECK_THROWS_AS(reference_sequence(ReferenceKind::Custom, params, 4), ConfigError);
  params.custom = {1, 5, 5};
  CHECK_THROWS_AS(reference_sequence(ReferenceKind::Custom, params, 3), ConfigError);
  CHECK_THROWS_AS(parse_reference_kind("fibonacci"), ConfigError);
}

TEST_CASE("sequence CSV") {
  SequencePlan plan;
  plan.jmax = 6;
  std::ostringstream out;
  write_sequence_csv(out, assemble_sequence(plan, 33));
  const auto text = out.str();
  CHECK(text.rfind("value,level,kind,modulus\n5,5,G,\n6,5,G,\n", 0) == 0);
  CHECK(text.find(",5,A,") != std::string::npos);
}
