#pragma once

// Increasing integer sequences with per-element provenance. Elements are kept
// as structured runs (blocks, powers, explicit lists) and materialized on
// demand: constructed sequences reach hundreds of thousands of bits per
// element, far too many to hold them all at once.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "metricpc/construction.hpp"

namespace metricpc {

enum class ProvenanceKind { Geometric, Arithmetic, Reference };

struct Provenance {
  int level = 0;
  ProvenanceKind kind = ProvenanceKind::Reference;
  std::optional<std::uint64_t> modulus;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// "G", "A" or "R".
char kind_letter(ProvenanceKind kind);

class IntegerSequence {
 public:
  enum class Shape { Explicit, BlockRange, PowerRun };

  // A maximal run of consecutive elements sharing one provenance.
  struct Segment {
    Shape shape = Shape::Explicit;
    Provenance provenance;
    std::uint64_t length = 0;
    std::vector<Natural> values;  // Explicit
    Block block;                  // BlockRange: block.value(first + k)
    std::uint64_t first = 0;      // BlockRange / PowerRun
    std::uint64_t base = 0;       // PowerRun: base^(first + k)
  };

  explicit IntegerSequence(std::size_t bit_budget = 1'000'000) : bit_budget_(bit_budget) {}

  // Appenders check that the sequence stays strictly increasing.
  void append_explicit(std::vector<Natural> values, Provenance provenance);
  void append_block(const Block& block, std::uint64_t first, std::uint64_t length);
  void append_powers(std::uint64_t base, std::uint64_t first_exponent, std::uint64_t length,
                     Provenance provenance);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  Natural value(std::size_t i) const;
  Provenance provenance(std::size_t i) const;
  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t bit_budget() const { return bit_budget_; }

  // Bit length of the largest (last) element.
  std::size_t max_bit_length() const;
  // Block level of the last element: the J with a_N in P_G(J) or P_A(J).
  int top_level() const;
  // The first n elements (n <= size()).
  IntegerSequence prefix(std::size_t n) const;
  // All values; only sensible for small sequences.
  std::vector<Natural> values() const;
  std::size_t count_kind(ProvenanceKind kind) const;

 private:
  std::size_t locate(std::size_t i, std::size_t& offset) const;
  Natural segment_value(const Segment& seg, std::uint64_t k) const;
  void push(Segment seg);

  std::vector<Segment> segments_;
  std::vector<std::size_t> starts_;
  std::size_t size_ = 0;
  std::size_t bit_budget_;
};

// The first n elements of the block union, in increasing order.
IntegerSequence assemble_from_blocks(const std::vector<Block>& blocks, std::size_t n,
                                     std::size_t bit_budget);
IntegerSequence assemble_sequence(const SequencePlan& plan, std::size_t n);

// Element count of the blocks up to and including each block, i.e. the
// block-boundary values of N.
std::vector<std::size_t> block_boundaries(const std::vector<Block>& blocks);

enum class ReferenceKind { Linear, Power, Lacunary, Primes, Custom };

struct ReferenceParams {
  std::uint64_t exponent = 2;   // Power: n^exponent
  std::uint64_t base = 2;       // Lacunary: base^n
  std::vector<Natural> custom;  // Custom: sorted and deduplicated check applies
};

ReferenceKind parse_reference_kind(std::string_view text);

// n = 1..N for linear, power and lacunary; the first N primes; or the first N
// entries of the custom list (which must be strictly increasing).
IntegerSequence reference_sequence(ReferenceKind kind, const ReferenceParams& params,
                                   std::size_t n);

// CSV with header value,level,kind,modulus; modulus is empty when absent.
void write_sequence_csv(std::ostream& out, const IntegerSequence& seq);

}  // namespace metricpc
