#include "metricpc/sequence.hpp"

#include <algorithm>

#include "metricpc/errors.hpp"
#include "metricpc/primes.hpp"

namespace metricpc {

char kind_letter(ProvenanceKind kind) {
  switch (kind) {
    case ProvenanceKind::Geometric: return 'G';
    case ProvenanceKind::Arithmetic: return 'A';
    case ProvenanceKind::Reference: return 'R';
  }
  return '?';
}

namespace {

Provenance block_provenance(const Block& b) {
  Provenance p;
  p.level = b.level;
  if (b.kind == BlockKind::Geometric) {
    p.kind = ProvenanceKind::Geometric;
  } else {
    p.kind = ProvenanceKind::Arithmetic;
    p.modulus = b.modulus;
  }
  return p;
}

}  // namespace

Natural IntegerSequence::segment_value(const Segment& seg, std::uint64_t k) const {
  switch (seg.shape) {
    case Shape::Explicit: return seg.values[k];
    case Shape::BlockRange: return seg.block.value(seg.first + k, bit_budget_);
    case Shape::PowerRun: {
      Natural r;
      mpz_ui_pow_ui(r.get_mpz_t(), seg.base, seg.first + k);
      return r;
    }
  }
  return 0;
}

void IntegerSequence::push(Segment seg) {
  if (seg.length == 0) return;
  if (size_ > 0) {
    const Segment& last = segments_.back();
    bool increasing = true;
    try {
      increasing = segment_value(last, last.length - 1) < segment_value(seg, 0);
    } catch (const BudgetError&) {
      // Symbolic faithful blocks: ordering is established by blocks_ordered.
    }
    if (!increasing) throw ConfigError("sequence must be strictly increasing across segments");
  }
  starts_.push_back(size_);
  size_ += seg.length;
  segments_.push_back(std::move(seg));
}

void IntegerSequence::append_explicit(std::vector<Natural> values, Provenance provenance) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k - 1] >= values[k]) throw ConfigError("sequence values must be strictly increasing");
  }
  if (!values.empty() && sgn(values.front()) < 0) throw ConfigError("sequence values must be >= 0");
  Segment seg;
  seg.shape = Shape::Explicit;
  seg.provenance = std::move(provenance);
  seg.length = values.size();
  seg.values = std::move(values);
  push(std::move(seg));
}

void IntegerSequence::append_block(const Block& block, std::uint64_t first, std::uint64_t length) {
  if (first + length > block.count) throw ConfigError("block range exceeds block size");
  Segment seg;
  seg.shape = Shape::BlockRange;
  seg.provenance = block_provenance(block);
  seg.length = length;
  seg.block = block;
  seg.first = first;
  push(std::move(seg));
}

void IntegerSequence::append_powers(std::uint64_t base, std::uint64_t first_exponent,
                                    std::uint64_t length, Provenance provenance) {
  if (base < 2) throw ConfigError("power run needs base >= 2");
  Segment seg;
  seg.shape = Shape::PowerRun;
  seg.provenance = std::move(provenance);
  seg.length = length;
  seg.base = base;
  seg.first = first_exponent;
  push(std::move(seg));
}

std::size_t IntegerSequence::locate(std::size_t i, std::size_t& offset) const {
  if (i >= size_) throw ConfigError("sequence index out of range");
  auto it = std::upper_bound(starts_.begin(), starts_.end(), i);
  const auto s = static_cast<std::size_t>(it - starts_.begin()) - 1;
  offset = i - starts_[s];
  return s;
}

Natural IntegerSequence::value(std::size_t i) const {
  std::size_t off = 0;
  const auto s = locate(i, off);
  return segment_value(segments_[s], off);
}

Provenance IntegerSequence::provenance(std::size_t i) const {
  std::size_t off = 0;
  return segments_[locate(i, off)].provenance;
}

std::size_t IntegerSequence::max_bit_length() const {
  if (size_ == 0) return 0;
  const Segment& last = segments_.back();
  if (last.shape == Shape::PowerRun) {
    // bit length of base^e without materializing it
    Natural r;
    mpz_ui_pow_ui(r.get_mpz_t(), last.base, last.first + last.length - 1);
    return bit_length(r);
  }
  return bit_length(value(size_ - 1));
}

int IntegerSequence::top_level() const {
  if (size_ == 0) throw ConfigError("empty sequence has no top level");
  return segments_.back().provenance.level;
}

IntegerSequence IntegerSequence::prefix(std::size_t n) const {
  if (n > size_) throw ConfigError("prefix longer than the sequence");
  IntegerSequence out(bit_budget_);
  for (const auto& seg : segments_) {
    if (out.size_ == n) break;
    Segment cut = seg;
    cut.length = std::min<std::uint64_t>(seg.length, n - out.size_);
    if (cut.shape == Shape::Explicit) cut.values.resize(cut.length);
    out.starts_.push_back(out.size_);
    out.size_ += cut.length;
    out.segments_.push_back(std::move(cut));
  }
  return out;
}

std::vector<Natural> IntegerSequence::values() const {
  std::vector<Natural> out;
  out.reserve(size_);
  for (const auto& seg : segments_) {
    for (std::uint64_t k = 0; k < seg.length; ++k) out.push_back(segment_value(seg, k));
  }
  return out;
}

std::size_t IntegerSequence::count_kind(ProvenanceKind kind) const {
  std::size_t n = 0;
  for (const auto& seg : segments_) {
    if (seg.provenance.kind == kind) n += seg.length;
  }
  return n;
}

std::vector<std::size_t> block_boundaries(const std::vector<Block>& blocks) {
  std::vector<std::size_t> out;
  std::size_t total = 0;
  for (const auto& b : blocks) {
    total += b.count;
    out.push_back(total);
  }
  return out;
}

IntegerSequence assemble_from_blocks(const std::vector<Block>& blocks, std::size_t n,
                                     std::size_t bit_budget) {
  std::size_t coverage = 0;
  for (const auto& b : blocks) coverage += b.count;
  if (n > coverage) {
    throw ConfigError("N = " + std::to_string(n) + " exceeds the " + std::to_string(coverage) +
                      " elements of the blocks through level " +
                      std::to_string(blocks.empty() ? 0 : blocks.back().level) +
                      "; raise jmax");
  }
  IntegerSequence seq(bit_budget);
  for (const auto& b : blocks) {
    if (seq.size() == n) break;
    seq.append_block(b, 0, std::min<std::uint64_t>(b.count, n - seq.size()));
  }
  return seq;
}

IntegerSequence assemble_sequence(const SequencePlan& plan, std::size_t n) {
  return assemble_from_blocks(build_blocks(plan), n, plan.bit_budget);
}

ReferenceKind parse_reference_kind(std::string_view text) {
  if (text == "linear") return ReferenceKind::Linear;
  if (text == "power") return ReferenceKind::Power;
  if (text == "lacunary") return ReferenceKind::Lacunary;
  if (text == "primes") return ReferenceKind::Primes;
  if (text == "custom") return ReferenceKind::Custom;
  throw ConfigError("unknown reference kind '" + std::string(text) +
                    "' (linear, power, lacunary, primes, custom)");
}

IntegerSequence reference_sequence(ReferenceKind kind, const ReferenceParams& params,
                                   std::size_t n) {
  IntegerSequence seq;
  const Provenance ref{0, ProvenanceKind::Reference, std::nullopt};
  std::vector<Natural> values;
  switch (kind) {
    case ReferenceKind::Linear:
      values.reserve(n);
      for (std::size_t k = 1; k <= n; ++k) values.emplace_back(static_cast<unsigned long>(k));
      break;
    case ReferenceKind::Power:
      if (params.exponent < 1) throw ConfigError("power reference needs exponent >= 1");
      values.reserve(n);
      for (std::size_t k = 1; k <= n; ++k) {
        Natural v;
        mpz_ui_pow_ui(v.get_mpz_t(), k, params.exponent);
        values.push_back(std::move(v));
      }
      break;
    case ReferenceKind::Lacunary:
      seq.append_powers(params.base, 1, n, ref);
      return seq;
    case ReferenceKind::Primes:
      for (auto p : first_primes(n)) values.emplace_back(static_cast<unsigned long>(p));
      break;
    case ReferenceKind::Custom:
      if (params.custom.size() < n) {
        throw ConfigError("custom reference has only " + std::to_string(params.custom.size()) +
                          " values, " + std::to_string(n) + " requested");
      }
      values.assign(params.custom.begin(), params.custom.begin() + static_cast<std::ptrdiff_t>(n));
      break;
  }
  seq.append_explicit(std::move(values), ref);
  return seq;
}

void write_sequence_csv(std::ostream& out, const IntegerSequence& seq) {
  out << "value,level,kind,modulus\n";
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto p = seq.provenance(i);
    out << seq.value(i).get_str() << ',' << p.level << ',' << kind_letter(p.kind) << ',';
    if (p.modulus) out << *p.modulus;
    out << '\n';
  }
}

}  // namespace metricpc
