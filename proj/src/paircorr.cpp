#include "metricpc/paircorr.hpp"

#include <algorithm>

#include "metricpc/errors.hpp"

namespace metricpc {

const char* class_name(PairClass c) {
  switch (c) {
    case PairClass::GG: return "GG";
    case PairClass::AG: return "AG";
    case PairClass::AAdiff: return "AAdiff";
    case PairClass::AAsame: return "AAsame";
  }
  return "?";
}

namespace {


struct Point {
  u128 key;
  std::uint32_t index;
};

std::vector<Point> sorted_points(const FractionalParts& parts) {
  if (parts.size() > UINT32_MAX) throw BudgetError("too many points");
  std::vector<Point> pts(parts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i] = {parts.keys()[i], static_cast<std::uint32_t>(i)};
  }
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.key != b.key ? a.key < b.key : a.index < b.index;
  });
  return pts;
}

void check_s(const Rational& s) {
  if (sgn(s) < 0) throw ConfigError("s must be non-negative, got " + to_string(s));
}

// Exact test ||(x - y) / den|| <= s / N.
class ExactWindow {
 public:
  ExactWindow(const Natural& den, const Rational& s, std::size_t n)
      : den_(den), lhs_scale_(s.get_den() * Natural(static_cast<unsigned long>(n))),
        rhs_(s.get_num() * den) {}

  bool operator()(const Natural& x, const Natural& y) {
    mpz_sub(d_.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    mpz_abs(d_.get_mpz_t(), d_.get_mpz_t());
    mpz_sub(e_.get_mpz_t(), den_.get_mpz_t(), d_.get_mpz_t());
    if (e_ < d_) mpz_swap(d_.get_mpz_t(), e_.get_mpz_t());
    mpz_mul(d_.get_mpz_t(), d_.get_mpz_t(), lhs_scale_.get_mpz_t());
    return d_ <= rhs_;
  }

 private:
  const Natural& den_;
  Natural lhs_scale_, rhs_, d_, e_;
};

// How the key threshold relates to the window s/N.
struct Threshold {
  enum class Kind { AllPairs, Keys, Exhaustive } kind;
  u128 t = 0;  // floor(s * 2^128 / N)
};

Threshold threshold(const Rational& s, std::size_t n) {
  const Natural nn(static_cast<unsigned long>(n));
  if (2 * s.get_num() >= s.get_den() * nn) return {Threshold::Kind::AllPairs, 0};
  Natural t = s.get_num();
  mpz_mul_2exp(t.get_mpz_t(), t.get_mpz_t(), 128);
  mpz_fdiv_q(t.get_mpz_t(), t.get_mpz_t(), Natural(s.get_den() * nn).get_mpz_t());
  if (bit_length(t) >= 127) return {Threshold::Kind::Exhaustive, 0};
  Threshold th{Threshold::Kind::Keys, 0};
  mpz_export(&th.t, nullptr, -1, sizeof(u128), 0, 0, t.get_mpz_t());
  return th;
}

// Forward circular key distance from pts[i] to pts[q mod n] is <= limit, for
// i < q < i + n. limit < 2^127.
inline bool within(const std::vector<Point>& pts, std::size_t i, std::size_t q, u128 limit) {
  const std::size_t n = pts.size();
  if (q < n) return pts[q].key - pts[i].key <= limit;
  const u128 back = pts[i].key - pts[q - n].key;
  return back != 0 && static_cast<u128>(-back) <= limit;
}

// For each i, one past the last q (in i+1 .. i+n-1) with forward key distance
// <= limit. limit = -1 (as signed) yields i + 1 throughout.
class Sweep {
 public:
  Sweep(const std::vector<Point>& pts, bool empty_window, u128 limit)
      : pts_(pts), empty_(empty_window), limit_(limit) {}

  std::size_t end(std::size_t i) {
    q_ = std::max(q_, i + 1);
    if (empty_) return q_;
    while (q_ < i + pts_.size() && within(pts_, i, q_, limit_)) ++q_;
    return q_;
  }

 private:
  const std::vector<Point>& pts_;
  bool empty_;
  u128 limit_;
  std::size_t q_ = 0;
};

// Calls visit(a, b, certain) for every unordered pair that may lie within the
// window: certain pairs have key distance <= t - 1 (or <= t with exact keys),
// the others need the exact test. Returns the number of certain pairs when
// visit_certain is false (certain pairs are then only counted).
template <class Visit>
std::uint64_t sweep_pairs(const std::vector<Point>& pts, u128 t, bool exact_keys,
                          bool visit_certain, Visit&& visit) {
  const std::size_t n = pts.size();
  const bool no_certain = !exact_keys && t == 0;
  const u128 certain_limit = exact_keys ? t : t - 1;
  Sweep certain(pts, no_certain, certain_limit);
  Sweep maybe(pts, exact_keys, t + 1);
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c_end = certain.end(i);
    count += c_end - i - 1;
    if (visit_certain) {
      for (std::size_t q = i + 1; q < c_end; ++q) visit(pts[i].index, pts[q % n].index, true);
    }
    if (exact_keys) continue;
    const std::size_t m_end = maybe.end(i);
    for (std::size_t q = c_end; q < m_end; ++q) visit(pts[i].index, pts[q % n].index, false);
  }
  return count;
}

std::uint64_t exhaustive_count(const FractionalParts& parts, const Rational& s) {
  ExactWindow in(parts.denominator(), s, parts.size());
  std::vector<Natural> xs(parts.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = parts.residue(i);
  std::uint64_t count = 0;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    for (std::size_t b = a + 1; b < xs.size(); ++b) count += in(xs[a], xs[b]) ? 1 : 0;
  }
  return count;
}

std::uint64_t count_sorted(const FractionalParts& parts, const std::vector<Point>& pts,
                           const Rational& s) {
  check_s(s);
  const std::size_t n = parts.size();
  if (n < 2) return 0;
  const auto th = threshold(s, n);
  if (th.kind == Threshold::Kind::AllPairs) return static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (th.kind == Threshold::Kind::Exhaustive) return exhaustive_count(parts, s);
  ExactWindow in(parts.denominator(), s, n);
  std::uint64_t extra = 0;
  const std::uint64_t certain =
      sweep_pairs(pts, th.t, parts.keys_exact(), false, [&](std::uint32_t a, std::uint32_t b, bool) {
        if (in(parts.residue(a), parts.residue(b))) ++extra;
      });
  return certain + extra;
}

Rational ratio(std::uint64_t ordered, std::size_t n) {
  if (n == 0) return 0;
  Rational r(Natural(static_cast<unsigned long>(ordered)), Natural(static_cast<unsigned long>(n)));
  r.canonicalize();
  return r;
}

}  // namespace

std::uint64_t count_close_pairs(const FractionalParts& parts, const Rational& s) {
  return count_sorted(parts, sorted_points(parts), s);
}

PairCorrResult pair_correlation(const FractionalParts& parts, const std::vector<Rational>& s_grid) {
  PairCorrResult out;
  out.N = parts.size();
  out.s_grid = s_grid;
  const auto pts = sorted_points(parts);
  for (const auto& s : s_grid) out.R.push_back(ratio(2 * count_sorted(parts, pts, s), out.N));
  return out;
}

PairCorrResult pair_correlation(const IntegerSequence& seq, const Alpha& alpha,
                                const std::vector<Rational>& s_grid, std::size_t N) {
  return pair_correlation(FractionalParts(seq, alpha, N), s_grid);
}

Rational pair_correlation_bruteforce(const std::vector<Natural>& residues, const Natural& den,
                                     const Rational& s) {
  check_s(s);
  const std::size_t n = residues.size();
  if (n > kBruteforceMaxN) {
    throw BudgetError("brute-force pair correlation is limited to N <= " +
                      std::to_string(kBruteforceMaxN));
  }
  ExactWindow in(den, s, n);
  std::uint64_t ordered = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && in(residues[i], residues[j])) ++ordered;
    }
  }
  return ratio(ordered, n);
}

Rational pair_correlation_bruteforce(const IntegerSequence& seq, const Alpha& alpha,
                                     const Rational& s, std::size_t N) {
  if (N > kBruteforceMaxN) {
    throw BudgetError("brute-force pair correlation is limited to N <= " +
                      std::to_string(kBruteforceMaxN));
  }
  if (N > seq.size()) throw ConfigError("sequence shorter than N");
  const auto prefix = seq.prefix(N);
  alpha.require_precision(prefix.max_bit_length());
  std::vector<Natural> residues;
  residues.reserve(N);
  for (std::size_t i = 0; i < N; ++i) residues.push_back(alpha.residue(prefix.value(i)));
  return pair_correlation_bruteforce(residues, alpha.denominator(), s);
}

namespace {

struct Tag {
  ProvenanceKind kind;
  int level;
};

std::vector<Tag> provenance_tags(const IntegerSequence& seq, std::size_t n) {
  std::vector<Tag> tags;
  tags.reserve(n);
  for (const auto& seg : seq.segments()) {
    if (seg.provenance.kind == ProvenanceKind::Reference) {
      throw ConfigError("decomposition needs block provenance; element " +
                        std::to_string(tags.size()) + " is missing provenance");
    }
    for (std::uint64_t k = 0; k < seg.length && tags.size() < n; ++k) {
      tags.push_back({seg.provenance.kind, seg.provenance.level});
    }
    if (tags.size() == n) break;
  }
  return tags;
}

PairClass classify(const Tag& a, const Tag& b) {
  const bool ga = a.kind == ProvenanceKind::Geometric, gb = b.kind == ProvenanceKind::Geometric;
  if (ga && gb) return PairClass::GG;
  if (ga || gb) return PairClass::AG;
  return a.level == b.level ? PairClass::AAsame : PairClass::AAdiff;
}

}  // namespace

PairCorrResult decompose_paircorr(const FractionalParts& parts, const IntegerSequence& seq,
                                  const std::vector<Rational>& s_grid) {
  const std::size_t n = parts.size();
  if (seq.size() < n) throw ConfigError("sequence shorter than the fractional parts");
  const auto tags = provenance_tags(seq, n);
  const auto pts = sorted_points(parts);

  PairCorrResult out;
  out.N = n;
  out.s_grid = s_grid;
  out.classes.emplace();
  for (const auto& s : s_grid) {
    check_s(s);
    std::array<std::uint64_t, 4> counts{};
    auto add = [&](std::uint32_t a, std::uint32_t b) {
      ++counts[static_cast<int>(classify(tags[a], tags[b]))];
    };
    const auto th = n < 2 ? Threshold{Threshold::Kind::Keys, 0} : threshold(s, n);
    if (n < 2) {
      // no pairs
    } else if (th.kind != Threshold::Kind::Keys) {
      ExactWindow in(parts.denominator(), s, n);
      const bool all = th.kind == Threshold::Kind::AllPairs;
      for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t b = a + 1; b < n; ++b) {
          if (all || in(parts.residue(a), parts.residue(b))) add(a, b);
        }
      }
    } else {
      ExactWindow in(parts.denominator(), s, n);
      sweep_pairs(pts, th.t, parts.keys_exact(), true,
                  [&](std::uint32_t a, std::uint32_t b, bool certain) {
                    if (certain || in(parts.residue(a), parts.residue(b))) add(a, b);
                  });
    }
    std::uint64_t total = 0;
    for (auto c : kPairClasses) {
      const auto k = static_cast<int>(c);
      total += counts[k];
      (*out.classes)[k].push_back(ratio(2 * counts[k], n));
    }
    out.R.push_back(ratio(2 * total, n));
  }
  return out;
}

PairCorrResult decompose_paircorr(const IntegerSequence& seq, const Alpha& alpha,
                                  const std::vector<Rational>& s_grid, std::size_t N) {
  return decompose_paircorr(FractionalParts(seq, alpha, N), seq, s_grid);
}

void write_paircorr_csv_header(std::ostream& out) {
  out << "N,s_num,s_den,R,R_GG,R_AG,R_AAdiff,R_AAsame\n";
}

void write_paircorr_csv(std::ostream& out, const PairCorrResult& r) {
  for (std::size_t k = 0; k < r.s_grid.size(); ++k) {
    out << r.N << ',' << r.s_grid[k].get_num().get_str() << ',' << r.s_grid[k].get_den().get_str()
        << ',' << to_string(r.R[k]);
    for (auto c : kPairClasses) {
      out << ',';
      if (r.classes) out << to_string((*r.classes)[static_cast<int>(c)][k]);
    }
    out << '\n';
  }
}

}  // namespace metricpc
