#include "metricpc/energy.hpp"

#include <algorithm>
#include <numeric>

#include "metricpc/errors.hpp"
#include "metricpc/primes.hpp"

namespace metricpc {

namespace {

struct Rec {
  std::uint64_t f1, f2;
  std::uint32_t i, j;
};

struct Fingerprint {
  std::uint64_t p1, p2;
};

const Fingerprint& fingerprint_primes() {
  static const Fingerprint fp = [] {
    auto below = [](std::uint64_t x) {
      while (!is_prime_u64(x)) --x;
      return x;
    };
    return Fingerprint{below((1ULL << 62) - 1), below((1ULL << 62) - (1ULL << 40))};
  }();
  return fp;
}

struct Residues {
  std::vector<std::uint64_t> r1, r2;
};

Residues residues_of(const std::vector<Natural>& a) {
  const auto& fp = fingerprint_primes();
  Residues r;
  r.r1.reserve(a.size());
  r.r2.reserve(a.size());
  for (const auto& x : a) {
    if (sgn(x) < 0) throw ConfigError("energy inputs must be non-negative");
    r.r1.push_back(mpz_fdiv_ui(x.get_mpz_t(), fp.p1));
    r.r2.push_back(mpz_fdiv_ui(x.get_mpz_t(), fp.p2));
  }
  return r;
}

void check_budget(std::uint64_t pairs, std::uint64_t budget) {
  if (pairs > budget) {
    throw BudgetError("energy computation needs " + std::to_string(pairs) +
                      " pair records, over the budget of " + std::to_string(budget));
  }
}

void check_distinct(const std::vector<Natural>& a) {
  std::vector<const Natural*> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = &a[i];
  std::sort(p.begin(), p.end(), [](auto x, auto y) { return *x < *y; });
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (*p[i - 1] == *p[i]) throw ConfigError("duplicate element " + p[i]->get_str());
  }
}

// Sorts records by fingerprint and calls emit(first, last, value) once per
// class of records with equal exact value; value(rec) gives that exact value.
// Singleton fingerprint groups are emitted without evaluating value unless
// need_value is set.
template <class Value, class Emit>
void group_exact(std::vector<Rec>& recs, Value value, bool need_value, Emit emit) {
  std::sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) {
    return a.f1 != b.f1 ? a.f1 < b.f1 : a.f2 < b.f2;
  });
  std::vector<std::pair<Natural, std::size_t>> exact;
  for (std::size_t lo = 0; lo < recs.size();) {
    std::size_t hi = lo + 1;
    while (hi < recs.size() && recs[hi].f1 == recs[lo].f1 && recs[hi].f2 == recs[lo].f2) ++hi;
    if (hi - lo == 1) {
      emit(recs.begin() + static_cast<std::ptrdiff_t>(lo), recs.begin() + static_cast<std::ptrdiff_t>(hi),
           need_value ? value(recs[lo]) : Natural());
    } else {
      exact.clear();
      for (std::size_t k = lo; k < hi; ++k) exact.emplace_back(value(recs[k]), k);
      std::sort(exact.begin(), exact.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      std::vector<Rec> tmp;
      for (std::size_t a = 0; a < exact.size();) {
        std::size_t b = a + 1;
        while (b < exact.size() && exact[b].first == exact[a].first) ++b;
        tmp.clear();
        for (std::size_t k = a; k < b; ++k) tmp.push_back(recs[exact[k].second]);
        emit(tmp.begin(), tmp.end(), exact[a].first);
        a = b;
      }
    }
    lo = hi;
  }
}

Natural square(std::uint64_t c) {
  Natural x(static_cast<unsigned long>(c));
  return x * x;
}

// Sets spanning fewer than 2^24 consecutive integers: count every pair sum in a
// dense table.
constexpr std::uint64_t kDenseSpan = 1ULL << 24;

Natural energy_dense(const std::vector<Natural>& a, const Natural& lo, std::uint64_t span) {
  std::vector<std::uint64_t> x;
  x.reserve(a.size());
  for (const auto& v : a) x.push_back(Natural(v - lo).get_ui());
  std::vector<std::uint64_t> count(2 * span + 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++count[2 * x[i]];
    for (std::size_t j = i + 1; j < x.size(); ++j) count[x[i] + x[j]] += 2;
  }
  Natural e = 0;
  for (auto c : count) {
    if (c) e += square(c);
  }
  return e;
}

// Values below 2^61: sort the exact pair sums, tagged with a diagonal bit.
Natural energy_small(const std::vector<Natural>& a) {
  std::vector<std::uint64_t> x;
  x.reserve(a.size());
  for (const auto& v : a) x.push_back(v.get_ui());
  std::vector<std::uint64_t> keys;
  keys.reserve(x.size() * (x.size() + 1) / 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    keys.push_back((2 * x[i]) << 1 | 1);
    for (std::size_t j = i + 1; j < x.size(); ++j) keys.push_back((x[i] + x[j]) << 1);
  }
  std::sort(keys.begin(), keys.end());
  Natural e = 0;
  for (std::size_t lo = 0; lo < keys.size();) {
    std::uint64_t c = 0;
    std::size_t hi = lo;
    while (hi < keys.size() && keys[hi] >> 1 == keys[lo] >> 1) c += (keys[hi++] & 1) ? 1 : 2;
    e += square(c);
    lo = hi;
  }
  return e;
}

}  // namespace

Natural additive_energy(const std::vector<Natural>& a, std::uint64_t pair_budget) {
  check_distinct(a);
  const std::uint64_t n = a.size();
  if (n > UINT32_MAX) throw BudgetError("too many elements");
  check_budget(n * (n + 1) / 2, pair_budget);
  if (n == 0) return 0;
  const auto [lo_it, hi_it] = std::minmax_element(a.begin(), a.end());
  if (sgn(*lo_it) < 0) throw ConfigError("energy inputs must be non-negative");
  const Natural span = *hi_it - *lo_it;
  if (span < kDenseSpan && span <= Natural(static_cast<unsigned long>(64 * n * n))) {
    return energy_dense(a, *lo_it, span.get_ui());
  }
  if (bit_length(*hi_it) <= 61) return energy_small(a);
  const auto& fp = fingerprint_primes();
  const auto r = residues_of(a);
  std::vector<Rec> recs;
  recs.reserve(n * (n + 1) / 2);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i; j < n; ++j) {
      recs.push_back({(r.r1[i] + r.r1[j]) % fp.p1, (r.r2[i] + r.r2[j]) % fp.p2, i, j});
    }
  }
  Natural energy = 0;
  group_exact(
      recs, [&](const Rec& x) { return Natural(a[x.i] + a[x.j]); }, false,
      [&](auto first, auto last, const Natural&) {
        std::uint64_t c = 0;
        for (auto it = first; it != last; ++it) c += it->i == it->j ? 1 : 2;
        energy += square(c);
      });
  return energy;
}

Natural additive_energy_differences(const std::vector<Natural>& a, std::uint64_t pair_budget) {
  check_distinct(a);
  const std::uint64_t n = a.size();
  if (n > UINT32_MAX) throw BudgetError("too many elements");
  check_budget(n * (n - (n > 0 ? 1 : 0)) / 2, pair_budget);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a[x] < a[y]; });
  const auto& fp = fingerprint_primes();
  const auto r = residues_of(a);
  std::vector<Rec> recs;
  recs.reserve(n * (n - (n > 0 ? 1 : 0)) / 2);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t y = x + 1; y < n; ++y) {
      const auto lo = order[x], hi = order[y];
      recs.push_back({(r.r1[hi] + fp.p1 - r.r1[lo]) % fp.p1, (r.r2[hi] + fp.p2 - r.r2[lo]) % fp.p2,
                      hi, lo});
    }
  }
  Natural sum = 0;
  group_exact(
      recs, [&](const Rec& x) { return Natural(a[x.i] - a[x.j]); }, false,
      [&](auto first, auto last, const Natural&) {
        sum += square(static_cast<std::uint64_t>(last - first));
      });
  return square(n) + 2 * sum;
}

Natural additive_energy_quadruples(const std::vector<Natural>& a) {
  check_distinct(a);
  if (a.size() > 64) throw BudgetError("quadruple enumeration is limited to 64 elements");
  std::uint64_t count = 0;
  for (const auto& x : a) {
    for (const auto& y : a) {
      const Natural s = x + y;
      for (const auto& z : a) {
        for (const auto& w : a) count += (z + w == s) ? 1 : 0;
      }
    }
  }
  return Natural(static_cast<unsigned long>(count));
}

const char* filter_name(RepFilter f) {
  switch (f) {
    case RepFilter::All: return "all";
    case RepFilter::GG: return "GG";
    case RepFilter::AG: return "AG";
    case RepFilter::AAdiff: return "AAdiff";
    case RepFilter::AAsame: return "AAsame";
  }
  return "?";
}

std::uint64_t RepCounts::at(const Natural& d) const {
  auto it = std::lower_bound(counts.begin(), counts.end(), d,
                             [](const auto& e, const Natural& v) { return e.first < v; });
  return it != counts.end() && it->first == d ? it->second : 0;
}

std::uint64_t RepCounts::max_count() const {
  std::uint64_t m = 0;
  for (const auto& e : counts) m = std::max(m, e.second);
  return m;
}

std::uint64_t RepCounts::total() const {
  std::uint64_t t = 0;
  for (const auto& e : counts) t += e.second;
  return t;
}

namespace {

// Groups the differences hi - lo for the given (hi, lo) index pairs.
RepCounts collect(std::vector<Rec> recs, const std::vector<Natural>& hi_vals,
                  const std::vector<Natural>& lo_vals, RepFilter filter) {
  RepCounts out;
  out.filter = filter;
  group_exact(
      recs, [&](const Rec& x) { return Natural(hi_vals[x.i] - lo_vals[x.j]); }, true,
      [&](auto first, auto last, const Natural& d) {
        out.counts.emplace_back(d, static_cast<std::uint64_t>(last - first));
      });
  std::sort(out.counts.begin(), out.counts.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

}  // namespace

RepCounts representation_counts(const std::vector<Natural>& x, const std::vector<Natural>& y) {
  const auto& fp = fingerprint_primes();
  const auto rx = residues_of(x), ry = residues_of(y);
  std::vector<Rec> recs;
  for (std::uint32_t i = 0; i < x.size(); ++i) {
    for (std::uint32_t j = 0; j < y.size(); ++j) {
      if (x[i] <= y[j]) continue;
      recs.push_back({(rx.r1[i] + fp.p1 - ry.r1[j]) % fp.p1, (rx.r2[i] + fp.p2 - ry.r2[j]) % fp.p2,
                      i, j});
    }
  }
  return collect(std::move(recs), x, y, RepFilter::All);
}

RepCounts representation_counts(const IntegerSequence& seq, std::size_t n, RepFilter filter,
                                std::uint64_t pair_budget) {
  if (n > seq.size()) throw ConfigError("sequence shorter than N");
  const auto prefix = seq.prefix(n);
  const auto values = prefix.values();
  std::vector<Provenance> prov;
  prov.reserve(n);
  for (const auto& seg : prefix.segments()) {
    for (std::uint64_t k = 0; k < seg.length; ++k) prov.push_back(seg.provenance);
  }
  auto wanted = [&](std::size_t i, std::size_t j) {
    if (filter == RepFilter::All) return true;
    const auto& a = prov[i];
    const auto& b = prov[j];
    if (a.kind == ProvenanceKind::Reference || b.kind == ProvenanceKind::Reference) {
      throw ConfigError("class filter needs block provenance");
    }
    const bool ga = a.kind == ProvenanceKind::Geometric, gb = b.kind == ProvenanceKind::Geometric;
    switch (filter) {
      case RepFilter::GG: return ga && gb;
      case RepFilter::AG: return ga != gb;
      case RepFilter::AAsame: return !ga && !gb && a.level == b.level;
      case RepFilter::AAdiff: return !ga && !gb && a.level != b.level;
      case RepFilter::All: return true;
    }
    return false;
  };
  const auto& fp = fingerprint_primes();
  const auto r = residues_of(values);
  std::vector<Rec> recs;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (!wanted(i, j)) continue;
      if (recs.size() >= pair_budget) {
        throw BudgetError("representation counts exceed the pair budget of " +
                          std::to_string(pair_budget));
      }
      recs.push_back({(r.r1[j] + fp.p1 - r.r1[i]) % fp.p1, (r.r2[j] + fp.p2 - r.r2[i]) % fp.p2,
                      j, i});
    }
  }
  return collect(std::move(recs), values, values, filter);
}

}  // namespace metricpc
