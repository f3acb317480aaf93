#include "metricpc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "metricpc/diophantine.hpp"
#include "metricpc/energy.hpp"
#include "metricpc/errors.hpp"
#include "metricpc/fourier.hpp"

namespace metricpc {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  try {
    return to_u64(parse_natural(v));
  } catch (const ConfigError&) {
    throw ConfigError("config key '" + std::string(key) + "' needs a non-negative integer, got '" +
                      std::string(v) + "'");
  }
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + std::string(key) + "' needs true or false");
}

std::vector<std::size_t> parse_schedule(std::string_view v, const Rational& epsilon) {
  if (v.starts_with("pow2:") || v.starts_with("nm:")) {
    auto parts = split(v, ':');
    if (parts.size() != 3) throw ConfigError("schedule must look like pow2:lo:hi or nm:lo:hi");
    const auto lo = static_cast<int>(parse_u64("N", parts[1]));
    const auto hi = static_cast<int>(parse_u64("N", parts[2]));
    return parts[0] == "pow2" ? pow2_schedule(lo, hi) : nm_schedule(epsilon, lo, hi);
  }
  std::vector<std::size_t> out;
  for (const auto& x : split(v, ',')) out.push_back(parse_u64("N", x));
  return out;
}

std::string join_n(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

std::vector<std::size_t> pow2_schedule(int lo, int hi) {
  if (lo < 0 || hi > 40 || lo > hi) throw ConfigError("pow2 schedule needs 0 <= lo <= hi <= 40");
  std::vector<std::size_t> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::size_t{1} << k);
  return out;
}

std::vector<std::size_t> nm_schedule(const Rational& epsilon, int m_lo, int m_hi) {
  if (m_lo < 1 || m_lo > m_hi) throw ConfigError("N_m schedule needs 1 <= m_lo <= m_hi");
  const double e = 1.0 / (1.0 + epsilon.get_d() / 2);
  std::vector<std::size_t> out;
  for (int m = m_lo; m <= m_hi; ++m) {
    const double x = std::exp(std::pow(static_cast<double>(m), e));
    if (x > 1e15) throw ConfigError("N_m overflows at m = " + std::to_string(m));
    const auto n = static_cast<std::size_t>(std::floor(x));
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (constructed()) {
    plan.validate();
  } else if (sequence != "linear" && sequence != "power" && sequence != "lacunary" &&
             sequence != "primes") {
    throw ConfigError("sequence must be constructed, linear, power, lacunary or primes");
  }
  if (n_alpha == 0) throw ConfigError("n_alpha must be at least 1");
  if (N.empty()) throw ConfigError("the N schedule is empty");
  if (N.front() == 0) throw ConfigError("N must be positive");
  for (std::size_t k = 1; k < N.size(); ++k) {
    if (N[k - 1] >= N[k]) throw ConfigError("the N schedule must be strictly increasing");
  }
  if (s_grid.empty()) throw ConfigError("the s grid is empty");
  for (const auto& s : s_grid) {
    if (sgn(s) < 0) throw ConfigError("s values must be non-negative");
  }
  if (energy && !constructed()) throw ConfigError("energy rows need the constructed sequence");
  if (variance && !constructed()) throw ConfigError("variance rows need the constructed sequence");
  if (variance_H == 0) throw ConfigError("variance_H must be positive");
}

ExperimentConfig parse_config(std::string_view text, const fs::path& base_dir) {
  ExperimentConfig c;
  std::optional<std::string> n_spec;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l = line;
    if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const auto key = trim(l.substr(0, eq));
    const auto v = trim(l.substr(eq + 1));
    if (key == "sequence") {
      c.sequence = v;
    } else if (key == "plan") {
      fs::path p(v);
      c.plan = load_plan(p.is_absolute() ? p : base_dir / p);
    } else if (key == "ref_exponent") {
      c.reference.exponent = parse_u64(key, v);
    } else if (key == "ref_base") {
      c.reference.base = parse_u64(key, v);
    } else if (key == "n_alpha") {
      c.n_alpha = parse_u64(key, v);
    } else if (key == "seed") {
      c.seed = parse_u64(key, v);
    } else if (key == "precision") {
      if (v == "auto") {
        c.precision.reset();
      } else {
        const auto p = parse_u64(key, v);
        if (p > (1ULL << 31)) throw ConfigError("precision too large");
        c.precision = static_cast<std::uint32_t>(p);
      }
    } else if (key == "N") {
      n_spec = v;
    } else if (key == "s") {
      c.s_grid.clear();
      for (const auto& x : split(v, ',')) c.s_grid.push_back(parse_rational(x));
    } else if (key == "decomposition") {
      c.decomposition = parse_bool(key, v);
    } else if (key == "energy") {
      c.energy = parse_bool(key, v);
    } else if (key == "energy_max_n") {
      c.energy_max_n = parse_u64(key, v);
    } else if (key == "mj") {
      c.mj = parse_bool(key, v);
    } else if (key == "mj_levels") {
      c.mj_levels.clear();
      for (const auto& x : split(v, ',')) c.mj_levels.push_back(static_cast<int>(parse_u64(key, x)));
    } else if (key == "variance") {
      c.variance = parse_bool(key, v);
    } else if (key == "variance_max_n") {
      c.variance_max_n = parse_u64(key, v);
    } else if (key == "variance_H") {
      c.variance_H = parse_u64(key, v);
    } else if (key == "out") {
      fs::path p(v);
      c.out = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
    } else if (!apply_plan_key(c.plan, key, v)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                        std::string(key) + "'");
    }
  }
  // The N_m rule depends on epsilon, so the schedule is resolved last.
  c.N = parse_schedule(n_spec.value_or("pow2:10:19"), c.plan.epsilon);
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "sequence=" << c.sequence << "\n";
  if (c.constructed()) {
    out << format_plan(c.plan);
  } else {
    out << "ref_exponent=" << c.reference.exponent << "\n"
        << "ref_base=" << c.reference.base << "\n";
  }
  out << "n_alpha=" << c.n_alpha << "\n"
      << "seed=" << c.seed << "\n"
      << "precision=" << (c.precision ? std::to_string(*c.precision) : std::string("auto")) << "\n"
      << "N=" << join_n(c.N) << "\n"
      << "s=";
  for (std::size_t k = 0; k < c.s_grid.size(); ++k) out << (k ? "," : "") << to_string(c.s_grid[k]);
  out << "\n"
      << "decomposition=" << (c.decomposition ? "true" : "false") << "\n"
      << "energy=" << (c.energy ? "true" : "false") << "\n"
      << "energy_max_n=" << c.energy_max_n << "\n"
      << "mj=" << (c.mj ? "true" : "false") << "\n"
      << "mj_levels=";
  for (std::size_t k = 0; k < c.mj_levels.size(); ++k) out << (k ? "," : "") << c.mj_levels[k];
  out << "\n"
      << "variance=" << (c.variance ? "true" : "false") << "\n"
      << "variance_max_n=" << c.variance_max_n << "\n"
      << "variance_H=" << c.variance_H << "\n";
  return out.str();
}

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex16(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace

std::string config_hash(const ExperimentConfig& config) {
  return hex16(fnv1a(format_config(config)));
}

IntegerSequence experiment_sequence(const ExperimentConfig& c) {
  const std::size_t n = c.N.back();
  if (c.constructed()) return assemble_sequence(c.plan, n);
  return reference_sequence(parse_reference_kind(c.sequence), c.reference, n);
}

std::uint32_t experiment_precision(const ExperimentConfig& c, const IntegerSequence& seq) {
  const std::size_t bits = seq.max_bit_length();
  if (!c.precision) return static_cast<std::uint32_t>(std::max<std::size_t>(bits + kGuardBits, kGuardBits));
  const std::uint32_t p = *c.precision;
  if (p < kGuardBits || bits > p - kGuardBits) {
    throw PrecisionError("precision " + std::to_string(p) + " is too small for N = " +
                         std::to_string(seq.size()) + ": the largest a_n has " +
                         std::to_string(bits) + " bits, so at least " +
                         std::to_string(bits + kGuardBits) + " are needed");
  }
  return p;
}

namespace {

void write_row(std::ostream& out, const ResultRow& r) {
  out << r.alpha_id << ',' << r.N << ',' << r.s.get_num().get_str() << ','
      << r.s.get_den().get_str() << ',' << to_string(r.R);
  for (int k = 0; k < 4; ++k) {
    out << ',';
    if (r.classes) out << to_string((*r.classes)[k]);
  }
  out << '\n';
}

constexpr const char* kRowsHeader = "alpha_id,N,s_num,s_den,R,R_GG,R_AG,R_AAdiff,R_AAsame";

bool row_less(const ResultRow& a, const ResultRow& b) {
  if (a.alpha_id != b.alpha_id) return a.alpha_id < b.alpha_id;
  if (a.N != b.N) return a.N < b.N;
  return a.s < b.s;
}

}  // namespace

std::vector<ResultRow> read_rows(const fs::path& csv) {
  std::vector<ResultRow> rows;
  std::ifstream in(csv);
  if (!in) return rows;
  std::string line;
  std::getline(in, line);
  if (trim(line) != kRowsHeader) throw ConfigError(csv.string() + " has an unexpected header");
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 9) continue;  // a torn final line from an interrupted run
    try {
      ResultRow r;
      r.alpha_id = to_u64(parse_natural(f[0]));
      r.N = to_u64(parse_natural(f[1]));
      r.s = Rational(parse_natural(f[2]), parse_natural(f[3]));
      r.s.canonicalize();
      r.R = parse_rational(f[4]);
      if (!f[5].empty()) {
        std::array<Rational, 4> cls;
        for (int k = 0; k < 4; ++k) cls[k] = parse_rational(f[5 + k]);
        r.classes = cls;
      }
      rows.push_back(std::move(r));
    } catch (const ConfigError&) {
      // torn line
    }
  }
  return rows;
}

void write_rows(const fs::path& csv, std::vector<ResultRow> rows) {
  std::sort(rows.begin(), rows.end(), row_less);
  const fs::path tmp = csv.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << kRowsHeader << '\n';
    for (const auto& r : rows) write_row(out, r);
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, csv);
}

std::vector<EnergyRow> boundary_energies(const SequencePlan& plan, std::size_t max_n,
                                         std::uint64_t pair_budget) {
  const auto blocks = build_blocks(plan);
  const auto bounds = block_boundaries(blocks);
  const double exponent = 0.75 + plan.epsilon.get_d();
  std::vector<EnergyRow> out;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const int J = blocks[k].level;
    if (J - 1 < plan.j0) continue;
    const std::size_t n = bounds[k];
    if (n > max_n) break;
    EnergyRow row;
    row.N = n;
    row.J = J;
    // blocks alternate G(j), A(j) from j0
    row.M = blocks[static_cast<std::size_t>(2 * (J - 1 - plan.j0) + 1)].count;
    const Natural m(static_cast<unsigned long>(row.M));
    row.analytic = (2 * m * m * m + m) / 3;
    row.log_factor = std::pow(std::log(static_cast<double>(n)), exponent);
    const auto seq = assemble_from_blocks(blocks, n, plan.bit_budget);
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n + 1) / 2;
    if (pairs <= pair_budget) row.E = additive_energy(seq.values(), pair_budget);
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

double cube_ratio(const Natural& e, double log_factor, std::size_t n) {
  const double nd = static_cast<double>(n);
  return e.get_d() * log_factor / (nd * nd * nd);
}

void write_energy_csv(const fs::path& path, const std::vector<EnergyRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  out << "N,J,M,E,analytic,ratio,analytic_ratio,bound_holds\n";
  out << std::setprecision(10);
  for (const auto& r : rows) {
    out << r.N << ',' << r.J << ',' << r.M << ',' << (r.E ? r.E->get_str() : "") << ','
        << r.analytic.get_str() << ',';
    if (r.E) out << cube_ratio(*r.E, r.log_factor, r.N);
    out << ',' << cube_ratio(r.analytic, r.log_factor, r.N) << ',';
    if (r.E) out << (*r.E >= r.analytic ? "true" : "false");
    out << '\n';
  }
}

void check_config_file(const ExperimentConfig& c) {
  fs::create_directories(c.out);
  const fs::path cfg = c.out / "config.txt";
  const std::string text = format_config(c);
  if (fs::exists(cfg)) {
    std::ifstream in(cfg);
    std::stringstream ss;
    ss << in.rdbuf();
    if (ss.str() != text) {
      throw ConfigError("output directory " + c.out.string() +
                        " holds results of a different config; use a fresh directory");
    }
    return;
  }
  std::ofstream out(cfg);
  out << text;
}

}  // namespace

ResultSet run_experiment(const ExperimentConfig& c) {
  c.validate();
  const auto seq = experiment_sequence(c);
  const std::uint32_t precision = experiment_precision(c, seq);
  check_config_file(c);

  const fs::path rows_path = c.out / "rows.csv";
  // Keep only (alpha_id, N) pairs whose whole s grid made it to disk.
  std::map<std::pair<std::uint64_t, std::size_t>, std::vector<ResultRow>> by_item;
  for (auto& r : read_rows(rows_path)) by_item[{r.alpha_id, r.N}].push_back(std::move(r));
  const std::set<Rational> wanted_s(c.s_grid.begin(), c.s_grid.end());
  std::set<std::pair<std::uint64_t, std::size_t>> done;
  ResultSet result;
  for (auto& [key, rows] : by_item) {
    std::set<Rational> have;
    for (const auto& r : rows) have.insert(r.s);
    if (have == wanted_s && rows.size() == wanted_s.size()) {
      done.insert(key);
      for (auto& r : rows) result.rows.push_back(std::move(r));
    }
  }
  result.skipped = done.size();
  write_rows(rows_path, result.rows);

  const bool classes = c.decomposition && c.constructed();
  std::ofstream appender(rows_path, std::ios::app);
  std::ostringstream mj_out;
  mj_out << "alpha_id,j,s_num,s_den,modulus,Q,count,route\n";
  std::optional<ModuliSchedule> schedule;
  if (c.mj) {
    int lo = c.plan.j0, hi = c.plan.jmax;
    for (int j : c.mj_levels) {
      lo = std::min(lo, j);
      hi = std::max(hi, j);
    }
    schedule = build_moduli(c.plan.moduli_mode, lo, hi, c.plan.moduli_exponent(),
                            c.plan.moduli_fallback);
  }

  for (std::uint64_t a = 0; a < c.n_alpha; ++a) {
    std::size_t need = 0;
    for (auto n : c.N) {
      if (!done.count({a, n})) need = std::max(need, n);
    }
    if (need == 0 && !c.mj) continue;
    const DyadicAlpha alpha = sample_alpha(mix_seed(c.seed, a), precision);
    if (need > 0) {
      const FractionalParts all(seq, alpha, need);
      for (auto n : c.N) {
        if (n > need || done.count({a, n})) continue;
        const auto parts = all.prefix(n);
        const auto pc = classes ? decompose_paircorr(parts, seq, c.s_grid)
                                : pair_correlation(parts, c.s_grid);
        for (std::size_t k = 0; k < c.s_grid.size(); ++k) {
          ResultRow row{a, n, c.s_grid[k], pc.R[k], std::nullopt};
          if (pc.classes) {
            std::array<Rational, 4> cls;
            for (int cl = 0; cl < 4; ++cl) cls[cl] = (*pc.classes)[cl][k];
            row.classes = cls;
          }
          write_row(appender, row);
          result.rows.push_back(std::move(row));
        }
        appender.flush();
      }
    }
    if (c.mj) {
      for (int j : c.mj_levels) {
        const std::uint64_t m = schedule->modulus(j);
        const Alpha al(alpha);
        al.require_precision(bit_length(mj_bound(j, c.plan.epsilon) * m));
        for (const auto& s : c.s_grid) {
          const auto set = compute_Mj_cf(al, j, s, m, c.plan.epsilon);
          static const char* routes[] = {"all", "bruteforce", "convergents", "first_hit"};
          mj_out << a << ',' << j << ',' << s.get_num().get_str() << ',' << s.get_den().get_str()
                 << ',' << m << ',' << set.Q.get_str() << ',' << set.members.size() << ','
                 << routes[static_cast<int>(set.route)] << '\n';
        }
      }
    }
  }
  appender.close();
  write_rows(rows_path, result.rows);
  std::sort(result.rows.begin(), result.rows.end(), row_less);

  if (c.mj) {
    std::ofstream out(c.out / "mj.csv", std::ios::trunc);
    out << mj_out.str();
  }
  if (c.variance) {
    std::ofstream out(c.out / "variance.csv", std::ios::trunc);
    out << "N,s_num,s_den,class,value,var_R,error_bound,diagonal,off_diagonal,"
           "off_diagonal_computed,off_diagonal_H\n";
    out << std::setprecision(12);
    for (auto n : c.N) {
      if (n > c.variance_max_n) break;
      for (auto filter : {RepFilter::AG, RepFilter::AAdiff}) {
        const auto rep = representation_counts(seq, n, filter);
        for (const auto& s : c.s_grid) {
          const auto est = variance_fourier(rep, s, n, c.variance_H);
          out << n << ',' << s.get_num().get_str() << ',' << s.get_den().get_str() << ','
              << filter_name(filter) << ',' << est.value << ',' << 4 * est.value << ','
              << est.error_bound << ',' << est.diagonal << ',' << est.off_diagonal << ','
              << (est.off_diagonal_computed ? "true" : "false") << ',' << est.off_diagonal_H
              << '\n';
        }
      }
    }
  }
  if (c.energy) {
    result.energy = boundary_energies(c.plan, c.energy_max_n, kDefaultPairBudget);
    write_energy_csv(c.out / "energy.csv", result.energy);
  }
  return result;
}

namespace {

struct Moments {
  std::size_t n = 0;
  Rational mean;
  Rational variance;  // unbiased; 0 for a single sample
};

Moments moments(const std::vector<Rational>& xs) {
  Moments m;
  m.n = xs.size();
  if (xs.empty()) return m;
  Rational sum = 0;
  for (const auto& x : xs) sum += x;
  m.mean = sum / static_cast<long>(xs.size());
  if (xs.size() > 1) {
    Rational ss = 0;
    for (const auto& x : xs) ss += (x - m.mean) * (x - m.mean);
    m.variance = ss / static_cast<long>(xs.size() - 1);
  }
  return m;
}

// Least-squares slope of log y against log x over points with y > 0.
std::optional<double> loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  std::vector<std::pair<double, double>> lp;
  for (auto [x, y] : pts) {
    if (x > 0 && y > 0) lp.emplace_back(std::log(x), std::log(y));
  }
  if (lp.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (auto [x, y] : lp) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(lp.size());
  my /= static_cast<double>(lp.size());
  double sxx = 0, sxy = 0;
  for (auto [x, y] : lp) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

}  // namespace

std::string summarize(const fs::path& dir) {
  using nlohmann::json;
  auto rows = read_rows(dir / "rows.csv");
  if (rows.empty()) throw ConfigError("no result rows in " + dir.string());
  std::sort(rows.begin(), rows.end(), row_less);

  std::string cfg_text;
  if (std::ifstream in(dir / "config.txt"); in) {
    std::stringstream ss;
    ss << in.rdbuf();
    cfg_text = ss.str();
  }

  std::set<std::uint64_t> alphas;
  // (N, s) -> column -> samples; column 0 is R, 1..4 the classes.
  std::map<std::pair<std::size_t, Rational>, std::array<std::vector<Rational>, 5>> groups;
  bool have_classes = true;
  for (const auto& r : rows) {
    alphas.insert(r.alpha_id);
    auto& g = groups[{r.N, r.s}];
    g[0].push_back(r.R);
    if (r.classes) {
      for (int k = 0; k < 4; ++k) g[1 + k].push_back((*r.classes)[k]);
    } else {
      have_classes = false;
    }
  }

  static const char* names[] = {"R", "GG", "AG", "AAdiff", "AAsame"};
  const int columns = have_classes ? 5 : 1;
  json table = json::array();
  // s -> column -> (N, variance) for slopes and trends
  std::map<Rational, std::array<std::vector<std::pair<double, double>>, 5>> series;
  for (const auto& [key, g] : groups) {
    json entry;
    entry["N"] = key.first;
    entry["s"] = to_string(key.second);
    entry["n"] = g[0].size();
    for (int k = 0; k < columns; ++k) {
      const auto m = moments(g[k]);
      entry[names[k]] = {{"mean", m.mean.get_d()},
                         {"mean_exact", to_string(m.mean)},
                         {"variance", m.variance.get_d()},
                         {"std_error", m.n > 0 ? std::sqrt(m.variance.get_d() / static_cast<double>(m.n)) : 0.0}};
      series[key.second][k].emplace_back(static_cast<double>(key.first), m.variance.get_d());
    }
    table.push_back(std::move(entry));
  }

  json slopes = json::object();
  for (const auto& [s, cols] : series) {
    json per_s = json::object();
    for (int k = 0; k < columns; ++k) {
      const auto slope = loglog_slope(cols[k]);
      bool non_increasing = true;
      for (std::size_t i = 1; i < cols[k].size(); ++i) {
        if (cols[k][i].second > cols[k][i - 1].second) non_increasing = false;
      }
      per_s[names[k]] = {{"variance_slope", slope ? json(*slope) : json(nullptr)},
                         {"variance_non_increasing", non_increasing}};
    }
    slopes[to_string(s)] = std::move(per_s);
  }

  json energy = json::array();
  if (std::ifstream in(dir / "energy.csv"); in) {
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      auto f = split(line, ',');
      if (f.size() != 8) continue;
      energy.push_back({{"N", f[0]}, {"J", f[1]}, {"M", f[2]}, {"E", f[3]}, {"analytic", f[4]},
                        {"ratio", f[5]}, {"analytic_ratio", f[6]}, {"bound_holds", f[7]}});
    }
  }

  json summary;
  summary["config_hash"] = hex16(fnv1a(cfg_text));
  summary["n_alpha"] = alphas.size();
  summary["tables"] = {{"pair_correlation", table}, {"variance_trend", slopes}, {"energy", energy}};
  const std::string text = summary.dump(2) + "\n";
  std::ofstream out(dir / "summary.json", std::ios::trunc);
  out << text;
  return text;
}

}  // namespace metricpc
