#pragma once

// Experiment runner: samples alphas, sweeps N, writes per-(alpha, N, s) rows
// and summaries. Output directory layout:
//   config.txt   canonical config (its hash guards resumption)
//   rows.csv     alpha_id,N,s_num,s_den,R,R_GG,R_AG,R_AAdiff,R_AAsame
//   energy.csv   block-boundary energies (constructed sequences)
//   mj.csv       M_j sizes, variance.csv Fourier variances (when enabled)
//   summary.json written by summarize()

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metricpc/construction.hpp"
#include "metricpc/paircorr.hpp"
#include "metricpc/sequence.hpp"

namespace metricpc {

struct ExperimentConfig {
  // "constructed" or a reference kind (linear, power, lacunary, primes).
  std::string sequence = "constructed";
  SequencePlan plan;
  ReferenceParams reference;

  std::uint64_t n_alpha = 10;
  std::uint64_t seed = 1;
  std::optional<std::uint32_t> precision;  // auto: max bit length + 64

  std::vector<std::size_t> N;  // ascending, deduplicated
  std::vector<Rational> s_grid{Rational(1, 2), Rational(1), Rational(2)};

  bool decomposition = true;
  bool energy = false;
  std::size_t energy_max_n = 11'585;
  bool mj = false;
  std::vector<int> mj_levels{16, 20, 24};
  bool variance = false;
  std::size_t variance_max_n = 2048;
  std::uint64_t variance_H = 10'000;

  std::filesystem::path out = "results";

  bool constructed() const { return sequence == "constructed"; }
  // Throws ConfigError.
  void validate() const;
};

// Desk schedule 2^lo .. 2^hi.
std::vector<std::size_t> pow2_schedule(int lo, int hi);
// N_m = floor(exp(m^(1 / (1 + epsilon/2)))) for m in [m_lo, m_hi], deduplicated.
std::vector<std::size_t> nm_schedule(const Rational& epsilon, int m_lo, int m_hi);

// key=value lines; plan keys are accepted inline, plan=FILE loads a plan file.
// N accepts a list "1024,2048", "pow2:10:19" or "nm:m_lo:m_hi".
ExperimentConfig parse_config(std::string_view text,
                              const std::filesystem::path& base_dir = std::filesystem::path());
ExperimentConfig load_config(const std::filesystem::path& path);
std::string format_config(const ExperimentConfig& config);
// FNV-1a 64 of format_config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

struct ResultRow {
  std::uint64_t alpha_id = 0;
  std::size_t N = 0;
  Rational s;
  Rational R;
  std::optional<std::array<Rational, 4>> classes;
};

struct EnergyRow {
  std::size_t N = 0;
  int J = 0;
  std::uint64_t M = 0;  // #P_A(J - 1)
  std::optional<Natural> E;
  Natural analytic;     // (2M^3 + M) / 3
  double log_factor = 0;  // (ln N)^(3/4 + epsilon)
};

struct ResultSet {
  std::vector<ResultRow> rows;
  std::vector<EnergyRow> energy;
  std::size_t skipped = 0;  // (alpha_id, N) pairs found complete on disk
};

// The sequence an experiment runs on, long enough for the largest N.
IntegerSequence experiment_sequence(const ExperimentConfig& config);
// Precision actually used for the sampled alphas.
std::uint32_t experiment_precision(const ExperimentConfig& config, const IntegerSequence& seq);

// Deterministic per seed; resumable (complete (alpha_id, N) pairs already in
// rows.csv are skipped); rows.csv is rewritten sorted by (alpha_id, N, s) at
// the end.
ResultSet run_experiment(const ExperimentConfig& config);

// Energy at block boundaries N <= max_n, with the arithmetic-block lower bound.
std::vector<EnergyRow> boundary_energies(const SequencePlan& plan, std::size_t max_n,
                                         std::uint64_t pair_budget);

std::vector<ResultRow> read_rows(const std::filesystem::path& csv);
void write_rows(const std::filesystem::path& csv, std::vector<ResultRow> rows);

// Reads rows.csv (and energy.csv when present) from result_dir, writes
// summary.json and returns its text. Throws ConfigError when there are no rows.
std::string summarize(const std::filesystem::path& result_dir);

}  // namespace metricpc
