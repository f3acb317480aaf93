// Regenerates the committed calibration tables used by the acceptance suite:
//   contrast_calibration.csv  spread of R(1, N) for a_n = n against a_n = 2^n
//   mj_calibration.csv        distribution of #M_j for random dyadic alphas
// Seeds differ from the acceptance run so the check is out of sample.
//
// usage: metricpc_calibrate OUTDIR

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <vector>

#include "metricpc/construction.hpp"
#include "metricpc/diophantine.hpp"
#include "metricpc/paircorr.hpp"
#include "metricpc/sequence.hpp"

using namespace metricpc;

namespace {

double sample_sd(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: metricpc_calibrate OUTDIR\n";
    return 2;
  }
  const std::string dir = argv[1];
  constexpr int kAlphas = 100;

  std::ofstream contrast(dir + "/contrast_calibration.csv");
  contrast << "N,n_alpha,sd_linear,sd_lacunary,ratio\n";
  for (std::size_t N : {512, 1024, 2048}) {
    const auto lin = reference_sequence(ReferenceKind::Linear, {}, N);
    const auto lac = reference_sequence(ReferenceKind::Lacunary, {}, N);
    std::vector<double> rl, rg;
    for (int a = 0; a < kAlphas; ++a) {
      const Alpha alpha = sample_alpha(mix_seed(7001, a), static_cast<std::uint32_t>(N + 128));
      rl.push_back(pair_correlation(lin, alpha, {Rational(1)}, N).R[0].get_d());
      rg.push_back(pair_correlation(lac, alpha, {Rational(1)}, N).R[0].get_d());
    }
    const double sl = sample_sd(rl), sg = sample_sd(rg);
    contrast << N << ',' << kAlphas << ',' << sl << ',' << sg << ',' << sl / sg << '\n';
  }

  SequencePlan plan;
  plan.jmax = 24;
  const auto sched = build_moduli(plan);
  std::ofstream mj(dir + "/mj_calibration.csv");
  mj << "j,n_alpha,modulus,q95,max,threshold\n";
  for (int j : {16, 20, 24}) {
    std::vector<double> sizes;
    for (int a = 0; a < kAlphas; ++a) {
      const Alpha alpha = sample_alpha(mix_seed(7013, a), 512);
      sizes.push_back(static_cast<double>(
          compute_Mj_cf(alpha, j, Rational(1), sched.modulus(j), plan.epsilon).members.size()));
    }
    std::sort(sizes.begin(), sizes.end());
    const double q95 = sizes[static_cast<std::size_t>(std::ceil(0.95 * kAlphas)) - 1];
    mj << j << ',' << kAlphas << ',' << sched.modulus(j) << ',' << q95 << ',' << sizes.back()
       << ',' << 10 * std::pow(j, 0.25) << '\n';
  }
  return 0;
}
