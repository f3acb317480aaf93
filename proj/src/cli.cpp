#include "metricpc/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "metricpc/construction.hpp"
#include "metricpc/diophantine.hpp"
#include "metricpc/energy.hpp"
#include "metricpc/errors.hpp"
#include "metricpc/fourier.hpp"
#include "metricpc/harness.hpp"
#include "metricpc/paircorr.hpp"
#include "metricpc/sequence.hpp"

namespace metricpc {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Options shared by the subcommands that need a sequence.
struct SequenceOptions {
  std::string plan_file;
  std::string mode;
  std::string moduli;
  int j0 = 0, jmax = 0;
  std::string epsilon;
  std::string ref;
  std::uint64_t ref_exponent = 2, ref_base = 2;
  std::string values;

  void add_to(CLI::App* app) {
    app->add_option("--plan", plan_file, "Plan file (key=value)");
    app->add_option("--mode", mode, "Block gaps: faithful|surrogate")
        ->check(CLI::IsMember({"faithful", "surrogate"}));
    app->add_option("--moduli", moduli, "Moduli schedule: faithful|greedy")
        ->check(CLI::IsMember({"faithful", "greedy"}));
    app->add_option("--j0", j0, "First block level");
    app->add_option("--jmax", jmax, "Last block level");
    app->add_option("--epsilon", epsilon, "epsilon as p/q");
    app->add_option("--ref", ref, "Reference sequence: linear|power|lacunary|primes");
    app->add_option("--ref-exponent", ref_exponent, "Exponent d for the power reference n^d");
    app->add_option("--ref-base", ref_base, "Base b for the lacunary reference b^n");
    app->add_option("--values", values, "Explicit increasing values, comma separated");
  }

  bool constructed() const { return ref.empty() && values.empty(); }

  SequencePlan plan() const {
    SequencePlan p = plan_file.empty() ? SequencePlan{} : load_plan(plan_file);
    if (!mode.empty()) apply_plan_key(p, "mode", mode);
    if (!moduli.empty()) apply_plan_key(p, "moduli_mode", moduli);
    if (j0 > 0) p.j0 = j0;
    if (jmax > 0) p.jmax = jmax;
    if (!epsilon.empty()) p.epsilon = parse_rational(epsilon);
    p.validate();
    return p;
  }

  IntegerSequence build(std::size_t n) const {
    if (!values.empty()) {
      ReferenceParams params;
      for (const auto& v : split_list(values)) params.custom.push_back(parse_natural(v));
      if (n == 0) n = params.custom.size();
      return reference_sequence(ReferenceKind::Custom, params, n);
    }
    if (!ref.empty()) {
      ReferenceParams params;
      params.exponent = ref_exponent;
      params.base = ref_base;
      return reference_sequence(parse_reference_kind(ref), params, n);
    }
    return assemble_sequence(plan(), n);
  }
};

struct AlphaOptions {
  std::string alpha;
  std::uint64_t seed = 1;
  std::uint32_t precision = 0;

  void add_to(CLI::App* app) {
    app->add_option("--alpha", alpha, "alpha as 0xHEX/2^P or p/q");
    app->add_option("--seed", seed, "Seed for a sampled dyadic alpha (when --alpha is absent)");
    app->add_option("--precision", precision, "Bits P of the sampled alpha (default: auto)");
  }

  Alpha get(std::size_t auto_bits) const {
    if (!alpha.empty()) return parse_alpha(alpha);
    const std::uint32_t p =
        precision != 0 ? precision : static_cast<std::uint32_t>(auto_bits + kGuardBits);
    return sample_alpha(seed, p);
  }
};

std::vector<Rational> parse_s_list(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& x : split_list(s)) out.push_back(parse_rational(x));
  if (out.empty()) throw ConfigError("--s needs at least one value");
  return out;
}

std::vector<std::size_t> parse_n_list(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& x : split_list(s)) out.push_back(to_u64(parse_natural(x)));
  if (out.empty()) throw ConfigError("--N needs at least one value");
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact pair correlations, additive energy and continued fractions for (a_n alpha) mod 1.\n"
               "alpha literals: 0xHEX/2^P (dyadic) or p/q (rational); s values are exact p/q."};
  app.name("metricpc");
  app.require_subcommand(1);
  std::function<void()> action;

  // generate
  SequenceOptions gen_seq;
  std::size_t gen_n = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write the first N elements with provenance as CSV");
  gen_seq.add_to(gen);
  gen->add_option("--N", gen_n, "Number of elements")->required();
  gen->add_option("--out", gen_out, "Output CSV file (default: stdout)");
  gen->callback([&] {
    action = [&] {
      const auto seq = gen_seq.build(gen_n);
      if (gen_out.empty()) {
        write_sequence_csv(out, seq);
      } else {
        std::ofstream f(gen_out);
        if (!f) throw ConfigError("cannot write " + gen_out);
        write_sequence_csv(f, seq);
      }
    };
  });

  // energy
  SequenceOptions en_seq;
  std::uint64_t en_ap = 0;
  std::size_t en_n = 0;
  bool en_diff = false;
  auto* en = app.add_subcommand("energy", "Additive energy of a finite set");
  en_seq.add_to(en);
  en->add_option("--ap", en_ap, "Use the progression 0, 1, ..., M-1");
  en->add_option("--N", en_n, "Prefix length of the sequence");
  en->add_flag("--differences", en_diff, "Count via signed differences instead of sums");
  en->callback([&] {
    action = [&] {
      std::vector<Natural> a;
      if (en_ap > 0) {
        for (std::uint64_t k = 0; k < en_ap; ++k) a.emplace_back(static_cast<unsigned long>(k));
      } else {
        if (en_n == 0 && en_seq.values.empty()) throw ConfigError("energy needs --ap, --values or --N");
        a = en_seq.build(en_n).values();
      }
      out << (en_diff ? additive_energy_differences(a) : additive_energy(a)).get_str() << "\n";
    };
  });

  // paircorr / decompose
  SequenceOptions pc_seq, dc_seq;
  AlphaOptions pc_alpha, dc_alpha;
  std::string pc_n, pc_s = "1", dc_n, dc_s = "1";
  bool pc_brute = false;
  auto* pc = app.add_subcommand("paircorr", "Pair correlation R(s, N), exact");
  pc_seq.add_to(pc);
  pc_alpha.add_to(pc);
  pc->add_option("--N", pc_n, "N values, comma separated")->required();
  pc->add_option("--s", pc_s, "s values as p/q, comma separated");
  pc->add_flag("--bruteforce", pc_brute, "Use the O(N^2) double loop");
  auto* dc = app.add_subcommand("decompose", "R(s, N) split into GG, AG, AAdiff, AAsame");
  dc_seq.add_to(dc);
  dc_alpha.add_to(dc);
  dc->add_option("--N", dc_n, "N values, comma separated")->required();
  dc->add_option("--s", dc_s, "s values as p/q, comma separated");

  auto paircorr_action = [&](SequenceOptions& so, AlphaOptions& ao, const std::string& n_list,
                             const std::string& s_list, bool classes, bool brute) {
    const auto ns = parse_n_list(n_list);
    const auto s_grid = parse_s_list(s_list);
    const std::size_t nmax = *std::max_element(ns.begin(), ns.end());
    const auto seq = so.build(nmax);
    const Alpha alpha = ao.get(seq.max_bit_length());
    write_paircorr_csv_header(out);
    for (auto n : ns) {
      PairCorrResult r;
      if (brute) {
        r.N = n;
        r.s_grid = s_grid;
        for (const auto& s : s_grid) r.R.push_back(pair_correlation_bruteforce(seq, alpha, s, n));
      } else if (classes) {
        r = decompose_paircorr(seq, alpha, s_grid, n);
      } else {
        r = pair_correlation(seq, alpha, s_grid, n);
      }
      write_paircorr_csv(out, r);
    }
  };
  pc->callback([&] { action = [&] { paircorr_action(pc_seq, pc_alpha, pc_n, pc_s, false, pc_brute); }; });
  dc->callback([&] { action = [&] { paircorr_action(dc_seq, dc_alpha, dc_n, dc_s, true, false); }; });

  // cf
  std::string cf_alpha;
  std::size_t cf_terms = 0;
  auto* cf = app.add_subcommand("cf", "Continued fraction: quotients, then one convergent per line");
  cf->add_option("--alpha", cf_alpha, "alpha as 0xHEX/2^P or p/q")->required();
  cf->add_option("--max-terms", cf_terms, "Stop after this many quotients");
  cf->callback([&] {
    action = [&] {
      const auto e = cf_expand(parse_alpha(cf_alpha), cf_terms == 0 ? kAllTerms : cf_terms);
      for (std::size_t k = 0; k < e.partial_quotients.size(); ++k) {
        out << (k ? " " : "") << e.partial_quotients[k].get_str();
      }
      out << "\n";
      for (const auto& c : e.convergents) out << c.p.get_str() << "/" << c.q.get_str() << "\n";
    };
  });

  // mj
  AlphaOptions mj_alpha;
  int mj_j = 0;
  std::string mj_s = "1", mj_eps = "1/100", mj_method = "cf", mj_moduli = "greedy";
  std::uint64_t mj_m = 0;
  auto* mj = app.add_subcommand("mj", "Members of M_j, one per line");
  mj_alpha.add_to(mj);
  mj->add_option("--j", mj_j, "Level j")->required();
  mj->add_option("--s", mj_s, "s as p/q");
  mj->add_option("--m", mj_m, "Modulus (default: m_j of the moduli schedule)");
  mj->add_option("--moduli", mj_moduli, "Schedule for the default modulus")
      ->check(CLI::IsMember({"faithful", "greedy"}));
  mj->add_option("--epsilon", mj_eps, "epsilon as p/q");
  mj->add_option("--method", mj_method, "cf|bruteforce")->check(CLI::IsMember({"cf", "bruteforce"}));
  mj->callback([&] {
    action = [&] {
      const Rational eps = parse_rational(mj_eps);
      std::uint64_t m = mj_m;
      if (m == 0) {
        const auto mode = mj_moduli == "faithful" ? ModuliMode::Faithful : ModuliMode::GreedyWindow;
        m = build_moduli(mode, mode == ModuliMode::Faithful ? std::max(16, mj_j) : 1, mj_j, Rational(1, 4),
                         WindowFallback::LeastRecent)
                .modulus(mj_j);
      }
      const Natural q = mj_bound(mj_j, eps);
      const Alpha alpha = mj_alpha.get(bit_length(q * m));
      alpha.require_precision(bit_length(q * m));
      const auto set = mj_method == "cf" ? compute_Mj_cf(alpha, mj_j, parse_rational(mj_s), m, eps)
                                         : compute_Mj_bruteforce(alpha, mj_j, parse_rational(mj_s), m, eps);
      for (const auto& x : set.members) out << x.get_str() << "\n";
      if (set.large) err << "note: " << set.members.size() << " members, more than 10 j^(1/4)\n";
    };
  });

  // events
  AlphaOptions ev_alpha;
  int ev_lo = 16, ev_hi = 24;
  std::string ev_moduli = "greedy";
  bool ev_measure = false;
  auto* ev = app.add_subcommand("events", "Divisibility events m_j | q_n, q_n/m_j in [2^j/j^2, 2^j]");
  ev_alpha.add_to(ev);
  ev->add_option("--jlo", ev_lo, "First level");
  ev->add_option("--jhi", ev_hi, "Last level");
  ev->add_option("--moduli", ev_moduli, "faithful|greedy")->check(CLI::IsMember({"faithful", "greedy"}));
  ev->add_flag("--measure", ev_measure, "Print the measure sum instead of the events");
  ev->callback([&] {
    action = [&] {
      const auto mode = ev_moduli == "faithful" ? ModuliMode::Faithful : ModuliMode::GreedyWindow;
      const auto sched = build_moduli(mode, mode == ModuliMode::Faithful ? std::max(16, ev_lo) : 1, ev_hi,
                                      Rational(1, 4), WindowFallback::LeastRecent);
      if (ev_measure) {
        out << std::setprecision(12) << divisibility_measure(sched, ev_lo, ev_hi) << "\n";
        return;
      }
      const Alpha alpha = ev_alpha.get(static_cast<std::size_t>(2 * ev_hi + 8));
      out << "j,n,q,m,k\n";
      for (const auto& e : divisibility_events(alpha, sched, ev_lo, ev_hi)) {
        out << e.j << ',' << e.n << ',' << e.q.get_str() << ',' << e.modulus << ','
            << e.k.get_str() << "\n";
      }
    };
  });

  // cuv
  std::string cuv_u, cuv_v, cuv_s = "1";
  std::uint64_t cuv_n = 100, cuv_h = 1000000;
  auto* cuv = app.add_subcommand("cuv", "Truncated C(u, v) and its tail bound");
  cuv->add_option("--u", cuv_u, "u >= 1")->required();
  cuv->add_option("--v", cuv_v, "v >= 1")->required();
  cuv->add_option("--s", cuv_s, "s as p/q");
  cuv->add_option("--N", cuv_n, "N");
  cuv->add_option("--H", cuv_h, "Truncation H");
  cuv->callback([&] {
    action = [&] {
      const auto c = fourier_C(parse_natural(cuv_u), parse_natural(cuv_v), parse_rational(cuv_s), cuv_n, cuv_h);
      out << "value,tail_bound\n" << std::setprecision(17) << c.value << ',' << c.tail_bound << "\n";
    };
  });

  // experiment
  std::string ex_config, ex_out;
  auto* ex = app.add_subcommand("experiment", "Run an experiment config, then summarize it");
  ex->add_option("--config", ex_config, "Config file (key=value)")->required();
  ex->add_option("--out", ex_out, "Output directory (overrides the config)");
  ex->callback([&] {
    action = [&] {
      auto cfg = load_config(ex_config);
      if (!ex_out.empty()) cfg.out = ex_out;
      const auto result = run_experiment(cfg);
      summarize(cfg.out);
      out << "rows " << result.rows.size() << " (" << result.skipped
          << " alpha/N pairs resumed), written to " << cfg.out.string() << "\n";
    };
  });

  // summarize
  std::string sum_dir;
  auto* sum = app.add_subcommand("summarize", "Write summary.json for a result directory");
  sum->add_option("--dir", sum_dir, "Result directory")->required();
  sum->callback([&] { action = [&] { out << summarize(sum_dir); }; });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (action) action();
    return 0;
  } catch (const PrecisionError& e) {
    err << "precision error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run_cli(args, out, err);
}

}  // namespace metricpc
