#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "metricpc/cli.hpp"
#include "metricpc/construction.hpp"
#include "metricpc/diophantine.hpp"
#include "metricpc/energy.hpp"
#include "metricpc/errors.hpp"
#include "metricpc/fourier.hpp"
#include "metricpc/harness.hpp"
#include "metricpc/paircorr.hpp"
#include "metricpc/sequence.hpp"

namespace py = pybind11;
using namespace metricpc;

// Big integers and rationals cross the boundary as Python ints and
// fractions.Fraction, via their decimal strings.
namespace {

py::object to_py(const Natural& n) { return py::int_(py::str(n.get_str())); }

py::object to_py(const Rational& q) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(to_py(q.get_num()), to_py(q.get_den()));
}

Natural nat(const py::handle& h) { return Natural(py::str(h).cast<std::string>(), 10); }

Rational rat(const py::handle& h) {
  if (py::isinstance<py::str>(h)) return parse_rational(h.cast<std::string>());
  if (py::hasattr(h, "denominator")) {
    Rational q(nat(h.attr("numerator")), nat(h.attr("denominator")));
    q.canonicalize();
    return q;
  }
  return Rational(nat(h));
}

std::vector<Natural> nats(const py::iterable& xs) {
  std::vector<Natural> out;
  for (auto x : xs) out.push_back(nat(x));
  return out;
}

std::vector<Rational> rats(const py::iterable& xs) {
  std::vector<Rational> out;
  for (auto x : xs) out.push_back(rat(x));
  return out;
}

Alpha alpha_of(const py::handle& h) {
  if (py::isinstance<py::str>(h)) return parse_alpha(h.cast<std::string>());
  return RationalAlpha(rat(h));
}

IntegerSequence sequence_of(const std::string& kind, std::size_t n, const py::dict& opts) {
  if (kind == "constructed") {
    SequencePlan plan;
    for (auto [k, v] : opts) apply_plan_key(plan, py::str(k).cast<std::string>(), py::str(v).cast<std::string>());
    plan.validate();
    return assemble_sequence(plan, n);
  }
  ReferenceParams params;
  if (opts.contains("exponent")) params.exponent = opts["exponent"].cast<std::uint64_t>();
  if (opts.contains("base")) params.base = opts["base"].cast<std::uint64_t>();
  if (opts.contains("values")) params.custom = nats(opts["values"]);
  return reference_sequence(parse_reference_kind(kind), params, n);
}

py::dict result_dict(const PairCorrResult& r) {
  py::dict d;
  d["N"] = r.N;
  py::list s, R;
  for (const auto& x : r.s_grid) s.append(to_py(x));
  for (const auto& x : r.R) R.append(to_py(x));
  d["s"] = s;
  d["R"] = R;
  if (r.classes) {
    for (auto c : kPairClasses) {
      py::list col;
      for (const auto& x : (*r.classes)[static_cast<int>(c)]) col.append(to_py(x));
      d[class_name(c)] = col;
    }
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_metricpc, m) {
  m.doc() = "Exact pair correlations, additive energy and continued fractions";

  static py::exception<Error> base_exc(m, "Error");
  static py::exception<ConfigError> config_exc(m, "ConfigError", base_exc.ptr());
  static py::exception<PrecisionError> precision_exc(m, "PrecisionError", base_exc.ptr());
  static py::exception<BudgetError> budget_exc(m, "BudgetError", base_exc.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_exc, e.what());
    } catch (const PrecisionError& e) {
      py::set_error(precision_exc, e.what());
    } catch (const BudgetError& e) {
      py::set_error(budget_exc, e.what());
    } catch (const Error& e) {
      py::set_error(base_exc, e.what());
    }
  });

  m.def("frac_mul", [](const py::handle& a, const py::handle& alpha) {
    const Alpha al = alpha_of(alpha);
    return to_py(Rational(al.residue(nat(a)), al.denominator()));
  }, py::arg("a"), py::arg("alpha"), "{a * alpha} as a Fraction");

  m.def("sample_alpha", [](std::uint64_t seed, std::uint32_t precision) {
    return sample_alpha(seed, precision).numerator().get_str(16);
  }, py::arg("seed"), py::arg("precision"), "Hex numerator t of a sampled alpha = t / 2^precision");

  m.def("sequence", [](const std::string& kind, std::size_t n, const py::dict& opts) {
    const auto seq = sequence_of(kind, n, opts);
    py::list out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const auto p = seq.provenance(i);
      out.append(py::make_tuple(to_py(seq.value(i)), p.level, std::string(1, kind_letter(p.kind)),
                                p.modulus ? py::object(py::int_(*p.modulus)) : py::object(py::none())));
    }
    return out;
  }, py::arg("kind"), py::arg("n"), py::arg("options") = py::dict(),
     "First n elements as (value, level, kind, modulus) tuples");

  m.def("moduli", [](const std::string& mode, int j0, int jmax, const std::string& fallback) {
    if (mode != "faithful" && mode != "greedy") throw ConfigError("unknown moduli mode '" + mode + "'");
    if (fallback != "error" && fallback != "least_recent") {
      throw ConfigError("unknown fallback '" + fallback + "' (error, least_recent)");
    }
    const auto s = build_moduli(mode == "faithful" ? ModuliMode::Faithful : ModuliMode::GreedyWindow, j0, jmax,
                                Rational(1, 4),
                                fallback == "error" ? WindowFallback::Error : WindowFallback::LeastRecent);
    py::dict out;
    for (const auto& e : s.entries()) out[py::int_(e.level)] = py::make_tuple(e.modulus, e.window);
    return out;
  }, py::arg("mode"), py::arg("j0"), py::arg("jmax"), py::arg("fallback") = "least_recent",
     "j -> (m_j, achieved window)");

  m.def("additive_energy", [](const py::iterable& a) { return to_py(additive_energy(nats(a))); },
        py::arg("values"));

  m.def("pair_correlation", [](const std::string& kind, std::size_t n, const py::handle& alpha,
                               const py::iterable& s, bool decompose, const py::dict& opts) {
    const auto seq = sequence_of(kind, n, opts);
    const Alpha al = alpha_of(alpha);
    const auto grid = rats(s);
    return result_dict(decompose ? decompose_paircorr(seq, al, grid, n) : pair_correlation(seq, al, grid, n));
  }, py::arg("kind"), py::arg("n"), py::arg("alpha"), py::arg("s"), py::arg("decompose") = false,
     py::arg("options") = py::dict());

  m.def("cf_expand", [](const py::handle& alpha) {
    const auto cf = cf_expand(alpha_of(alpha));
    py::list q, conv;
    for (const auto& a : cf.partial_quotients) q.append(to_py(a));
    for (const auto& c : cf.convergents) conv.append(to_py(Rational(c.p, c.q)));
    return py::make_tuple(q, conv);
  }, py::arg("alpha"), "(partial quotients, convergents)");

  m.def("mj", [](const py::handle& alpha, int j, const py::handle& s, std::uint64_t modulus,
                 const py::handle& epsilon, bool bruteforce) {
    const Alpha al = alpha_of(alpha);
    const auto set = bruteforce ? compute_Mj_bruteforce(al, j, rat(s), modulus, rat(epsilon))
                                : compute_Mj_cf(al, j, rat(s), modulus, rat(epsilon));
    py::list out;
    for (const auto& x : set.members) out.append(to_py(x));
    return out;
  }, py::arg("alpha"), py::arg("j"), py::arg("s"), py::arg("modulus"),
     py::arg("epsilon") = "1/100", py::arg("bruteforce") = false);

  m.def("fourier_C", [](const py::handle& u, const py::handle& v, const py::handle& s, std::uint64_t N,
                        std::uint64_t H) {
    const auto c = fourier_C(nat(u), nat(v), rat(s), N, H);
    return py::make_tuple(c.value, c.tail_bound);
  }, py::arg("u"), py::arg("v"), py::arg("s"), py::arg("N"), py::arg("H"), "(value, tail bound)");

  m.def("summarize", [](const std::string& dir) { return summarize(dir); }, py::arg("result_dir"));

  m.def("cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Run a CLI command in-process: (exit code, stdout, stderr)");
}
