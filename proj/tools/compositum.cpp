#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "compositum/compositum.hpp"

using namespace compositum;

namespace {

struct Output {
  Json result;
  std::ostringstream text;
};

int trunc_from_env() {
  const char* env = std::getenv("COMPOSITUM_TRUNC");
  if (!env || !*env) return kDefaultTrunc;
  try {
    std::size_t used = 0;
    const int k = std::stoi(env, &used);
    if (used != std::string(env).size() || k < 1) throw std::invalid_argument("");
    return k;
  } catch (const std::exception&) {
    throw InputError(std::string("COMPOSITUM_TRUNC must be a positive integer, got '") + env + "'");
  }
}

void require_positive(int v, const char* what) {
  if (v < 1) throw InputError(std::string(what) + " must be positive");
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// ---- subcommands -----------------------------------------------------------

void cmd_classify(const std::string& ps, const std::string& qs, bool diagnostics, Output& out) {
  const Poly p = parse_nonconstant(ps), q = parse_nonconstant(qs);
  ClassifyOptions opt;
  opt.germ_diagnostics = diagnostics;
  const Classification c = classify_pair(p, q, opt);
  out.result = to_json(c);
  auto& t = out.text;
  t << "p = " << to_string(p) << "\nq = " << to_string(q) << "\n";
  t << "verdict: " << verdict_name(c.verdict) << "\n";
  t << "certificate: " << c.certificate << "\n";
  if (c.witness) {
    t << "w = " << to_string(c.witness->w) << "\n";
    t << "a = " << to_string(c.witness->a) << "   (a o p = w)\n";
    t << "b = " << to_string(c.witness->b) << "   (b o q = w)\n";
  }
  if (c.verdict != Verdict::RationalSolutions)
    t << "reduced pair: " << to_string(c.p_tilde) << " | " << to_string(c.q_tilde) << "  (degrees "
      << c.reduced_deg_p << ", " << c.reduced_deg_q << ")\n";
  if (c.standard) {
    t << "standard form: n = " << c.standard->n << ", m = " << c.standard->m << ", d = " << c.d
      << ", lattice rank " << c.lattice_rank << "\n";
    t << "  beta = " << to_string(c.standard->beta) << ", y_change = " << to_string(c.standard->y_change)
      << ", z_change = " << to_string(c.standard->z_change) << "\n";
  }
  if (c.germ_report) t << "germ diagnostic: " << c.germ_report->verdict << "\n";
}

void cmd_deck(const std::string& ps, int trunc, Output& out) {
  const Poly p = parse_nonconstant(ps);
  const auto group = deck_group(p, trunc);
  Json elems = Json::array();
  auto& t = out.text;
  t << "p = " << to_string(p) << "\ndeck group: cyclic of order " << group.size() << " (K = " << trunc << ")\n";
  for (std::size_t k = 0; k < group.size(); ++k) {
    const bool ok = deck_identity_holds(p, group[k]);
    Json e = to_json(group[k]);
    e["index"] = k;
    e["verified"] = ok;
    elems.push_back(e);
    t << "  h_" << k << " = " << group[k].str() << (ok ? "" : "   [identity check FAILED]") << "\n";
  }
  out.result = Json{{"order", group.size()}, {"elements", elems}};
}

void cmd_discreteness(const std::string& ps, const std::string& qs, int bound, int trunc, Output& out) {
  const Poly p = parse_nonconstant(ps), q = parse_nonconstant(qs);
  require_positive(bound, "--word-bound");
  const GermGroupReport r = discreteness_report(p, q, bound, trunc);
  out.result = to_json(r);
  auto& t = out.text;
  t << "verdict: " << r.verdict << "\n";
  t << "words of length <= " << r.word_bound << ", K = " << r.trunc_order << "\n";
  t << "new elements by word length:";
  for (auto n : r.elements_found) t << " " << n;
  t << "\nelements outside J_1: " << r.outside_j1 << "\n";
  for (const auto& v : r.lattice_verdicts)
    t << "level " << v.level << ": " << r.levels.at(v.level).size() << " residues, rank " << v.rank
      << (v.discrete ? ", discrete" : ", not discrete") << "\n";
}

void cmd_lattice(int n, int m, Output& out) {
  const ZModule L = translation_lattice(n, m);
  const bool fd = is_formally_discrete_standard(n, m);
  out.result = to_json(L);
  out.result["lcm"] = std::lcm(n, m);
  out.result["formally_discrete"] = fd;
  auto& t = out.text;
  t << "translation lattice of (z^" << n << ", (z+1)^" << m << "): " << L.str() << "\n";
  t << "rank " << L.rank() << ", lcm " << std::lcm(n, m) << ", formally discrete: " << (fd ? "yes" : "no") << "\n";
}

void cmd_relations(const std::string& form, int n, int m, Output& out) {
  std::vector<ExponentRelation> rels;
  if (form == "ba") rels = enumerate_relations_BA_AB(n, m);
  else if (form == "aba") rels = enumerate_relations_ABA_BAB(n, m);
  else throw InputError("--form must be 'ba' or 'aba'");
  Json list = Json::array();
  out.text << rels.size() << " relation" << (rels.size() == 1 ? "" : "s") << " of form "
           << (form == "ba" ? "BA = AB" : "ABA = BAB") << " for (" << n << ", " << m << ")\n";
  for (const auto& r : rels) {
    list.push_back(to_json(r));
    out.text << "  " << r.str() << "\n";
  }
  out.result = Json{{"form", form}, {"count", rels.size()}, {"relations", list}};
}

void cmd_lemma51(int n, Output& out) {
  const Lemma51Report r = lemma51_report(n);
  out.result = to_json(r);
  auto& t = out.text;
  t << "n = " << n << ": " << (r.ok() ? "holds" : "FAILS") << "\n";
  t << "  ABA=ABA solutions " << r.aba_aba_relations << " (identical tuples " << r.aba_aba_trivial
    << ", violations " << r.aba_aba_violations << ")\n";
  t << "  ABA=BAB solutions " << r.aba_bab_relations << " (with l1 = k1: " << r.aba_bab_violations
    << "), missing first-exponent pairs " << r.missing_first_exponents << "\n";
  t << "  commuting family " << r.commuting_family_holds << "/" << r.commuting_family << "\n";
}

void cmd_lemma52(int n_max, Output& out) {
  if (n_max < 3) throw InputError("--n-max must be at least 3");
  Json rows = Json::array();
  bool all = true;
  std::size_t candidates = 0;
  Rational worst = 10;
  for (int n = 3; n <= n_max; n += 2) {
    const Lemma52Report r = lemma52_report(n);
    rows.push_back(to_json(r));
    all = all && r.ok();
    candidates += r.candidates;
    if (r.min_rhs_trace < worst) worst = r.min_rhs_trace;
    if (!r.ok()) out.text << "  n = " << n << " FAILS\n";
  }
  out.result = Json{{"n_max", n_max}, {"all_pass", all}, {"candidates", candidates},
                    {"min_rhs_trace", worst.get_str()}, {"per_n", rows}};
  out.text << (all ? "all pass" : "FAILURES") << ": odd n in [3, " << n_max << "], " << candidates
           << " candidates, min 2 + T(eps^mu) = " << worst.get_str() << "\n";
}

void cmd_trace(const std::string& expr, Output& out) {
  const Poly p = parse_poly(expr);
  if (!p.is_constant()) throw InputError("trace: expression must not contain z");
  const CycloNum x = p.coeff(0);
  const Rational t = trace_T(x);
  out.result = Json{{"value", x.str()}, {"trace", t.get_str()}};
  out.text << "T(" << x.str() << ") = " << t.get_str() << "\n";
}

void cmd_genus(const std::string& ps, const std::string& qs, Output& out) {
  const Poly p = parse_nonconstant(ps), q = parse_nonconstant(qs);
  const long g = fiber_product_genus(p, q);
  const long ram = fiber_product_ramification_total(p, q);
  out.result = Json{{"genus", g}, {"ramification_total", ram}, {"degree_over_line", p.degree() * q.degree()}};
  out.text << "genus of p(x) = q(z): " << g << " (total ramification " << ram << ")\n";
}

void cmd_probe(int n, int m, int samples, std::uint64_t seed, Output& out) {
  const ProbeResult r = invariant_function_probe(n, m, samples, seed);
  out.result = to_json(r);
  auto& t = out.text;
  t << "seed " << seed << "\n";
  t << "(n, m) = (" << n << ", " << m << "), d = " << r.d << ", F = " << r.function << "\n";
  t << "lattice rank " << r.rank << (r.enlarged ? " (enlarged by 1 - delta^-1)" : "") << ", basis:";
  for (const auto& b : r.lattice_basis) t << " " << b.str();
  t << "\nmax residual over " << samples << " samples: " << fmt_double(r.max_residual)
    << (r.max_residual < 1e-9 ? " (< 1e-9)" : " (ABOVE 1e-9)") << "\n";
}

bool cmd_selftest(std::uint64_t seed, bool timing, bool stream, Output& out) {
  out.text << "seed " << seed << "\n";
  if (stream) std::cout << "seed " << seed << std::endl;
  Json rows = Json::array();
  int failed = 0;
  run_acceptance(seed, [&](const CriterionResult& r) {
    Json j = to_json(r);
    if (!timing) j.erase("seconds");
    rows.push_back(j);
    failed += !r.pass();
    const std::string line = format_criterion(r);
    out.text << line << "\n";
    if (stream) std::cout << line << std::endl;
  });
  out.result = Json{{"seed", seed}, {"all_pass", failed == 0}, {"failed", failed}, {"criteria", rows}};
  const std::string summary = failed ? std::to_string(failed) + " criteria failed" : "all 13 criteria passed";
  out.text << summary << "\n";
  if (stream) std::cout << summary << std::endl;
  return failed == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compositum: functional equations f(p) = g(q) for polynomials p, q"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false, no_timing = false;
  std::string out_file;
  std::uint64_t seed = kDefaultSeed;
  app.add_flag("--json", json, "emit the JSON report");
  app.add_option("--out", out_file, "write the report to FILE instead of standard output");
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_flag("--no-timing", no_timing, "omit timing fields");

  std::string p, q, expr, form;
  int n = 0, m = 0, n_max = 0, samples = 200, bound = 8, trunc = 0;
  bool no_diag = false;

  auto* classify = app.add_subcommand("classify", "classify the pair (P, Q)");
  classify->add_option("P", p)->required();
  classify->add_option("Q", q)->required();
  classify->add_flag("--no-diagnostics", no_diag, "skip the germ-closure diagnostic");

  auto* deck = app.add_subcommand("deck", "deck group germs of P at infinity");
  deck->add_option("P", p)->required();
  deck->add_option("--trunc", trunc, "truncation order K");

  auto* disc = app.add_subcommand("discreteness", "residue evidence for formal discreteness of <T_P, T_Q>");
  disc->add_option("P", p)->required();
  disc->add_option("Q", q)->required();
  disc->add_option("--word-bound", bound, "maximum word length");
  disc->add_option("--trunc", trunc, "truncation order K");

  auto* lattice = app.add_subcommand("lattice", "translation lattice of (z^N, (z+1)^M)");
  lattice->add_option("N", n)->required();
  lattice->add_option("M", m)->required();

  auto* relations = app.add_subcommand("relations", "exponent relations between h_p and h_q");
  relations->add_option("--form", form, "ba or aba")->required();
  relations->add_option("N", n)->required();
  relations->add_option("M", m)->required();

  auto* l51 = app.add_subcommand("lemma51", "three-letter relations for odd n");
  l51->add_option("--n", n, "odd n >= 3")->required();

  auto* l52 = app.add_subcommand("lemma52", "scan eps^a + eps^b + eps^c = eps^mu + 2 for odd n");
  l52->add_option("--n-max", n_max, "largest odd n")->required();

  auto* trace = app.add_subcommand("trace", "trace functional of a cyclotomic number");
  trace->add_option("EXPR", expr)->required();

  auto* genus = app.add_subcommand("genus", "genus of the curve P(x) = Q(z)");
  genus->add_option("P", p)->required();
  genus->add_option("Q", q)->required();

  auto* probe = app.add_subcommand("probe", "numeric invariant-function probe");
  probe->add_option("N", n)->required();
  probe->add_option("M", m)->required();
  probe->add_option("--samples", samples, "number of sample points");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto* sub = app.get_subcommands().front();
  Output out;
  Json params = Json::object();
  Json inputs = Json::object();
  int status = 0;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (trunc == 0) trunc = trunc_from_env();
    require_positive(trunc, "truncation order");
    if (sub == classify) {
      inputs = Json{{"P", p}, {"Q", q}};
      params = Json{{"germ_diagnostics", !no_diag}};
      cmd_classify(p, q, !no_diag, out);
    } else if (sub == deck) {
      inputs = Json{{"P", p}};
      params = Json{{"trunc", trunc}};
      cmd_deck(p, trunc, out);
    } else if (sub == disc) {
      inputs = Json{{"P", p}, {"Q", q}};
      params = Json{{"word_bound", bound}, {"trunc", trunc}};
      cmd_discreteness(p, q, bound, trunc, out);
    } else if (sub == lattice) {
      inputs = Json{{"N", n}, {"M", m}};
      cmd_lattice(n, m, out);
    } else if (sub == relations) {
      inputs = Json{{"N", n}, {"M", m}};
      params = Json{{"form", form}};
      cmd_relations(form, n, m, out);
    } else if (sub == l51) {
      inputs = Json{{"n", n}};
      cmd_lemma51(n, out);
    } else if (sub == l52) {
      inputs = Json{{"n_max", n_max}};
      cmd_lemma52(n_max, out);
    } else if (sub == trace) {
      inputs = Json{{"EXPR", expr}};
      cmd_trace(expr, out);
    } else if (sub == genus) {
      inputs = Json{{"P", p}, {"Q", q}};
      cmd_genus(p, q, out);
    } else if (sub == probe) {
      inputs = Json{{"N", n}, {"M", m}};
      params = Json{{"samples", samples}, {"seed", seed}};
      cmd_probe(n, m, samples, seed, out);
    } else if (sub == selftest) {
      params = Json{{"seed", seed}};
      const bool stream = !json && out_file.empty();
      if (!cmd_selftest(seed, !no_timing, stream, out)) status = 2;
      if (stream) return status;
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const TruncationInconclusive& e) {
    std::cerr << "inconclusive at this truncation (raise --trunc): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  std::string text;
  if (json) {
    Json report = make_report(sub->get_name(), inputs, params);
    report["result"] = out.result;
    if (!no_timing) report["timing_ms"] = ms;
    text = report.dump(2) + "\n";
  } else {
    text = out.text.str();
    if (!no_timing) text += "(" + fmt_double(ms) + " ms)\n";
  }
  if (out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_file);
    if (!f) {
      std::cerr << "error: cannot write " << out_file << "\n";
      return 1;
    }
    f << text;
  }
  return status;
}
