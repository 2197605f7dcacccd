// Command-line front end.
//
// Exit codes: 0 yes/ok, 1 no/refuted, 2 unknown/inconclusive, 3 runtime
// error, 4 usage error.
#include <CLI11.hpp>
#include <json.hpp>

#include <functional>
#include <iostream>
#include <sstream>

#include "pnm/analysis.hpp"
#include "pnm/calculus.hpp"
#include "pnm/combine.hpp"
#include "pnm/engine.hpp"
#include "pnm/io.hpp"

using json = nlohmann::ordered_json;
using namespace pnm;

namespace {

constexpr int kOk = 0, kNo = 1, kUnknown = 2, kRuntime = 3, kUsage = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_json = false;

void emit(const json& j, const std::string& text) {
  if (g_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

FormulaSet formula_set(const std::string& text, const Signature& sig) {
  auto v = parse_formula_list(text, sig);
  return FormulaSet(v.begin(), v.end());
}

json names(const FormulaSet& fs) {
  json j = json::array();
  for (const auto& f : fs) j.push_back(f.str());
  return j;
}

json value_names(const PNMatrix& m, const std::vector<int>& vs) {
  json j = json::array();
  for (int v : vs) j.push_back(m.value(v));
  return j;
}

json value_names(const PNMatrix& m, const ValueSet& s) {
  json j = json::array();
  for (auto v = s.find_first(); v != ValueSet::npos; v = s.find_next(v)) j.push_back(m.value(static_cast<int>(v)));
  return j;
}

std::string brace(const FormulaSet& fs) { return "{" + print_formula_list(fs) + "}"; }

json countermodel_json(const Countermodel& cm) {
  json a = json::object();
  for (const auto& [f, v] : cm.assignment) a[f.str()] = v;
  return {{"assignment", a}, {"component", cm.component}};
}

std::string countermodel_text(const Countermodel& cm) {
  std::ostringstream out;
  out << "countermodel (component {";
  for (std::size_t i = 0; i < cm.component.size(); ++i) out << (i ? ", " : "") << cm.component[i];
  out << "}):\n";
  for (const auto& [f, v] : cm.assignment) out << "  " << f.str() << " = " << v << "\n";
  return out.str();
}

json verdict_json(const Verdict& v) {
  json j = {{"verdict", answer_name(v.answer)}};
  j["countermodel"] = v.countermodel ? countermodel_json(*v.countermodel) : json(nullptr);
  if (!v.note.empty()) j["note"] = v.note;
  j["diagnostics"] = {{"components", v.diagnostics.components}, {"assignments", v.diagnostics.assignments}};
  return j;
}

std::string verdict_text(const Verdict& v) {
  std::string s = std::string(answer_name(v.answer)) + "\n";
  if (!v.note.empty()) s += v.note + "\n";
  if (v.countermodel) s += countermodel_text(*v.countermodel);
  return s;
}

int exit_for(Answer a) { return a == Answer::yes ? kOk : a == Answer::no ? kNo : kUnknown; }

json components_json(const PNMatrix& m, const ViabilityReport& r) {
  json j = json::array();
  for (const auto& c : r.components) j.push_back(value_names(m, c));
  return j;
}

int emit_matrix(const PNMatrix& m, const std::string& out, json extra = json::object()) {
  json j = std::move(extra);
  j["kind"] = kind_name(classify(m));
  j["values"] = m.values();
  if (!out.empty()) {
    write_matrix_file(m, out);
    j["out"] = out;
    emit(j, "wrote " + out + " (" + std::to_string(m.size()) + " values, " + kind_name(classify(m)) + ")\n");
  } else {
    j["matrix"] = write_matrix(m);
    emit(j, write_matrix(m));
  }
  return kOk;
}

std::pair<FormulaSet, FormulaSet> parse_probe(const std::string& text, const Signature& sig) {
  auto turn = text.find("|-");
  if (turn == std::string::npos) throw UsageError("probe needs the form 'premises |- conclusions'");
  return {formula_set(text.substr(0, turn), sig), formula_set(text.substr(turn + 2), sig)};
}

Mode parse_mode(const std::string& s) {
  if (s == "multiple") return Mode::multiple;
  if (s == "single") return Mode::single;
  throw UsageError("mode must be 'multiple' or 'single'");
}

std::string bounds_text(const SaturationBounds& b) {
  return "premises <= " + std::to_string(b.max_premises) + ", conclusions <= " + std::to_string(b.max_phi) +
         ", depth <= " + std::to_string(b.max_depth) + ", variables <= " + std::to_string(b.max_vars);
}

json bounds_json(const SaturationBounds& b) {
  return {{"max_premises", b.max_premises}, {"max_phi", b.max_phi}, {"max_depth", b.max_depth},
          {"max_vars", b.max_vars}, {"max_phi_candidates", b.max_phi_candidates}};
}

json bounds_json(const SeparatorBounds& b) { return {{"depth", b.depth}, {"max_candidates", b.max_candidates}}; }

json witness_json(const SaturationWitness& w) { return {{"gamma0", names(w.gamma0)}, {"phi", names(w.phi)}}; }

void add_saturation_bounds(CLI::App* c, SaturationBounds& b) {
  c->add_option("--max-premises", b.max_premises, "largest premise set")->capture_default_str();
  c->add_option("--max-phi", b.max_phi, "largest conclusion set")->capture_default_str();
  c->add_option("--max-depth", b.max_depth, "formula depth")->capture_default_str();
  c->add_option("--max-vars", b.max_vars, "number of variables")->capture_default_str();
  c->add_option("--budget", b.max_phi_candidates, "conclusion sets to examine")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite partial non-deterministic matrices: decisions, products and analyses"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", g_json, "machine-readable output");
  std::function<int()> action;

  // {{{ parse
  std::string parse_src, parse_formula_text, parse_sig, parse_matrix;
  auto* c_parse = app.add_subcommand("parse", "validate a matrix file, or analyse a formula");
  c_parse->add_option("source", parse_src, "matrix file or fixture");
  c_parse->add_option("--formula", parse_formula_text, "formula to analyse");
  c_parse->add_option("--matrix", parse_matrix, "matrix giving the signature for --formula");
  c_parse->add_option("--sig", parse_sig, "signature for --formula, e.g. 'and/2, neg/1'");
  c_parse->callback([&] {
    action = [&] {
      if (parse_formula_text.empty()) {
        if (parse_src.empty()) throw UsageError("parse needs a matrix source or --formula");
        return emit_matrix(load_matrix(parse_src), "");
      }
      Signature sig = parse_sig.empty() ? Signature{} : Signature::parse(parse_sig);
      if (!parse_matrix.empty()) sig = sig.unite(load_matrix(parse_matrix).sig());
      Formula f = pnm::parse_formula(parse_formula_text, sig);
      Analysis a = analyze(f);
      json j = {{"formula", f.str()}, {"size", f.size()}, {"depth", f.depth()}, {"head", a.head},
                {"variables", a.variables}, {"subformulas", names(a.subformulas)}};
      std::ostringstream t;
      t << f.str() << "\nsize " << f.size() << ", depth " << f.depth() << ", head " << a.head << "\nvariables:";
      for (const auto& v : a.variables) t << " " << v;
      t << "\nsubformulas: " << print_formula_list(a.subformulas) << "\n";
      emit(j, t.str());
      return kOk;
    };
  });
  // }}}

  // {{{ info
  std::string info_src;
  auto* c_info = app.add_subcommand("info", "classification and viability analysis");
  c_info->add_option("source", info_src, "matrix file or fixture")->required();
  c_info->callback([&] {
    action = [&] {
      PNMatrix m = load_matrix(info_src);
      ViabilityReport r = viable_components(m);
      json j = {{"kind", kind_name(classify(m))},
                {"signature", m.sig().str()},
                {"values", m.values()},
                {"designated", value_names(m, m.designated_set())},
                {"total", m.total()},
                {"deterministic", m.deterministic()},
                {"components", components_json(m, r)},
                {"usable", value_names(m, r.usable)},
                {"spurious", value_names(m, r.spurious)}};
      if (const FixtureInfo* f = identify_fixture(m)) j["fixture"] = f->name;
      std::ostringstream t;
      t << "kind: " << kind_name(classify(m)) << "\nsignature: " << m.sig().str() << "\nvalues:";
      for (const auto& v : m.values()) t << " " << v;
      t << "\ndesignated: " << m.set_str(m.designated_set()) << "\ntotal: " << (m.total() ? "yes" : "no")
        << "\ndeterministic: " << (m.deterministic() ? "yes" : "no") << "\n"
        << r.usable.count() << " usable values, " << r.components.size() << " total components\n";
      for (const auto& c : r.components) {
        ValueSet w = m.empty_set();
        for (int v : c) w.set(v);
        t << "  " << m.set_str(w) << "\n";
      }
      if (r.spurious.any()) t << "spurious: " << m.set_str(r.spurious) << "\n";
      emit(j, t.str());
      return kOk;
    };
  });
  // }}}

  // {{{ constructions
  std::string left, right, out, mref, sig_text, conns;
  std::vector<std::string> mrefs;
  bool do_prune = false;
  int k = 2;

  auto* c_product = app.add_subcommand("product", "strict product of two matrices");
  c_product->add_option("--left", left, "first matrix")->required();
  c_product->add_option("--right", right, "second matrix")->required();
  c_product->add_flag("--prune", do_prune, "drop spurious values");
  c_product->add_option("--out", out, "output file");
  c_product->callback([&] {
    action = [&] {
      PNMatrix p = strict_product(load_matrix(left), load_matrix(right));
      return emit_matrix(do_prune ? prune(p) : p, out, {{"total", p.total()}});
    };
  });

  auto* c_sum = app.add_subcommand("sum", "sum of matrices over one signature");
  c_sum->add_option("--matrix", mrefs, "summand (repeat)")->required();
  c_sum->add_option("--out", out, "output file");
  c_sum->callback([&] {
    action = [&] {
      std::vector<PNMatrix> ms;
      for (const auto& r : mrefs) ms.push_back(load_matrix(r));
      return emit_matrix(sum(ms), out);
    };
  });

  auto* c_power = app.add_subcommand("power", "finite power of a matrix");
  c_power->add_option("--matrix", mref, "matrix")->required();
  c_power->add_option("--k", k, "exponent")->capture_default_str();
  c_power->add_option("--out", out, "output file");
  c_power->callback([&] { action = [&] { return emit_matrix(power(load_matrix(mref), k), out); }; });

  auto* c_extend = app.add_subcommand("extend", "add connectives with unconstrained tables");
  c_extend->add_option("--matrix", mref, "matrix")->required();
  c_extend->add_option("--sig", sig_text, "connectives to add, e.g. 'box/1'")->required();
  c_extend->add_option("--out", out, "output file");
  c_extend->callback([&] {
    action = [&] { return emit_matrix(extend(load_matrix(mref), Signature::parse(sig_text)), out); };
  });

  auto* c_reduct = app.add_subcommand("reduct", "restrict a matrix to some connectives");
  c_reduct->add_option("--matrix", mref, "matrix")->required();
  c_reduct->add_option("--conns", conns, "connectives to keep, comma separated")->required();
  c_reduct->add_option("--out", out, "output file");
  c_reduct->callback([&] {
    action = [&] {
      PNMatrix m = load_matrix(mref);
      return emit_matrix(reduct(m, m.sig().restrict_to(split_names(conns))), out);
    };
  });

  auto* c_prune = app.add_subcommand("prune", "drop spurious values");
  c_prune->add_option("--matrix", mref, "matrix")->required();
  c_prune->add_option("--out", out, "output file");
  c_prune->callback([&] { action = [&] { return emit_matrix(prune(load_matrix(mref)), out); }; });
  // }}}

  // {{{ decide
  std::string mode = "multiple", premises, conclusions;
  auto* c_decide = app.add_subcommand("decide", "decide a consequence over a matrix");
  c_decide->add_option("--matrix", mref, "matrix")->required();
  c_decide->add_option("--mode", mode, "multiple or single")->capture_default_str();
  c_decide->add_option("--premises", premises, "comma-separated formulas");
  c_decide->add_option("--conclusions", conclusions, "comma-separated formulas")->required();
  c_decide->add_option("--sig", sig_text, "extra connectives, decided through skeletons");
  c_decide->callback([&] {
    action = [&] {
      PNMatrix m = load_matrix(mref);
      Signature sig = m.sig();
      if (!sig_text.empty()) sig = sig.unite(Signature::parse(sig_text));
      FormulaSet g = formula_set(premises, sig), d = formula_set(conclusions, sig);
      if (parse_mode(mode) == Mode::single && d.size() != 1)
        throw UsageError("single mode needs exactly one conclusion");
      Decider dec(m);
      Verdict v = sig == m.sig() ? dec.multiple(g, d) : dec.multiple_skeleton(g, d);
      emit(verdict_json(v), verdict_text(v));
      return exit_for(v.answer);
    };
  });
  // }}}

  // {{{ check-rules
  std::string calculus_name, calculus_file;
  auto* c_rules = app.add_subcommand("check-rules", "soundness of a calculus for a matrix");
  c_rules->add_option("--matrix", mref, "matrix")->required();
  auto* o_cname = c_rules->add_option("--calculus", calculus_name, "built-in calculus");
  auto* o_cfile = c_rules->add_option("--file", calculus_file, "calculus file, one rule per line");
  o_cname->excludes(o_cfile);
  c_rules->callback([&] {
    action = [&] {
      PNMatrix m = load_matrix(mref);
      Calculus c;
      if (!calculus_name.empty())
        c = builtin_calculus(calculus_name);
      else if (!calculus_file.empty())
        c = read_calculus(calculus_file, m.sig());
      else
        throw UsageError("check-rules needs --calculus or --file");
      SoundnessReport rep = calculus_sound(m, c);
      json rules = json::array();
      std::ostringstream t;
      for (std::size_t i = 0; i < rep.rules.size(); ++i) {
        const auto& v = rep.verdicts[i];
        json r = verdict_json(v);
        r["rule"] = rep.rules[i].str();
        rules.push_back(r);
        t << (v.answer == Answer::yes ? "sound    " : "UNSOUND  ") << rep.rules[i].str() << "\n";
        if (v.countermodel) t << countermodel_text(*v.countermodel);
      }
      t << rep.sound << " sound, " << rep.unsound << " unsound (" << SoundnessReport::scope << ")\n";
      emit({{"verdict", rep.all_sound() ? "sound" : "unsound"}, {"scope", SoundnessReport::scope}, {"rules", rules}},
           t.str());
      return rep.all_sound() ? kOk : kNo;
    };
  });
  // }}}

  // {{{ separators and monadicity
  std::string x, y;
  SeparatorBounds sep_bounds;
  bool have_conns = false;
  auto* c_sep = app.add_subcommand("separators", "find a separator of two values");
  c_sep->add_option("--matrix", mref, "matrix")->required();
  c_sep->add_option("--x", x, "first value")->required();
  c_sep->add_option("--y", y, "second value")->required();
  c_sep->add_option("--conns", conns, "connectives allowed in separators (default: all)");
  c_sep->add_option("--depth", sep_bounds.depth, "largest depth")->capture_default_str();
  c_sep->add_option("--max-candidates", sep_bounds.max_candidates, "candidate cap")->capture_default_str();
  c_sep->callback([&] {
    action = [&] {
      PNMatrix m = load_matrix(mref);
      Signature sub = c_sep->count("--conns") ? m.sig().restrict_to(split_names(conns)) : m.sig();
      if (m.index_of(x) < 0 || m.index_of(y) < 0) throw UsageError("unknown value");
      Decider d(m);
      auto s = find_separator(d, m.index_of(x), m.index_of(y), sub, sep_bounds);
      json j = {{"verdict", s ? "found" : "not-found"},
                {"separator", s ? json(s->str()) : json(nullptr)},
                {"bounds", bounds_json(sep_bounds)}};
      emit(j, s ? "separator: " + s->str() + "\n"
                : "not found (depth <= " + std::to_string(sep_bounds.depth) + ", <= " +
                      std::to_string(sep_bounds.max_candidates) + " candidates)\n");
      return s ? kOk : kUnknown;
    };
  });

  auto* c_mon = app.add_subcommand("monadic", "separators for every pair of usable values");
  c_mon->add_option("--matrix", mref, "matrix")->required();
  c_mon->add_option("--conns", conns, "connectives allowed in separators (default: all)");
  c_mon->add_option("--depth", sep_bounds.depth, "largest depth")->capture_default_str();
  c_mon->add_option("--max-candidates", sep_bounds.max_candidates, "candidate cap")->capture_default_str();
  c_mon->callback([&] {
    action = [&] {
      PNMatrix m = load_matrix(mref);
      have_conns = c_mon->count("--conns") > 0;
      Signature sub = have_conns ? m.sig().restrict_to(split_names(conns)) : m.sig();
      SeparatorTable t = monadicity_report(m, sub, sep_bounds);
      json entries = json::array();
      std::ostringstream s;
      for (const auto& e : t.entries) {
        entries.push_back({{"x", m.value(e.x)},
                           {"y", m.value(e.y)},
                           {"separator", e.separator ? json(e.separator->str()) : json(nullptr)}});
        s << "  " << m.value(e.x) << " / " << m.value(e.y) << " : "
          << (e.separator ? e.separator->str() : std::string("not found")) << "\n";
      }
      const bool mon = t.monadic();
      s << (mon ? "monadic" : "monadicity not established") << " over {" << sub.str() << "}, separators {"
        << print_formula_list(t.separators()) << "} (depth <= " << sep_bounds.depth << ", " << t.candidates
        << " candidates" << (t.capped ? ", capped" : "") << ")\n";
      emit({{"verdict", mon ? "monadic" : "not-established"},
            {"signature", sub.str()},
            {"entries", entries},
            {"separators", names(t.separators())},
            {"bounds", bounds_json(sep_bounds)},
            {"capped", t.capped}},
           s.str());
      return mon ? kOk : kUnknown;
    };
  });
  // }}}

  // {{{ saturation
  SaturationBounds sat;
  auto* c_sat = app.add_subcommand("refute-saturation", "search for a theory realized by no valuation");
  c_sat->add_option("--matrix", mref, "matrix")->required();
  add_saturation_bounds(c_sat, sat);
  c_sat->callback([&] {
    action = [&] {
      SaturationResult r = refute_saturation(load_matrix(mref), sat);
      json j = {{"verdict", r.witness ? "refuted" : "none-found"},
                {"witness", r.witness ? witness_json(*r.witness) : json(nullptr)},
                {"bounds", bounds_json(sat)},
                {"budget_exhausted", r.budget_exhausted},
                {"stats", {{"universe", r.universe}, {"premise_sets", r.premise_sets}, {"solver_calls", r.solver_calls}}}};
      std::string t;
      if (r.witness)
        t = "refuted: " + brace(r.witness->gamma0) + " yields " + brace(r.witness->phi) +
            " but derives none of its members\n";
      else
        t = std::string("no witness found") + (r.budget_exhausted ? " (budget exhausted)" : "") + "; bounds: " +
            bounds_text(sat) + "\n";
      emit(j, t);
      return r.witness ? kNo : kUnknown;
    };
  });
  // }}}

  // {{{ split-advice
  std::string left_conns, right_conns;
  std::vector<std::string> probes;
  SplitBounds split;
  auto* c_split = app.add_subcommand("split-advice", "whether a matrix splits into two reducts");
  c_split->add_option("--matrix", mref, "matrix")->required();
  c_split->add_option("--left-conns", left_conns, "connectives of the first part")->required();
  c_split->add_option("--right-conns", right_conns, "connectives of the second part")->required();
  c_split->add_option("--probe", probes, "query 'premises |- conclusions' compared first (repeat)");
  c_split->add_option("--samples", split.samples, "random queries")->capture_default_str();
  c_split->add_option("--seed", split.seed, "sampling seed")->capture_default_str();
  c_split->add_option("--depth", split.separators.depth, "separator depth")->capture_default_str();
  add_saturation_bounds(c_split, split.saturation);
  c_split->callback([&] {
    action = [&] {
      PNMatrix m = load_matrix(mref);
      std::vector<Query> qs;
      for (const auto& p : probes) {
        auto [g, d] = parse_probe(p, m.sig());
        qs.push_back({g, d});
      }
      SplitVerdict v = split_advice(m, m.sig().restrict_to(split_names(left_conns)),
                                    m.sig().restrict_to(split_names(right_conns)), split, qs);
      json j = {{"verdict", conclusion_name(v.conclusion)},
                {"shared", v.shared.str()},
                {"monadic", v.monadicity.monadic()},
                {"separators", names(v.monadicity.separators())},
                {"witness", v.saturation.witness ? witness_json(*v.saturation.witness) : json(nullptr)},
                {"checked", v.checked},
                {"bounds", {{"separators", bounds_json(split.separators)},
                            {"saturation", bounds_json(split.saturation)},
                            {"samples", split.samples}}}};
      std::ostringstream t;
      t << conclusion_name(v.conclusion) << "\nshared {" << v.shared.str() << "}: "
        << (v.monadicity.monadic() ? "monadic, separators {" + print_formula_list(v.monadicity.separators()) + "}"
                                   : std::string("monadicity not established"))
        << "\nsaturation: "
        << (v.saturation.witness
                ? "refuted by " + brace(v.saturation.witness->gamma0) + " yields " + brace(v.saturation.witness->phi)
                : "no witness within bounds")
        << "\n" << v.checked << " queries compared\n";
      if (v.divergence) {
        const auto& dv = *v.divergence;
        t << "divergence: " << print_formula_list(dv.query.gamma) << " |- " << print_formula_list(dv.query.delta)
          << " is " << answer_name(dv.over_matrix.answer) << " over the matrix, " << answer_name(dv.over_product.answer)
          << " over the product of the reducts\n";
        const Verdict& no = dv.over_product.answer == Answer::no ? dv.over_product : dv.over_matrix;
        if (no.countermodel) t << countermodel_text(*no.countermodel);
        j["divergence"] = {{"premises", names(dv.query.gamma)},
                           {"conclusions", names(dv.query.delta)},
                           {"matrix", verdict_json(dv.over_matrix)},
                           {"product", verdict_json(dv.over_product)}};
      }
      emit(j, t.str());
      switch (v.conclusion) {
        case SplitConclusion::split_safe_multiple:
        case SplitConclusion::split_safe_single_conditional: return kOk;
        case SplitConclusion::unsafe_evidence: return kNo;
        default: return kUnknown;
      }
    };
  });
  // }}}

  // {{{ combine
  int power_left = 1, power_right = 1;
  auto* c_comb = app.add_subcommand("combine", "combine two logics by strict product");
  c_comb->add_option("--left", left, "first matrix")->required();
  c_comb->add_option("--right", right, "second matrix")->required();
  c_comb->add_option("--mode", mode, "multiple or single")->capture_default_str();
  c_comb->add_option("--power-left", power_left, "finite power of the first input (single mode)");
  c_comb->add_option("--power-right", power_right, "finite power of the second input (single mode)");
  c_comb->add_flag("--prune", do_prune, "drop spurious values (multiple mode)");
  c_comb->add_option("--out", out, "output file");
  add_saturation_bounds(c_comb, sat);
  c_comb->callback([&] {
    action = [&] {
      PNMatrix m1 = load_matrix(left), m2 = load_matrix(right);
      CombinedLogic c;
      try {
        if (parse_mode(mode) == Mode::multiple)
          c = combine_multiple(m1, m2, do_prune);
        else if (power_left != 1 || power_right != 1)
          c = combine_single_power(m1, m2, power_left, power_right, sat);
        else
          c = combine_single_saturated(m1, m2, sat);
      } catch (const SaturationRefused& e) {
        emit({{"verdict", "refused"}, {"input", e.input}, {"witness", witness_json(e.witness)}, {"bounds", bounds_json(sat)}},
             std::string("refused: ") + e.what() + "\n");
        return kNo;
      }
      json extra = {{"verdict", "ok"}, {"label", c.label}, {"total", c.total}, {"notes", c.notes}};
      if (!g_json) {
        std::cout << "combined (" << c.label << "), " << c.matrix.size() << " values, "
                  << (c.total ? "total" : "partial") << " strict product\n";
        for (const auto& n : c.notes) std::cout << "  " << n << "\n";
      }
      return emit_matrix(c.matrix, out, extra);
    };
  });
  // }}}

  // {{{ decide-combined
  std::string ctx_extra;
  ContextOptions ctx_opt;
  auto* c_dc = app.add_subcommand("decide-combined", "decide over a combination by context partitions");
  c_dc->add_option("--left", left, "first matrix")->required();
  c_dc->add_option("--right", right, "second matrix")->required();
  c_dc->add_option("--mode", mode, "multiple or single")->capture_default_str();
  c_dc->add_option("--premises", premises, "comma-separated formulas");
  c_dc->add_option("--conclusions", conclusions, "comma-separated formulas")->required();
  c_dc->add_option("--ctx-extra", ctx_extra, "formulas added to the context");
  c_dc->add_option("--ctx-cap", ctx_opt.ctx_cap, "largest context")->capture_default_str();
  c_dc->add_flag("--cross-check", ctx_opt.cross_check, "re-decide components over extended matrices");
  c_dc->add_flag("--saturated", ctx_opt.saturated, "vouch for saturation of both inputs (single mode)");
  c_dc->callback([&] {
    action = [&] {
      PNMatrix m1 = load_matrix(left), m2 = load_matrix(right);
      const Signature sig = m1.sig().unite(m2.sig());
      const Mode md = parse_mode(mode);
      FormulaSet g = formula_set(premises, sig), d = formula_set(conclusions, sig);
      if (md == Mode::single && d.size() != 1) throw UsageError("single mode needs exactly one conclusion");
      ContextVerdict r = decide_combined_ctx(m1, m2, md, g, d, formula_set(ctx_extra, sig), ctx_opt);
      json j = verdict_json(r.verdict);
      j["certified"] = r.certified;
      j["certification"] = r.certification;
      j["ctx"] = json::array();
      for (const auto& f : r.ctx) j["ctx"].push_back(f.str());
      j["partitions"] = r.partitions;
      j["component_calls"] = r.component_calls;
      if (r.failing) j["failing_partition"] = {{"below", names(r.failing->first)}, {"above", names(r.failing->second)}};
      std::ostringstream t;
      t << verdict_text(r.verdict) << r.certification << "\n"
        << r.ctx.size() << " context formulas, " << r.partitions << " partitions visited, " << r.component_calls
        << " component decisions\n";
      if (r.failing) t << "failing partition: " << brace(r.failing->first) << " / " << brace(r.failing->second) << "\n";
      emit(j, t.str());
      return exit_for(r.verdict.answer);
    };
  });
  // }}}

  // {{{ axiom-derive
  std::vector<std::string> axioms;
  std::string axioms_file, conclusion;
  int depth = 2;
  auto* c_ax = app.add_subcommand("axiom-derive", "derive with schema axioms added (bounded instances)");
  c_ax->add_option("--matrix", mref, "matrix")->required();
  c_ax->add_option("--axiom", axioms, "schema formula (repeat)");
  c_ax->add_option("--axioms", axioms_file, "file of schema formulas");
  c_ax->add_option("--premises", premises, "comma-separated formulas");
  c_ax->add_option("--conclusion", conclusion, "formula")->required();
  c_ax->add_option("--depth", depth, "instantiation depth")->capture_default_str();
  c_ax->add_option("--sig", sig_text, "extra connectives");
  c_ax->callback([&] {
    action = [&] {
      PNMatrix m = load_matrix(mref);
      Signature sig = m.sig();
      if (!sig_text.empty()) sig = sig.unite(Signature::parse(sig_text));
      std::string text = axioms_file.empty() ? "" : read_text_file(axioms_file);
      for (const auto& a : axioms) text += "\n" + a;
      AxiomSet ax = parse_axioms(text, sig, depth);
      Verdict v = decide_with_axioms(m, ax, formula_set(premises, sig), pnm::parse_formula(conclusion, sig));
      json j = verdict_json(v);
      j["bounds"] = {{"depth", depth}, {"cap", ax.cap}};
      emit(j, verdict_text(v));
      return exit_for(v.answer);
    };
  });
  // }}}

  // {{{ fixtures
  auto* c_fix = app.add_subcommand("fixtures", "list the built-in matrices");
  c_fix->callback([&] {
    action = [&] {
      json j = json::array();
      std::ostringstream t;
      for (const auto& f : fixtures()) {
        j.push_back({{"name", f.name}, {"kind", kind_name(f.kind)}, {"known_saturated", f.known_saturated},
                     {"description", f.description}});
        auto pad = [](const std::string& w, std::size_t n) { return w + std::string(w.size() < n ? n - w.size() : 1, ' '); };
        t << pad(f.name, 16) << pad(kind_name(f.kind), 9) << pad(f.known_saturated ? "saturated" : "", 11)
          << f.description << "\n";
      }
      emit(j, t.str());
      return kOk;
    };
  });
  // }}}

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
