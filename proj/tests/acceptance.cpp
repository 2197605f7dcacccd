// Acceptance run: one PASS/FAIL line per criterion.
//
// Each check returns an empty string on success or a short reason. Expected
// tables and derivability facts are computed here from first principles or
// by the brute-force oracle in support.cpp, never by the library's search.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "pnm/analysis.hpp"
#include "pnm/calculus.hpp"
#include "pnm/combine.hpp"
#include "pnm/io.hpp"
#include "support.hpp"

using namespace pnm;

namespace {

// Pinned limits.
constexpr double kSecondsPerCriterion = 10.0;
constexpr int kCombinedQueries = 200;
constexpr std::size_t kCombinedCtxCap = 40;
constexpr int kPowerQueries = 50;
constexpr int kPropertyInstances = 500;
constexpr int kSkeletonInstances = 200;
constexpr int kOracleQueries = 400;
constexpr std::size_t kOracleMaxValues = 6;

FormulaSet S(const Signature& sig, const std::string& s) {
  auto v = parse_formula_list(s, sig);
  return FormulaSet(v.begin(), v.end());
}

Formula F(const Signature& sig, const std::string& s) { return parse_formula(s, sig); }

std::string set_text(const FormulaSet& fs) { return "{" + print_formula_list(fs) + "}"; }

bool follows(const PNMatrix& m, const FormulaSet& g, const FormulaSet& d) {
  return decide_multiple(m, g, d).answer == Answer::yes;
}

// Problems with a saturation witness, judged by the oracle alone.
std::string oracle_witness(const PNMatrix& m, const SaturationWitness& w) {
  if (w.phi.size() < 2) return "conclusion set has fewer than two members";
  if (!pnmtest::oracle_follows(m, w.gamma0, w.phi)) return set_text(w.gamma0) + " does not yield " + set_text(w.phi);
  for (const auto& a : w.phi)
    if (pnmtest::oracle_follows(m, w.gamma0, {a})) return set_text(w.gamma0) + " derives " + a.str();
  return "";
}

// Three-valued implications on {0, 1/2, 1}, scaled by two.
int kleene_imp(int x, int y) { return std::max(2 - x, y); }
int luk_imp(int x, int y) { return std::min(2, 2 - x + y); }
std::string three(int v) { return v == 0 ? "0" : v == 1 ? "h" : "1"; }

// {{{ criteria

std::string c1_product_table() {
  PNMatrix kl = strict_product(builtin("kleene-imp"), builtin("luk-imp"));
  // compatible pairs agree on designation, and only 1 is designated
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      if ((a == 2) == (b == 2)) pairs.emplace_back(a, b);
  auto name = [](std::pair<int, int> v) { return three(v.first) + "|" + three(v.second); };
  if (kl.size() != 5 || pairs.size() != 5) return "expected 5 values, got " + std::to_string(kl.size());
  for (const auto& v : pairs)
    if (kl.index_of(name(v)) < 0) return "missing value " + name(v);
  const auto& imp = kl.tables().at("imp");
  for (const auto& x : pairs)
    for (const auto& y : pairs) {
      std::set<std::string> want;
      for (const auto& z : pairs)
        if (z.first == kleene_imp(x.first, y.first) && z.second == luk_imp(x.second, y.second)) want.insert(name(z));
      std::set<std::string> got;
      const auto& e = imp.entries[static_cast<std::size_t>(kl.index_of(name(x))) * kl.size() + kl.index_of(name(y))];
      for (int v = 0; v < static_cast<int>(kl.size()); ++v)
        if (e[v]) got.insert(kl.value(v));
      if (got != want) return "entry " + name(x) + " -> " + name(y) + " differs";
    }
  auto out = [&](const PNMatrix& m, const std::string& a, const std::string& b) {
    return m.tables().at("imp").entries[static_cast<std::size_t>(m.index_of(a)) * m.size() + m.index_of(b)];
  };
  if (out(kl, "h|0", "h|0").any() || out(kl, "h|h", "h|h").any()) return "expected empty entries at h|0 and h|h";
  PNMatrix pruned = prune(kl);
  if (pruned.values() != std::vector<std::string>{"0|0", "0|h", "1|1"}) return "pruned values differ";
  if (out(pruned, "0|h", "0|0").any()) return "expected 0|h -> 0|0 empty after pruning";
  return "";
}

std::string c2_classical_collapse() {
  PNMatrix kl = prune(strict_product(builtin("kleene-imp"), builtin("luk-imp")));
  const auto& sig = kl.sig();
  if (!follows(kl, {}, S(sig, "p, imp(p,q)"))) return "{} |- p, imp(p,q) not derived";
  Calculus c = restrict_calculus(builtin_calculus("classical"), sig);
  if (c.rules.empty()) return "no implication rules in the classical calculus";
  auto rep = calculus_sound(kl, c);
  if (!rep.all_sound()) return std::to_string(rep.unsound) + " implication rules unsound";
  // and the fragment coincides with the two-valued implication on random queries
  PNMatrix classical = builtin("bool2:imp");
  pnmtest::Gen gen(41);
  for (int i = 0; i < 200; ++i) {
    auto q = gen.query(sig);
    if (follows(kl, q.gamma, q.delta) != pnmtest::oracle_follows(classical, q.gamma, q.delta))
      return "differs from classical implication on " + set_text(q.gamma) + " |- " + set_text(q.delta);
  }
  return "";
}

std::string c3_disjoint() {
  PNMatrix k = builtin("kleene-impK"), l = builtin("luk-impL");
  PNMatrix kl = strict_product(k, l);
  const auto sig = kl.sig();
  const auto g = S(sig, "impK(p,q)"), d = S(sig, "impL(p,q)");
  auto v = decide_multiple(kl, g, d);
  if (v.answer != Answer::no) return "expected no";
  if (pnmtest::oracle_follows(kl, g, d)) return "oracle derives the query";
  if (!v.countermodel) return "no countermodel";
  const auto& a = v.countermodel->assignment;
  if (a.at(F(sig, "p")) != "0|h" || a.at(F(sig, "q")) != "0|0")
    return "countermodel p = " + a.at(F(sig, "p")) + ", q = " + a.at(F(sig, "q"));
  if (!check_countermodel(kl, g, d, *v.countermodel).empty()) return "countermodel fails validation";
  return "";
}

std::string c4_negation_conjunction() {
  PNMatrix na = strict_product(builtin("neg3"), builtin("bool2-and"));
  const auto sig = na.sig();
  if (decide_single(na, S(sig, "neg(p)"), F(sig, "neg(and(p,p))")).answer != Answer::no)
    return "neg(p) |- neg(and(p,p)) should fail";
  if (decide_single(na, S(sig, "neg(neg(p))"), F(sig, "p")).answer != Answer::yes)
    return "neg(neg(p)) |- p should hold";
  if (pnmtest::oracle_follows(na, S(sig, "neg(p)"), S(sig, "neg(and(p,p))")) ||
      !pnmtest::oracle_follows(na, S(sig, "neg(neg(p))"), S(sig, "p")))
    return "oracle disagrees";
  return "";
}

std::string c5_refuter() {
  struct Case {
    const char* fixture;
    const char* gamma0;
    const char* phi;
  };
  for (const Case& c : {Case{"bool2-neg", "", "p, neg(p)"}, Case{"bool2-or", "or(p,q)", "p, q"},
                        Case{"kleene-imp", "imp(p,p)", "p, imp(p,q)"}, Case{"luk-imp", "", "p, imp(p,q), imp(q,r)"}}) {
    PNMatrix m = builtin(c.fixture);
    SaturationWitness expected{S(m.sig(), c.gamma0), S(m.sig(), c.phi)};
    if (auto e = oracle_witness(m, expected); !e.empty()) return std::string(c.fixture) + " reference witness: " + e;
    auto r = refute_saturation(m);
    if (!r.witness) return std::string(c.fixture) + ": no witness found";
    if (auto e = oracle_witness(m, *r.witness); !e.empty()) return std::string(c.fixture) + ": " + e;
  }
  for (const char* name : {"neg3", "sources"}) {
    auto r = refute_saturation(builtin(name));
    if (r.witness) return std::string(name) + ": unexpected witness";
    if (r.budget_exhausted) return std::string(name) + ": budget exhausted";
  }
  return "";
}

// Separation by designatedness of every possible value.
bool oracle_separates(const PNMatrix& m, const Formula& s, int x, int y) {
  auto sx = pnmtest::oracle_possible(m, s, x), sy = pnmtest::oracle_possible(m, s, y);
  auto all = [&](const std::vector<int>& vs, bool des) {
    return !vs.empty() && std::all_of(vs.begin(), vs.end(), [&](int v) { return m.designated(v) == des; });
  };
  return (all(sx, true) && all(sy, false)) || (all(sx, false) && all(sy, true));
}

std::string c6_monadicity() {
  PNMatrix ks = builtin("kleene-ks");
  auto t = monadicity_report(ks, ks.sig());
  if (!t.monadic() || t.separators() != S(ks.sig(), "p, neg(p)")) return "KS separators " + set_text(t.separators());
  for (const auto& e : t.entries)
    if (!oracle_separates(ks, *e.separator, e.x, e.y)) return "KS separator rejected by the oracle";
  PNMatrix s = builtin("sources");
  auto ts = monadicity_report(s, Signature{{"neg", 1}});
  if (!ts.monadic()) return "sources not {neg}-monadic";
  for (const auto& e : ts.entries)
    if (!oracle_separates(s, *e.separator, e.x, e.y)) return "sources separator rejected by the oracle";
  PNMatrix l = builtin("luk3");
  if (find_separator(l, "0", "h", Signature{{"imp", 2}}, 4)) return "separator found for (0, h) over imp";
  return "";
}

std::string c7_split() {
  PNMatrix ks = builtin("kleene-ks");
  auto v = split_advice(ks, ks.sig().restrict_to({"and", "neg"}), ks.sig().restrict_to({"or", "neg"}));
  if (v.conclusion != SplitConclusion::split_safe_multiple) return std::string("KS: ") + conclusion_name(v.conclusion);

  PNMatrix l = builtin("luk3");
  const auto left = l.sig().restrict_to({"neg", "imp"}), right = l.sig().restrict_to({"nabla"});
  Query probe{S(l.sig(), "nabla(p)"), S(l.sig(), "imp(neg(p),p)")};
  auto u = split_advice(l, left, right, {}, {probe});
  if (u.conclusion != SplitConclusion::unsafe_evidence || !u.divergence) return "luk3 {neg,imp}/{nabla}: no divergence";
  const auto& dv = *u.divergence;
  if (dv.query.gamma != probe.gamma || dv.query.delta != probe.delta) return "divergence on another query";
  PNMatrix prod = strict_product(reduct(l, left), reduct(l, right));
  if (!pnmtest::oracle_follows(l, probe.gamma, probe.delta)) return "oracle: luk3 does not derive the probe";
  if (pnmtest::oracle_follows(prod, probe.gamma, probe.delta)) return "oracle: product derives the probe";
  if (!dv.over_product.countermodel ||
      !check_countermodel(prod, probe.gamma, probe.delta, *dv.over_product.countermodel).empty())
    return "product countermodel missing or invalid";

  auto w = split_advice(l, left, l.sig().restrict_to({"nabla", "imp"}));
  if (w.divergence) return "divergence on {neg,imp}/{nabla,imp}";
  if (w.checked != 200) return "sampled " + std::to_string(w.checked) + " queries";
  return "";
}

std::string c8_calculi() {
  struct Case {
    const char* matrix;
    const char* calculus;
  };
  for (const Case& c : {Case{"bool2", "classical"}, Case{"kleene-ks", "kleene-ks"}, Case{"sources", "sources"}}) {
    auto rep = calculus_sound(builtin(c.matrix), builtin_calculus(c.calculus));
    if (!rep.all_sound()) return std::string(c.calculus) + ": " + std::to_string(rep.unsound) + " unsound rules";
    for (const auto& rule : rep.rules) {
      FormulaSet g(rule.premises.begin(), rule.premises.end()), d(rule.conclusions.begin(), rule.conclusions.end());
      if (!pnmtest::oracle_follows(builtin(c.matrix), g, d)) return std::string(c.calculus) + ": oracle rejects " + rule.str();
    }
  }
  if (builtin_calculus("classical").rules.size() != 12) return "classical calculus does not have 12 rules";
  return "";
}

std::string c9_context_partitions() {
  struct Pair {
    const char* left;
    const char* right;
  };
  for (const Pair& p : {Pair{"bool2-and", "bool2-or"}, Pair{"kleene-impK", "luk-impL"}, Pair{"neg3", "bool2-and"}}) {
    PNMatrix m1 = builtin(p.left), m2 = builtin(p.right);
    PNMatrix prod = strict_product(m1, m2);
    if (!prod.total()) return std::string(p.left) + " * " + p.right + " is not total";
    Decider dp(prod);
    ContextOptions o;
    o.ctx_cap = kCombinedCtxCap;
    pnmtest::Gen gen(1009);
    for (int i = 0; i < kCombinedQueries; ++i) {
      auto q = gen.query(prod.sig(), 3, 2, 3, 3);
      auto r = decide_combined_ctx(m1, m2, Mode::multiple, q.gamma, q.delta, {}, o);
      if (r.verdict.answer != dp.multiple(q.gamma, q.delta).answer)
        return std::string(p.left) + " * " + p.right + " disagrees on " + set_text(q.gamma) + " |- " +
               set_text(q.delta);
    }
  }
  return "";
}

std::string c10_finite_power() {
  auto a = combine_single_power(builtin("bool2-and"), builtin("bool2-or"), 1, 2);
  const auto sig = a.matrix.sig();
  if (decide_single(a.matrix, S(sig, "or(p,and(p,p))"), F(sig, "p")).answer != Answer::no)
    return "or(p,and(p,p)) |- p derived";
  if (pnmtest::oracle_follows(a.matrix, S(sig, "or(p,and(p,p))"), S(sig, "p"))) return "oracle derives it";

  auto b = combine_single_power(builtin("bool2-neg"), builtin("bool2-and"), 2, 1);
  PNMatrix ref = strict_product(builtin("neg3"), builtin("bool2-and"));
  pnmtest::Gen gen(53);
  int n = 0;
  while (n < kPowerQueries) {
    auto q = gen.query(ref.sig(), 3, 2, 3, 1);
    if (q.delta.size() != 1) continue;
    ++n;
    const auto& c = *q.delta.begin();
    if (decide_single(b.matrix, q.gamma, c).answer != decide_single(ref, q.gamma, c).answer)
      return "disagreement on " + set_text(q.gamma) + " |- " + c.str();
  }
  return "";
}

Substitution random_substitution(pnmtest::Gen& gen, const Signature& sig) {
  Substitution s;
  for (const char* v : {"p", "q", "r"}) s.insert_or_assign(v, gen.formula(sig, 3, 1));
  return s;
}

FormulaSet substitute(const FormulaSet& fs, const Substitution& s) {
  FormulaSet out;
  for (const auto& f : fs) out.insert(apply_substitution(f, s));
  return out;
}

std::string c11_properties() {
  pnmtest::Gen gen(61);
  for (const auto& info : fixtures()) {
    PNMatrix m = builtin(info.name);
    Decider d(m);
    const auto& sig = m.sig();
    for (int i = 0; i < kPropertyInstances; ++i) {
      auto q = gen.query(sig);
      const std::string where = info.name + " on " + set_text(q.gamma) + " |- " + set_text(q.delta);
      // overlap
      FormulaSet g = q.gamma, dl = q.delta;
      Formula shared = gen.formula(sig, 3, 2);
      g.insert(shared);
      dl.insert(shared);
      if (d.multiple(g, dl).answer != Answer::yes) return "overlap fails for " + where;
      if (d.multiple(q.gamma, q.delta).answer != Answer::yes) continue;
      // dilution
      auto extra = gen.query(sig);
      FormulaSet g2 = q.gamma, d2 = q.delta;
      g2.insert(extra.gamma.begin(), extra.gamma.end());
      d2.insert(extra.delta.begin(), extra.delta.end());
      if (d.multiple(g2, d2).answer != Answer::yes) return "dilution fails for " + where;
      // substitution invariance
      auto s = random_substitution(gen, sig);
      if (d.multiple(substitute(q.gamma, s), substitute(q.delta, s)).answer != Answer::yes)
        return "substitution fails for " + where;
    }
  }
  for (const char* name : {"kleene-ks", "luk3", "sources", "bool2n"}) {
    PNMatrix m = builtin(name);
    const Signature big = m.sig().unite(Signature{{"box", 1}, {"conn", 2}});
    Decider de(extend(m, big)), dk(m);
    for (int i = 0; i < kSkeletonInstances; ++i) {
      auto q = gen.query(big);
      if (de.multiple(q.gamma, q.delta).answer != dk.multiple_skeleton(q.gamma, q.delta).answer)
        return std::string(name) + ": extension and skeleton routes differ on " + set_text(q.gamma) + " |- " +
               set_text(q.delta);
    }
  }
  return "";
}

std::string c12_oracle() {
  pnmtest::Gen gen(71);
  int fixtures_checked = 0;
  for (const auto& info : fixtures()) {
    PNMatrix m = builtin(info.name);
    if (m.size() > kOracleMaxValues) continue;
    ++fixtures_checked;
    Decider d(m);
    for (int i = 0; i < kOracleQueries; ++i) {
      auto q = gen.query(m.sig(), 3, 2, 3, 3);
      auto v = d.multiple(q.gamma, q.delta);
      if ((v.answer == Answer::yes) != pnmtest::oracle_follows(m, q.gamma, q.delta))
        return info.name + " disagrees on " + set_text(q.gamma) + " |- " + set_text(q.delta);
      if (v.countermodel && !check_countermodel(m, q.gamma, q.delta, *v.countermodel).empty())
        return info.name + ": invalid countermodel";
    }
  }
  if (fixtures_checked == 0) return "no fixtures checked";
  return "";
}

// }}}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "strict product table of the Kleene and Lukasiewicz implications", c1_product_table},
      {2, "pruned product collapses to classical implication", c2_classical_collapse},
      {3, "disjoint implications: countermodel p = 0|h, q = 0|0", c3_disjoint},
      {4, "negation with conjunction, single conclusion", c4_negation_conjunction},
      {5, "saturation refuter witnesses and non-witnesses", c5_refuter},
      {6, "monadicity and separator search", c6_monadicity},
      {7, "split advice", c7_split},
      {8, "built-in calculi are sound", c8_calculi},
      {9, "context partitions agree with the product route", c9_context_partitions},
      {10, "finite powers stand in for the infinite power", c10_finite_power},
      {11, "overlap, dilution, substitution, skeletons", c11_properties},
      {12, "engine matches the brute-force oracle", c12_oracle},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string why;
    try {
      why = c.run();
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (why.empty() && secs > kSecondsPerCriterion) why = "took longer than the time limit";
    std::ostringstream line;
    line << (why.empty() ? "PASS" : "FAIL") << " " << std::setw(2) << c.id << " " << c.title << " ("
         << std::fixed << std::setprecision(2) << secs << " s)";
    if (!why.empty()) line << ": " << why;
    std::cout << line.str() << std::endl;
    failed += !why.empty();
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
