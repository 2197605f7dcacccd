#include "pnm/combine.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "pnm/io.hpp"

namespace pnm {

// {{{ strict products

CombinedLogic combine_multiple(const PNMatrix& m1, const PNMatrix& m2, bool prune_values) {
  CombinedLogic c;
  c.left = m1;
  c.right = m2;
  c.matrix = strict_product(m1, m2);
  c.total = c.matrix.total();
  if (prune_values) {
    c.matrix = prune(c.matrix);
    c.pruned = true;
  }
  c.label = "exact";
  return c;
}

SaturationRefused::SaturationRefused(int which, SaturationWitness w)
    : Error("saturation of input " + std::to_string(which) + " is refuted: {" + print_formula_list(w.gamma0) +
            "} yields {" + print_formula_list(w.phi) + "} but none of its members"),
      input(which),
      witness(std::move(w)) {}

CombinedLogic combine_single_saturated(const PNMatrix& m1, const PNMatrix& m2, const SaturationBounds& bounds) {
  bool known = true;
  std::vector<std::string> notes;
  int which = 0;
  for (const PNMatrix* m : {&m1, &m2}) {
    ++which;
    const FixtureInfo* f = identify_fixture(*m);
    if (f && f->known_saturated) {
      notes.push_back("input " + std::to_string(which) + " is the saturated fixture " + f->name);
      continue;
    }
    known = false;
    auto r = refute_saturation(*m, bounds);
    if (r.witness) throw SaturationRefused(which, *r.witness);
    notes.push_back("input " + std::to_string(which) + ": no saturation witness within the bounds");
  }
  CombinedLogic c = combine_multiple(m1, m2);
  c.label = known ? "exact" : "conditional on saturation";
  c.notes = std::move(notes);
  return c;
}

CombinedLogic combine_single_power(const PNMatrix& m1, const PNMatrix& m2, int k1, int k2,
                                   const SaturationBounds& bounds) {
  PNMatrix p1 = k1 == 1 ? m1 : power(m1, k1);
  PNMatrix p2 = k2 == 1 ? m2 : power(m2, k2);
  CombinedLogic c = combine_multiple(p1, p2);
  bool refuted = false;
  int which = 0;
  for (const PNMatrix* m : {&p1, &p2}) {
    ++which;
    auto r = refute_saturation(*m, bounds);
    if (r.witness) {
      refuted = true;
      c.notes.push_back("powered input " + std::to_string(which) + " is not saturated: {" +
                        print_formula_list(r.witness->gamma0) + "} yields {" + print_formula_list(r.witness->phi) + "}");
    }
  }
  c.label = refuted ? "finite approximation" : "conditional on saturation";
  return c;
}

// }}}

// {{{ context partitions

namespace {

// One input logic over the union signature, decided through skeletons.
struct Side {
  std::unique_ptr<Decider> d;
  std::unique_ptr<Decider> extended;  // for cross-checks

  Verdict decide(const FormulaSet& gamma, const FormulaSet& delta, MonolithMap& mm) const {
    FormulaSet g, s;
    for (const auto& f : gamma) g.insert(skeleton(f, d->matrix().sig(), mm));
    for (const auto& f : delta) s.insert(skeleton(f, d->matrix().sig(), mm));
    return d->multiple(g, s);
  }
};

class ContextSearch {
 public:
  ContextSearch(const PNMatrix& m1, const PNMatrix& m2, const ContextOptions& o, const Signature& sig)
      : o_(o) {
    for (const PNMatrix* m : {&m1, &m2}) {
      Side s;
      s.d = std::make_unique<Decider>(*m);
      if (o.cross_check) s.extended = std::make_unique<Decider>(extend(*m, sig));
      sides_.push_back(std::move(s));
    }
  }

  // Component decision with its countermodel over the original formulas.
  bool derives(std::size_t k, const FormulaSet& gamma, const FormulaSet& delta, ContextVerdict& out,
               std::map<Formula, std::string>* cm = nullptr) {
    ++out.component_calls;
    MonolithMap mm;
    Verdict v = sides_[k].decide(gamma, delta, mm);
    if (sides_[k].extended) {
      ++out.cross_checks;
      if (sides_[k].extended->multiple(gamma, delta).answer != v.answer)
        throw Error("skeleton and extension routes disagree on " + print_formula_list(gamma) + " |- " +
                    print_formula_list(delta));
    }
    if (v.answer == Answer::no && cm) {
      cm->clear();
      FormulaSet all = gamma;
      all.insert(delta.begin(), delta.end());
      for (const auto& f : subformulas(all)) {
        auto it = v.countermodel->assignment.find(skeleton(f, sides_[k].d->matrix().sig(), mm));
        if (it != v.countermodel->assignment.end()) (*cm)[f] = it->second;
      }
    }
    return v.answer == Answer::yes;
  }

  std::size_t sides() const { return sides_.size(); }

 private:
  ContextOptions o_;
  std::vector<Side> sides_;
};

Countermodel pair_countermodel(const PNMatrix& product, const std::map<Formula, std::string>& v1,
                               const std::map<Formula, std::string>& v2) {
  Countermodel cm;
  ValueSet image = product.empty_set();
  for (const auto& [f, x] : v1) {
    auto it = v2.find(f);
    if (it == v2.end()) continue;
    const std::string name = x + "|" + it->second;
    cm.assignment[f] = name;
    const int idx = product.index_of(name);
    if (idx >= 0) image.set(idx);
  }
  for (const auto& comp : viable_components(product).components) {
    ValueSet w = product.empty_set();
    for (int v : comp) w.set(v);
    if (image.is_subset_of(w)) {
      for (int v : comp) cm.component.push_back(product.value(v));
      break;
    }
  }
  return cm;
}

}  // namespace

ContextVerdict decide_combined_ctx(const PNMatrix& m1, const PNMatrix& m2, Mode mode, const FormulaSet& gamma,
                                   const FormulaSet& delta, const FormulaSet& ctx_extra,
                                   const ContextOptions& options) {
  const Signature sig = m1.sig().unite(m2.sig());
  auto over = [&](const FormulaSet& fs) {
    for (const auto& f : fs) check_over(f, sig);
  };
  over(gamma);
  over(delta);
  over(ctx_extra);
  if (mode == Mode::single && delta.size() != 1) throw Error("single mode needs exactly one conclusion");

  ContextVerdict out;
  FormulaSet all = gamma;
  all.insert(delta.begin(), delta.end());
  all.insert(ctx_extra.begin(), ctx_extra.end());
  const FormulaSet ctx = subformulas(all);
  out.ctx.assign(ctx.begin(), ctx.end());
  if (ctx.size() > options.ctx_cap)
    throw Error("context has " + std::to_string(ctx.size()) + " formulas, above the cap of " +
                std::to_string(options.ctx_cap));

  const PNMatrix product = strict_product(m1, m2);
  const bool total = product.total();
  if (mode == Mode::multiple) {
    out.certified = total;
    out.certification = total ? "certified (total strict product)" : "uncertified (ctx-extensibility not established)";
  } else {
    out.certified = total && options.saturated;
    out.certification = out.certified ? "certified (total strict product, saturated inputs)"
                        : total       ? "uncertified (saturation of the inputs not asserted)"
                                      : "uncertified (ctx-extensibility not established)";
  }

  for (const auto& f : gamma)
    if (delta.count(f)) {
      out.verdict.answer = Answer::yes;
      out.verdict.note = "overlap: " + f.str();
      return out;
    }

  ContextSearch search(m1, m2, options, sig);
  std::vector<Formula> free;
  for (const auto& f : ctx)
    if (!gamma.count(f) && !delta.count(f)) free.push_back(f);

  FormulaSet below = gamma, above = delta;
  std::map<Formula, std::string> cm1, cm2;
  bool failed = false;

  if (mode == Mode::multiple) {
    // A partial partition derived by a component stays derived in every
    // completion, so the subtree is skipped.
    std::function<bool(std::size_t)> visit = [&](std::size_t i) -> bool {
      ++out.partitions;
      for (std::size_t k = 0; k < search.sides(); ++k)
        if (search.derives(k, below, above, out)) return true;
      if (i == free.size()) {
        search.derives(0, below, above, out, &cm1);
        search.derives(1, below, above, out, &cm2);
        return false;
      }
      above.insert(free[i]);
      bool ok = visit(i + 1);
      above.erase(free[i]);
      if (!ok) return false;
      below.insert(free[i]);
      ok = visit(i + 1);
      below.erase(free[i]);
      return ok;
    };
    failed = !visit(0);
    if (failed) {
      out.failing = std::make_pair(below, above);
      out.verdict.answer = Answer::no;
      Countermodel cm = pair_countermodel(product, cm1, cm2);
      if (!cm.component.empty() && check_countermodel(product, gamma, delta, cm).empty()) {
        out.verdict.countermodel = std::move(cm);
        out.verdict.note = "countermodel over the strict product";
      } else {
        out.verdict.note = "no valuation of the strict product pairs the component countermodels";
      }
    }
  } else {
    // Some conclusion on the upper side derived from the lower side, by
    // either component.
    std::map<std::pair<FormulaSet, Formula>, bool> memo;
    auto settled = [&]() {
      for (const auto& b : above) {
        auto key = std::make_pair(below, b);
        auto it = memo.find(key);
        bool yes;
        if (it != memo.end()) {
          yes = it->second;
        } else {
          yes = search.derives(0, below, {b}, out) || search.derives(1, below, {b}, out);
          memo.emplace(std::move(key), yes);
        }
        if (yes) return true;
      }
      return false;
    };
    std::function<bool(std::size_t)> visit = [&](std::size_t i) -> bool {
      ++out.partitions;
      if (settled()) return true;
      if (i == free.size()) return false;
      above.insert(free[i]);
      bool ok = visit(i + 1);
      above.erase(free[i]);
      if (!ok) return false;
      below.insert(free[i]);
      ok = visit(i + 1);
      below.erase(free[i]);
      return ok;
    };
    failed = !visit(0);
    if (failed) {
      out.failing = std::make_pair(below, above);
      out.verdict.answer = Answer::no;
      out.verdict.note = "the lower side is closed under both components and omits the conclusion";
    }
  }
  if (!failed) out.verdict.answer = Answer::yes;
  out.verdict.diagnostics.assignments = out.component_calls;
  return out;
}

// }}}

// {{{ axioms

AxiomSet parse_axioms(const std::string& text, const Signature& sig, int depth) {
  AxiomSet ax;
  ax.depth = depth;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    try {
      for (auto& f : parse_formula_list(line, sig)) ax.schemas.push_back(std::move(f));
    } catch (const Error& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (const auto& f : ax.schemas) ax.sig = ax.sig.unite(signature_of(f));
  return ax;
}

FormulaSet axiom_instances(const AxiomSet& ax, const FormulaSet& universe) {
  FormulaSet out;
  if (ax.schemas.empty()) return out;
  std::set<std::string> vars;
  for (const auto& f : universe) collect_variables(f, vars);
  std::vector<std::string> names(vars.begin(), vars.end());
  auto built = enumerate_formulas(ax.sig, names, ax.depth, ax.cap);
  FormulaSet range(built.begin(), built.end());
  for (const auto& f : subformulas(universe))
    if (f.depth() <= ax.depth) range.insert(f);
  const std::vector<Formula> r(range.begin(), range.end());

  for (const auto& schema : ax.schemas) {
    const auto sv = variables(schema);
    const std::vector<std::string> sch(sv.begin(), sv.end());
    double count = 1;
    for (std::size_t i = 0; i < sch.size(); ++i) count *= static_cast<double>(r.size());
    if (out.size() + count > static_cast<double>(ax.cap))
      throw Error("axiom instances exceed the cap of " + std::to_string(ax.cap));
    if (r.empty() && !sch.empty()) continue;
    std::vector<std::size_t> idx(sch.size(), 0);
    while (true) {
      Substitution s;
      for (std::size_t i = 0; i < sch.size(); ++i) s.insert_or_assign(sch[i], r[idx[i]]);
      out.insert(apply_substitution(schema, s));
      int k = static_cast<int>(sch.size()) - 1;
      while (k >= 0 && ++idx[k] == r.size()) idx[k--] = 0;
      if (k < 0) break;
    }
  }
  return out;
}

bool is_axiom_instance(const AxiomSet& ax, const Formula& f) {
  return std::any_of(ax.schemas.begin(), ax.schemas.end(),
                     [&](const Formula& s) { return match_instance(f, s).has_value(); });
}

Verdict decide_with_axioms(const PNMatrix& m, const AxiomSet& ax, const FormulaSet& gamma, const Formula& a) {
  FormulaSet universe = gamma;
  universe.insert(a);
  Signature sig = m.sig().unite(ax.sig);
  for (const auto& f : universe) sig = sig.unite(signature_of(f));
  const FormulaSet inst = axiom_instances(ax, universe);
  FormulaSet premises = gamma;
  premises.insert(inst.begin(), inst.end());
  Verdict v = decide_single(sig == m.sig() ? m : extend(m, sig), premises, a);
  const std::string where = std::to_string(inst.size()) + " axiom instances at depth " + std::to_string(ax.depth);
  if (v.answer == Answer::yes) {
    if (v.note.empty()) v.note = "derived with " + where;
    return v;
  }
  Verdict out;
  out.answer = Answer::unknown;
  out.note = "unknown at depth " + std::to_string(ax.depth) + ": not derived with " + where;
  out.diagnostics = v.diagnostics;
  return out;
}

// }}}

}  // namespace pnm
