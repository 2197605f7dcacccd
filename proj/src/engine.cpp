#include "pnm/engine.hpp"

#include <algorithm>

namespace pnm {

const char* answer_name(Answer a) {
  switch (a) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    case Answer::unknown: return "unknown";
  }
  return "?";
}

namespace detail {

// One maximal viable set with tables re-indexed to local values and
// intersected with the set.
struct Component {
  std::vector<int> values;
  std::vector<int> local;
  int k = 0;
  std::uint64_t all = 0;
  std::uint64_t designated = 0;
  struct Tab {
    int arity = 0;
    std::vector<std::uint64_t> e;
  };
  std::vector<Tab> tabs;  // by connective id
};

}  // namespace detail

namespace {

using Mask = std::uint64_t;

inline Mask bit(int i) { return Mask(1) << i; }

std::unique_ptr<detail::Component> compile(const PNMatrix& m, const std::vector<int>& values,
                                           const std::map<std::string, int>& ids) {
  if (values.size() > kComponentCap)
    throw Error("viable component with " + std::to_string(values.size()) +
                " values exceeds engine cap of " + std::to_string(kComponentCap));
  auto c = std::make_unique<detail::Component>();
  c->values = values;
  c->k = static_cast<int>(values.size());
  c->local.assign(m.size(), -1);
  for (int i = 0; i < c->k; ++i) {
    c->local[values[i]] = i;
    c->all |= bit(i);
    if (m.designated(values[i])) c->designated |= bit(i);
  }
  c->tabs.resize(ids.size());
  for (const auto& [name, id] : ids) {
    const auto& t = m.table(name);
    auto& out = c->tabs[id];
    out.arity = t.arity;
    std::size_t n = 1;
    for (int i = 0; i < t.arity; ++i) n *= static_cast<std::size_t>(c->k);
    out.e.assign(n, 0);
    std::vector<int> args(t.arity);
    for (std::size_t li = 0; li < n; ++li) {
      std::size_t r = li;
      for (int i = t.arity - 1; i >= 0; --i) {
        args[i] = values[r % c->k];
        r /= c->k;
      }
      const auto& e = t.entries[m.tuple_index(args)];
      Mask mk = 0;
      for (int j = 0; j < c->k; ++j)
        if (e[values[j]]) mk |= bit(j);
      out.e[li] = mk;
    }
  }
  return c;
}

// {{{ Csp: arc-consistent backtracking over a Space within one component

class Csp {
 public:
  Csp(const Space& sp, const detail::Component& c, std::vector<Mask> dom)
      : nodes_(sp.nodes()), users_(sp.users()), c_(c), dom_(std::move(dom)), inq_(dom_.size(), 0) {}

  // Leaves the first solution in search order in dom(), as the lowest value
  // of each domain. Only formulas used as arguments get a search level: once
  // they are fixed, arc consistency leaves exactly the feasible values in the
  // domain of every other formula, so its lowest value is the first choice.
  bool run(const std::vector<int>& order, std::size_t& trials) {
    for (std::size_t i = 0; i < dom_.size(); ++i)
      if (nodes_[i].conn >= 0) enqueue(static_cast<int>(i));
    if (!propagate()) return false;
    const int n = static_cast<int>(order.size());
    if (n == 0) return true;
    std::vector<Mask> rem(n, 0);
    std::vector<std::size_t> mark(n, 0);
    int i = 0;
    rem[0] = dom_[order[0]];
    while (true) {
      if (i == n) return true;
      if (rem[i] == 0) {
        if (i == 0) return false;
        --i;
        undo(mark[i]);
        continue;
      }
      const int v = order[i];
      const int x = __builtin_ctzll(rem[i]);
      rem[i] &= rem[i] - 1;
      mark[i] = trail_.size();
      ++trials;
      if (dom_[v] != bit(x)) {
        set(v, bit(x));
        touch(v, -1);
        if (!propagate()) {
          undo(mark[i]);
          continue;
        }
      }
      ++i;
      if (i < n) rem[i] = dom_[order[i]];
    }
  }

  const std::vector<Mask>& dom() const { return dom_; }

 private:
  void enqueue(int v) {
    if (!inq_[v]) {
      inq_[v] = 1;
      queue_.push_back(v);
    }
  }

  void touch(int v, int skip) {
    if (nodes_[v].conn >= 0 && v != skip) enqueue(v);
    for (int u : users_[v])
      if (u != skip) enqueue(u);
  }

  void set(int v, Mask m) {
    trail_.emplace_back(v, dom_[v]);
    dom_[v] = m;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      dom_[trail_.back().first] = trail_.back().second;
      trail_.pop_back();
    }
  }

  bool propagate() {
    while (!queue_.empty()) {
      int f = queue_.back();
      queue_.pop_back();
      inq_[f] = 0;
      if (!revise(f)) {
        for (int v : queue_) inq_[v] = 0;
        queue_.clear();
        return false;
      }
    }
    return true;
  }

  // Generic support collection for arities above two.
  void supports(const std::vector<std::uint64_t>& tab, const std::vector<int>& args, std::size_t pos,
                std::size_t idx, std::vector<int>& val, Mask df, Mask& sf, std::vector<Mask>& sup) {
    const int k = c_.k;
    if (pos == args.size()) {
      Mask e = tab[idx] & df;
      if (e) {
        sf |= e;
        for (std::size_t j = 0; j < args.size(); ++j) sup[j] |= bit(val[j]);
      }
      return;
    }
    // a repeated argument must take the value already chosen
    for (std::size_t j = 0; j < pos; ++j) {
      if (args[j] == args[pos]) {
        val[pos] = val[j];
        supports(tab, args, pos + 1, idx * k + val[pos], val, df, sf, sup);
        return;
      }
    }
    for (Mask d = dom_[args[pos]]; d; d &= d - 1) {
      val[pos] = __builtin_ctzll(d);
      supports(tab, args, pos + 1, idx * k + val[pos], val, df, sf, sup);
    }
  }

  bool revise(int f) {
    const auto& nd = nodes_[f];
    const auto& tab = c_.tabs[nd.conn].e;
    const Mask df = dom_[f];
    const int k = c_.k;
    Mask sf = 0;
    switch (nd.args.size()) {
      case 0:
        sf = tab[0] & df;
        break;
      case 1: {
        const int a = nd.args[0];
        Mask sa = 0;
        for (Mask d = dom_[a]; d; d &= d - 1) {
          int x = __builtin_ctzll(d);
          Mask e = tab[x] & df;
          if (e) {
            sa |= bit(x);
            sf |= e;
          }
        }
        if (!sf) return false;
        if (sa != dom_[a]) {
          set(a, sa);
          touch(a, f);
        }
        break;
      }
      case 2: {
        const int a = nd.args[0], b = nd.args[1];
        Mask sa = 0, sb = 0;
        if (a == b) {
          for (Mask d = dom_[a]; d; d &= d - 1) {
            int x = __builtin_ctzll(d);
            Mask e = tab[x * k + x] & df;
            if (e) {
              sa |= bit(x);
              sf |= e;
            }
          }
          sb = sa;
        } else {
          const Mask db = dom_[b];
          for (Mask d = dom_[a]; d; d &= d - 1) {
            int x = __builtin_ctzll(d);
            const std::uint64_t* row = &tab[x * k];
            for (Mask d2 = db; d2; d2 &= d2 - 1) {
              int y = __builtin_ctzll(d2);
              Mask e = row[y] & df;
              if (e) {
                sa |= bit(x);
                sb |= bit(y);
                sf |= e;
              }
            }
          }
        }
        if (!sf) return false;
        if (sa != dom_[a]) {
          set(a, sa);
          touch(a, f);
        }
        if (b != a && sb != dom_[b]) {
          set(b, sb);
          touch(b, f);
        }
        break;
      }
      default: {
        std::vector<int> val(nd.args.size());
        std::vector<Mask> sup(nd.args.size(), 0);
        supports(tab, nd.args, 0, 0, val, df, sf, sup);
        if (!sf) return false;
        // repeated arguments collect identical supports
        for (std::size_t j = 0; j < nd.args.size(); ++j) {
          int a = nd.args[j];
          if (sup[j] != dom_[a]) {
            set(a, sup[j]);
            touch(a, f);
          }
        }
        break;
      }
    }
    if (!sf) return false;
    if (sf != df) {
      set(f, sf);
      touch(f, f);
    }
    return true;
  }

  const std::vector<Space::Node>& nodes_;
  const std::vector<std::vector<int>>& users_;
  const detail::Component& c_;
  std::vector<Mask> dom_;
  std::vector<char> inq_;
  std::vector<int> queue_;
  std::vector<std::pair<int, Mask>> trail_;
};

// }}}

}  // namespace

// {{{ Decider

Decider::Decider(const PNMatrix& m) : m_(m), viability_(viable_components(m)) {
  int id = 0;
  for (const auto& [name, ar] : m_.sig().connectives()) conn_ids_[name] = id++;
  compiled_.resize(viability_.components.size());
}

Decider::~Decider() = default;

int Decider::conn_id(const std::string& name) const {
  auto it = conn_ids_.find(name);
  return it == conn_ids_.end() ? -1 : it->second;
}

const detail::Component& Decider::component(std::size_t i) const {
  if (!compiled_[i]) compiled_[i] = compile(m_, viability_.components[i], conn_ids_);
  return *compiled_[i];
}

Verdict Decider::multiple(const FormulaSet& gamma, const FormulaSet& delta) const {
  Verdict v;
  for (const auto& f : gamma) check_over(f, m_.sig());
  for (const auto& f : delta) check_over(f, m_.sig());
  for (const auto& f : gamma) {
    if (delta.count(f)) {
      v.answer = Answer::yes;
      v.note = "overlap: " + f.str() + " is both a premise and a conclusion";
      return v;
    }
  }
  FormulaSet all = gamma;
  all.insert(delta.begin(), delta.end());
  Space sp(*this, subformulas(all));
  std::vector<signed char> req(sp.formulas().size(), Space::kAny);
  for (const auto& f : gamma) req[sp.index_of(f)] = Space::kDesignated;
  for (const auto& f : delta) req[sp.index_of(f)] = Space::kUndesignated;
  auto sol = sp.solve(req, &v.diagnostics.assignments, &v.diagnostics.components);
  if (!sol) {
    v.answer = Answer::yes;
    if (viability_.components.empty()) v.note = "no valuations: every value is spurious";
    return v;
  }
  v.answer = Answer::no;
  Countermodel cm;
  for (std::size_t i = 0; i < sp.formulas().size(); ++i)
    cm.assignment.emplace(sp.formulas()[i], m_.value(sol->values[i]));
  for (int x : viability_.components[sol->component]) cm.component.push_back(m_.value(x));
  v.countermodel = std::move(cm);
  return v;
}

Verdict Decider::single(const FormulaSet& gamma, const Formula& a) const {
  return multiple(gamma, FormulaSet{a});
}

Verdict Decider::multiple_skeleton(const FormulaSet& gamma, const FormulaSet& delta) const {
  MonolithMap mm;
  FormulaSet g, d;
  for (const auto& f : gamma) g.insert(skeleton(f, m_.sig(), mm));
  for (const auto& f : delta) d.insert(skeleton(f, m_.sig(), mm));
  Verdict v = multiple(g, d);
  if (v.countermodel) {
    std::string legend;
    for (const auto& [name, f] : mm.monoliths()) legend += (legend.empty() ? "" : ", ") + name + " = " + f.str();
    v.note = "countermodel over skeleton formulas" + (legend.empty() ? "" : "; " + legend);
  }
  return v;
}

ValueSet Decider::possible(const Formula& a, int x, const std::string& var) const {
  check_over(a, m_.sig());
  ValueSet out = m_.empty_set();
  FormulaSet scope;
  collect_subformulas(a, scope);
  scope.insert(Formula::var(var));
  Space sp(*this, scope);
  const int pi = sp.index_of(Formula::var(var));
  const int ai = sp.index_of(a);
  const std::vector<signed char> req(sp.formulas().size(), Space::kAny);
  for (std::size_t c = 0; c < viability_.components.size(); ++c) {
    const auto& comp = viability_.components[c];
    if (!std::binary_search(comp.begin(), comp.end(), x)) continue;
    for (int y : comp) {
      if (out[y]) continue;
      auto sol = sp.solve_with(req, {{pi, {x}}, {ai, {y}}}, c);
      if (sol) out.set(y);
    }
  }
  return out;
}

// }}}

// {{{ Space

Space::Space(const Decider& d, const FormulaSet& scope) : d_(d), formulas_(scope.begin(), scope.end()) {
  const Signature& sig = d.matrix().sig();
  for (std::size_t i = 0; i < formulas_.size(); ++i) index_.emplace(formulas_[i], static_cast<int>(i));
  nodes_.resize(formulas_.size());
  users_.resize(formulas_.size());
  for (std::size_t i = 0; i < formulas_.size(); ++i) {
    const Formula& f = formulas_[i];
    if (f.is_var()) continue;
    if (sig.arity(f.name()) != static_cast<int>(f.args().size()))
      throw Error("connective '" + f.name() + "' of " + f.str() + " is not in the matrix signature");
    nodes_[i].conn = d.conn_id(f.name());
    for (const auto& a : f.args()) {
      auto it = index_.find(a);
      if (it == index_.end()) throw Error("formula set is not closed under subformulas: " + a.str());
      nodes_[i].args.push_back(it->second);
      auto& u = users_[it->second];
      if (u.empty() || u.back() != static_cast<int>(i)) u.push_back(static_cast<int>(i));
    }
  }
  for (std::size_t i = 0; i < formulas_.size(); ++i)
    if (!users_[i].empty()) order_.push_back(static_cast<int>(i));
}

int Space::index_of(const Formula& f) const {
  auto it = index_.find(f);
  return it == index_.end() ? -1 : it->second;
}

std::optional<Space::Solution> Space::solve(const std::vector<signed char>& req, std::size_t* nodes,
                                            std::size_t* components) const {
  return solve_with(req, {}, std::nullopt, nodes, components);
}

std::optional<Space::Solution> Space::solve_with(
    const std::vector<signed char>& req, const std::vector<std::pair<int, std::vector<int>>>& allowed,
    std::optional<std::size_t> only_component, std::size_t* nodes, std::size_t* components) const {
  std::size_t trials = 0;
  std::size_t searched = 0;
  std::optional<Solution> found;
  const std::size_t ncomp = d_.component_count();
  for (std::size_t ci = 0; ci < ncomp && !found; ++ci) {
    if (only_component && *only_component != ci) continue;
    const auto& c = d_.component(ci);
    ++searched;
    std::vector<Mask> dom(formulas_.size());
    bool empty = false;
    for (std::size_t i = 0; i < formulas_.size() && !empty; ++i) {
      Mask m = c.all;
      if (req[i] == kDesignated) m &= c.designated;
      if (req[i] == kUndesignated) m &= ~c.designated;
      dom[i] = m;
      empty = m == 0;
    }
    for (const auto& [fi, vals] : allowed) {
      Mask m = 0;
      for (int v : vals)
        if (c.local[v] >= 0) m |= bit(c.local[v]);
      dom[fi] &= m;
      empty = empty || dom[fi] == 0;
    }
    if (empty) continue;
    Csp csp(*this, c, std::move(dom));
    if (csp.run(order_, trials)) {
      Solution s;
      s.component = ci;
      for (Mask m : csp.dom()) s.values.push_back(c.values[__builtin_ctzll(m)]);
      found = std::move(s);
    }
  }
  if (nodes) *nodes += trials;
  if (components) *components += searched;
  return found;
}

// }}}

// {{{ free functions

Verdict decide_multiple(const PNMatrix& m, const FormulaSet& gamma, const FormulaSet& delta) {
  return Decider(m).multiple(gamma, delta);
}

Verdict decide_single(const PNMatrix& m, const FormulaSet& gamma, const Formula& a) {
  return Decider(m).single(gamma, a);
}

Verdict decide_skeleton(const PNMatrix& m, const FormulaSet& gamma, const FormulaSet& delta) {
  return Decider(m).multiple_skeleton(gamma, delta);
}

ValueSet possible_values(const PNMatrix& m, const Formula& a, const std::string& x, const std::string& var) {
  int xi = m.index_of(x);
  if (xi < 0) throw Error("unknown value '" + x + "'");
  return Decider(m).possible(a, xi, var);
}

std::vector<std::string> check_countermodel(const PNMatrix& m, const FormulaSet& gamma,
                                            const FormulaSet& delta, const Countermodel& cm) {
  std::vector<std::string> bad;
  std::map<Formula, int> val;
  for (const auto& [f, name] : cm.assignment) {
    int v = m.index_of(name);
    if (v < 0) {
      bad.push_back("value '" + name + "' assigned to " + f.str() + " is not a matrix value");
      continue;
    }
    val.emplace(f, v);
  }
  ValueSet comp = m.empty_set();
  for (const auto& name : cm.component) {
    int v = m.index_of(name);
    if (v < 0)
      bad.push_back("component value '" + name + "' is not a matrix value");
    else
      comp.set(v);
  }
  if (comp.none())
    bad.push_back("component is empty");
  else if (!viable(m, comp))
    bad.push_back("component " + m.set_str(comp) + " is not viable");

  FormulaSet all = gamma;
  all.insert(delta.begin(), delta.end());
  for (const auto& f : subformulas(all))
    if (!cm.assignment.count(f)) bad.push_back("no value for " + f.str());

  for (const auto& [f, v] : val) {
    if (!comp[v]) bad.push_back(f.str() + " = " + m.value(v) + " lies outside the component");
    if (f.is_var()) continue;
    std::vector<int> args;
    bool known = true;
    for (const auto& a : f.args()) {
      auto it = val.find(a);
      if (it == val.end()) {
        bad.push_back("assignment is not subformula-closed at " + a.str());
        known = false;
        break;
      }
      args.push_back(it->second);
    }
    if (!known) continue;
    if (m.sig().arity(f.name()) != static_cast<int>(args.size())) {
      bad.push_back("connective of " + f.str() + " is not in the signature");
      continue;
    }
    if (!m.entry(f.name(), args)[v]) bad.push_back(f.str() + " = " + m.value(v) + " violates the table");
  }
  for (const auto& f : gamma) {
    auto it = val.find(f);
    if (it != val.end() && !m.designated(it->second)) bad.push_back("premise " + f.str() + " is undesignated");
  }
  for (const auto& f : delta) {
    auto it = val.find(f);
    if (it != val.end() && m.designated(it->second)) bad.push_back("conclusion " + f.str() + " is designated");
  }
  return bad;
}

// }}}

}  // namespace pnm
