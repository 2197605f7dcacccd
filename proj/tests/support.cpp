#include "support.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace pnmtest {

Formula Gen::formula(const Signature& sig, int vars, int depth) {
  static const char* names[] = {"p", "q", "r", "s"};
  std::vector<std::pair<std::string, int>> conns(sig.connectives().begin(), sig.connectives().end());
  std::vector<std::pair<std::string, int>> compound;
  for (const auto& c : conns)
    if (c.second > 0) compound.push_back(c);
  // leaves: variables and constants
  int nleaves = vars;
  for (const auto& c : conns) nleaves += c.second == 0;
  if (depth == 0 || compound.empty() || uniform(0, 2) == 0) {
    int pick = uniform(0, nleaves - 1);
    if (pick < vars) return Formula::var(names[pick]);
    pick -= vars;
    for (const auto& c : conns)
      if (c.second == 0 && pick-- == 0) return Formula::app(c.first);
  }
  const auto& c = compound[uniform(0, static_cast<int>(compound.size()) - 1)];
  std::vector<Formula> args;
  for (int i = 0; i < c.second; ++i) args.push_back(formula(sig, vars, depth - 1));
  return Formula::app(c.first, std::move(args));
}

FormulaSet Gen::formulas(const Signature& sig, int vars, int depth, int max_count) {
  FormulaSet out;
  int n = uniform(0, max_count);
  for (int i = 0; i < n; ++i) out.insert(formula(sig, vars, depth));
  return out;
}

Query Gen::query(const Signature& sig, int vars, int depth, int max_premises, int max_conclusions) {
  Query q;
  q.gamma = formulas(sig, vars, depth, max_premises);
  q.delta = formulas(sig, vars, depth, max_conclusions);
  return q;
}

namespace {

void subs(const Formula& f, std::vector<Formula>& out) {
  for (const auto& a : f.args()) subs(a, out);
  if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
}

const pnm::ValueSet& lookup(const PNMatrix& m, const std::string& c, const std::vector<int>& args) {
  const auto& t = m.tables().at(c);
  std::size_t idx = 0;
  for (int a : args) idx = idx * m.size() + static_cast<std::size_t>(a);
  return t.entries.at(idx);
}

bool subset_viable(const PNMatrix& m, unsigned w) {
  const int n = static_cast<int>(m.size());
  for (const auto& [name, t] : m.tables()) {
    const int ar = t.arity;
    std::size_t total = 1;
    for (int i = 0; i < ar; ++i) total *= static_cast<std::size_t>(n);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::vector<int> args(ar);
      std::size_t r = idx;
      bool inside = true;
      for (int i = ar - 1; i >= 0; --i) {
        args[i] = static_cast<int>(r % n);
        r /= n;
        inside = inside && (w >> args[i] & 1u);
      }
      if (!inside) continue;
      bool meets = false;
      const auto& e = t.entries[idx];
      for (int y = 0; y < n; ++y) meets = meets || (e[y] && (w >> y & 1u));
      if (!meets) return false;
    }
  }
  return true;
}

std::vector<unsigned> viable_subsets(const PNMatrix& m) {
  std::vector<unsigned> out;
  for (unsigned w = 1; w < (1u << m.size()); ++w)
    if (subset_viable(m, w)) out.push_back(w);
  return out;
}

bool inside_some(unsigned image, const std::vector<unsigned>& viable) {
  for (unsigned w : viable)
    if ((image & ~w) == 0) return true;
  return false;
}

// Calls visit with every table-respecting assignment on scope (in the given
// order); stops when visit returns true.
bool assignments(const PNMatrix& m, const std::vector<Formula>& scope,
                 const std::function<bool(int, int)>& allowed,
                 const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> val(scope.size());
  std::map<std::string, int> pos;
  for (std::size_t i = 0; i < scope.size(); ++i) pos[scope[i].str()] = static_cast<int>(i);
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == scope.size()) return visit(val);
    for (int v = 0; v < static_cast<int>(m.size()); ++v) {
      if (!allowed(static_cast<int>(i), v)) continue;
      const Formula& f = scope[i];
      if (!f.is_var()) {
        std::vector<int> args;
        for (const auto& a : f.args()) args.push_back(val[pos.at(a.str())]);
        if (!lookup(m, f.name(), args)[v]) continue;
      }
      val[i] = v;
      if (go(i + 1)) return true;
    }
    return false;
  };
  return go(0);
}

}  // namespace

bool oracle_follows(const PNMatrix& m, const FormulaSet& gamma, const FormulaSet& delta) {
  std::vector<Formula> scope;
  for (const auto& f : gamma) subs(f, scope);
  for (const auto& f : delta) subs(f, scope);
  const auto viable = viable_subsets(m);
  auto allowed = [&](int i, int v) {
    const Formula& f = scope[i];
    if (gamma.count(f) && !m.designated(v)) return false;
    if (delta.count(f) && m.designated(v)) return false;
    return true;
  };
  bool counter = assignments(m, scope, allowed, [&](const std::vector<int>& val) {
    unsigned image = 0;
    for (int v : val) image |= 1u << v;
    return inside_some(image, viable);
  });
  return !counter;
}

std::vector<std::vector<int>> oracle_maximal_viable(const PNMatrix& m) {
  const auto viable = viable_subsets(m);
  std::vector<std::vector<int>> out;
  for (unsigned w : viable) {
    bool maximal = true;
    for (unsigned u : viable)
      if (u != w && (w & ~u) == 0) maximal = false;
    if (!maximal) continue;
    std::vector<int> s;
    for (int i = 0; i < static_cast<int>(m.size()); ++i)
      if (w >> i & 1u) s.push_back(i);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> oracle_possible(const PNMatrix& m, const Formula& a, int x, const std::string& var) {
  std::vector<Formula> scope;
  subs(Formula::var(var), scope);
  subs(a, scope);
  const auto viable = viable_subsets(m);
  std::vector<int> out;
  const int ai = static_cast<int>(std::find(scope.begin(), scope.end(), a) - scope.begin());
  auto allowed = [&](int i, int v) { return i != 0 || v == x; };
  assignments(m, scope, allowed, [&](const std::vector<int>& val) {
    unsigned image = 0;
    for (int v : val) image |= 1u << v;
    if (inside_some(image, viable) && std::find(out.begin(), out.end(), val[ai]) == out.end())
      out.push_back(val[ai]);
    return false;
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pnmtest
