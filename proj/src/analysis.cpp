#include "pnm/analysis.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <set>

namespace pnm {

// {{{ separators

namespace {

bool separates(const ValueSet& sx, const ValueSet& sy, const ValueSet& des) {
  if (sx.none() || sy.none()) return false;
  auto inside = [&](const ValueSet& s) { return s.is_subset_of(des); };
  auto outside = [&](const ValueSet& s) { return !s.intersects(des); };
  return (inside(sx) && outside(sy)) || (outside(sx) && inside(sy));
}

// Layered enumeration of one-variable formulas. Each layer holds the
// formulas of one depth built from earlier generators; a formula becomes a
// generator when its vector of possibility sets (one per usable value) has
// not been seen before.
class SeparatorSearch {
 public:
  SeparatorSearch(const Decider& d, const Signature& sub_sig, const SeparatorBounds& b)
      : d_(d), sub_(sub_sig), b_(b) {
    const auto& usable = d.viability().usable;
    for (std::size_t v = 0; v < usable.size(); ++v)
      if (usable[v]) usable_.push_back(static_cast<int>(v));
  }

  // Smallest separator of each requested pair, found once every pair has a
  // separator no larger than anything later layers could produce.
  std::vector<std::optional<Formula>> run(const std::vector<std::pair<int, int>>& pairs) {
    std::vector<std::optional<Formula>> best(pairs.size());
    std::vector<int> pos(d_.matrix().size(), -1);
    for (std::size_t i = 0; i < usable_.size(); ++i) pos[usable_[i]] = static_cast<int>(i);
    for (int depth = 0; depth <= b_.depth; ++depth) {
      std::vector<Formula> layer = build_layer(depth);
      if (layer.empty()) break;
      for (const auto& f : layer) {
        std::vector<ValueSet> vec;
        for (int v : usable_) vec.push_back(d_.possible(f, v, "p"));
        ++tested_;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
          if (best[k] && !(f < *best[k])) continue;
          if (separates(vec[pos[pairs[k].first]], vec[pos[pairs[k].second]], d_.matrix().designated_set()))
            best[k] = f;
        }
        if (seen_.insert(vec).second) {
          generators_.push_back(f);
          gen_depth_.push_back(depth);
        }
      }
      if (capped_) break;
      // a formula of depth d has at least d + 1 symbols
      bool settled = true;
      for (const auto& s : best) settled = settled && s && s->size() <= static_cast<std::size_t>(depth + 2);
      if (settled) break;
    }
    return best;
  }

  std::size_t tested() const { return tested_; }
  bool capped() const { return capped_; }

 private:
  std::vector<Formula> build_layer(int depth) {
    std::vector<Formula> layer;
    if (depth == 0) {
      layer.push_back(Formula::var("p"));
      for (const auto& [name, ar] : sub_.connectives())
        if (ar == 0) layer.push_back(Formula::app(name));
    } else {
      const std::size_t limit = 8 * b_.max_candidates;
      const std::size_t g = generators_.size();
      for (const auto& [name, ar] : sub_.connectives()) {
        if (ar == 0 || g == 0) continue;
        std::vector<std::size_t> idx(ar, 0);
        while (layer.size() < limit) {
          bool fresh = false;
          for (auto i : idx) fresh |= gen_depth_[i] == depth - 1;
          if (fresh) {
            std::vector<Formula> args;
            for (auto i : idx) args.push_back(generators_[i]);
            layer.push_back(Formula::app(name, std::move(args)));
          }
          int k = ar - 1;
          while (k >= 0 && ++idx[k] == g) idx[k--] = 0;
          if (k < 0) break;
        }
        if (layer.size() >= limit) capped_ = true;
      }
    }
    std::sort(layer.begin(), layer.end());
    const std::size_t room = b_.max_candidates > tested_ ? b_.max_candidates - tested_ : 0;
    if (layer.size() > room) {
      layer.erase(layer.begin() + static_cast<std::ptrdiff_t>(room), layer.end());
      capped_ = true;
    }
    return layer;
  }

  const Decider& d_;
  Signature sub_;
  SeparatorBounds b_;
  std::vector<int> usable_;
  std::vector<Formula> generators_;
  std::vector<int> gen_depth_;
  std::set<std::vector<ValueSet>> seen_;
  std::size_t tested_ = 0;
  bool capped_ = false;
};

void require_usable(const Decider& d, int v) {
  if (v < 0 || static_cast<std::size_t>(v) >= d.matrix().size() || !d.viability().usable[v])
    throw Error("separator search needs usable values");
}

}  // namespace

bool is_separator(const Decider& d, const Formula& s, int x, int y) {
  if (variables(s).size() > 1 || (variables(s).size() == 1 && !variables(s).count("p"))) return false;
  return separates(d.possible(s, x, "p"), d.possible(s, y, "p"), d.matrix().designated_set());
}

bool SeparatorTable::monadic() const {
  return std::all_of(entries.begin(), entries.end(), [](const SeparatorEntry& e) { return e.separator.has_value(); });
}

FormulaSet SeparatorTable::separators() const {
  FormulaSet out;
  for (const auto& e : entries)
    if (e.separator) out.insert(*e.separator);
  return out;
}

std::optional<Formula> find_separator(const Decider& d, int x, int y, const Signature& sub_sig,
                                      const SeparatorBounds& bounds) {
  require_usable(d, x);
  require_usable(d, y);
  if (x == y) throw Error("separator search needs two distinct values");
  SeparatorSearch search(d, sub_sig, bounds);
  auto found = search.run({{x, y}}).front();
  if (found && !is_separator(d, *found, x, y)) throw Error("separator failed re-verification");
  return found;
}

std::optional<Formula> find_separator(const PNMatrix& m, const std::string& x, const std::string& y,
                                      const Signature& sub_sig, int depth) {
  Decider d(m);
  SeparatorBounds b;
  b.depth = depth;
  return find_separator(d, m.index_of(x), m.index_of(y), sub_sig, b);
}

SeparatorTable monadicity_report(const Decider& d, const Signature& sub_sig, const SeparatorBounds& bounds) {
  SeparatorTable table;
  table.sub_sig = sub_sig;
  table.bounds = bounds;
  std::vector<int> usable;
  for (std::size_t v = 0; v < d.matrix().size(); ++v)
    if (d.viability().usable[v]) usable.push_back(static_cast<int>(v));
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < usable.size(); ++i)
    for (std::size_t j = i + 1; j < usable.size(); ++j) pairs.emplace_back(usable[i], usable[j]);
  SeparatorSearch search(d, sub_sig, bounds);
  auto found = pairs.empty() ? std::vector<std::optional<Formula>>{} : search.run(pairs);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (found[k] && !is_separator(d, *found[k], pairs[k].first, pairs[k].second))
      throw Error("separator failed re-verification");
    table.entries.push_back({pairs[k].first, pairs[k].second, found[k]});
  }
  table.candidates = search.tested();
  table.capped = search.capped();
  return table;
}

SeparatorTable monadicity_report(const PNMatrix& m, const Signature& sub_sig, const SeparatorBounds& bounds) {
  Decider d(m);
  return monadicity_report(d, sub_sig, bounds);
}

// }}}

// {{{ saturation

std::vector<std::string> check_witness(const Decider& d, const SaturationWitness& w) {
  std::vector<std::string> problems;
  if (w.phi.empty()) problems.push_back("empty conclusion set");
  if (d.multiple(w.gamma0, w.phi).answer != Answer::yes)
    problems.push_back("premises do not yield the conclusion set");
  for (const auto& a : w.phi)
    if (d.single(w.gamma0, a).answer != Answer::no) problems.push_back("premises derive " + a.str());
  return problems;
}

namespace {

using Bits = boost::dynamic_bitset<>;

// Works over the universe U of formulas within the bounds. A pool of
// valuations (restricted to U) serves as a cheap filter; every claim that a
// formula follows, or that a set of formulas is unavoidable, is settled by
// an exact search over U.
class Refuter {
 public:
  Refuter(const Decider& d, const SaturationBounds& b) : d_(d), m_(d.matrix()), b_(b), rng_(b.seed) {
    static const char* names[] = {"p", "q", "r", "s", "t", "u"};
    if (b.max_vars < 1 || b.max_vars > 6) throw Error("saturation search supports 1 to 6 variables");
    for (int i = 0; i < b.max_vars; ++i) vars_.push_back(names[i]);
    U_ = enumerate_formulas(m_.sig(), vars_, b.max_depth, b.universe_cap);
    FormulaSet scope(U_.begin(), U_.end());
    space_ = std::make_unique<Space>(d_, scope);
    for (std::size_t u = 0; u < U_.size(); ++u) {
      index_.emplace(U_[u], static_cast<int>(u));
      sidx_.push_back(space_->index_of(U_[u]));
      size_.push_back(static_cast<int>(U_[u].size()));
    }
    member_.assign(U_.size(), Bits());
    build_permutations();
    res_.bounds = b;
    res_.universe = U_.size();
  }

  SaturationResult run() {
    for (int i = 0; i < 64; ++i) seed_valuation();
    if (process({})) return res_;
    const std::size_t n = U_.size();
    T1_.assign(n, Bits());
    inconsistent_.assign(n, false);
    rep_.assign(n, false);
    for (std::size_t a = 0; a < n; ++a) {
      if (single_theory(static_cast<int>(a))) return res_;
    }
    std::vector<int> reps;
    for (std::size_t a = 0; a < n; ++a)
      if (rep_[a] && !inconsistent_[a]) reps.push_back(static_cast<int>(a));
    for (int k = 2; k <= b_.max_premises; ++k) {
      bool stop = false;
      ordered_subsets(reps, k, [&](const std::vector<int>& g) {
        if (!canonical(g) || redundant(g)) return false;
        stop = process(g);
        return stop;
      });
      if (stop) return res_;
    }
    return res_;
  }

 private:
  enum class Theory { inconsistent, realized, open };

  // {{{ pool

  int add_valuation(const std::vector<int>& values) {
    Bits des(U_.size());
    for (std::size_t u = 0; u < U_.size(); ++u) des[u] = m_.designated(values[sidx_[u]]);
    for (std::size_t u = 0; u < U_.size(); ++u) member_[u].push_back(des[u]);
    count_.push_back(des.count());
    pool_.push_back(std::move(des));
    return static_cast<int>(pool_.size()) - 1;
  }

  void seed_valuation() {
    const auto& comps = d_.viability().components;
    if (comps.empty()) return;
    const auto& comp = comps[std::uniform_int_distribution<std::size_t>(0, comps.size() - 1)(rng_)];
    ValueSet w = m_.empty_set();
    for (int v : comp) w.set(v);
    const auto& fs = space_->formulas();
    std::vector<int> values(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
      std::vector<int> choice;
      if (fs[i].is_var()) {
        choice = comp;
      } else {
        std::vector<int> args;
        for (int a : space_->nodes()[i].args) args.push_back(values[a]);
        ValueSet e = m_.entry(fs[i].name(), args) & w;
        for (auto y = e.find_first(); y != ValueSet::npos; y = e.find_next(y)) choice.push_back(static_cast<int>(y));
      }
      values[i] = choice[std::uniform_int_distribution<std::size_t>(0, choice.size() - 1)(rng_)];
    }
    add_valuation(values);
  }

  Bits models_of(const std::vector<int>& g) const {
    Bits out(pool_.size());
    out.set();
    for (int a : g) out &= member_[a];
    return out;
  }

  // A valuation designating g and none of und (nor anything in outside),
  // added to the pool.
  std::optional<int> solve(const std::vector<int>& g, const std::vector<int>& und, const Bits* outside = nullptr) {
    std::vector<signed char> req(U_.size(), Space::kAny);
    if (outside)
      for (auto u = outside->find_first(); u != Bits::npos; u = outside->find_next(u))
        req[sidx_[u]] = Space::kUndesignated;
    for (int a : und) req[sidx_[a]] = Space::kUndesignated;
    for (int a : g) {
      if (req[sidx_[a]] == Space::kUndesignated) return std::nullopt;
      req[sidx_[a]] = Space::kDesignated;
    }
    ++res_.solver_calls;
    auto sol = space_->solve(req);
    if (!sol) return std::nullopt;
    return add_valuation(sol->values);
  }

  // }}}

  void add_known(Bits& known, int c) const {
    known.set(c);
    if (!T1_.empty() && T1_[c].size() == U_.size()) known |= T1_[c];
  }

  // Shrinks a valuation designating g towards a least one; succeeds when
  // every designated formula follows from g, so that its designated set is
  // the theory of g. known holds formulas already known to follow.
  Theory realize(const std::vector<int>& g, Bits& known, Bits& theory) {
    Bits models = models_of(g);
    if (models.none()) {
      if (!solve(g, {})) return Theory::inconsistent;
      models = models_of(g);
    }
    std::size_t best = models.find_first();
    for (auto p = models.find_next(best); p != Bits::npos; p = models.find_next(p))
      if (count_[p] < count_[best]) best = p;
    Bits des = pool_[best];
    for (auto c = des.find_first(); c != Bits::npos; c = des.find_next(c)) {
      if (known[c]) continue;
      const Bits outside = ~des;
      if (auto p = solve(g, {static_cast<int>(c)}, &outside)) {
        des = pool_[*p];
        continue;
      }
      if (solve(g, {static_cast<int>(c)})) return Theory::open;
      add_known(known, static_cast<int>(c));
    }
    theory = des;
    return Theory::realized;
  }

  Bits theory_of(const std::vector<int>& g, Bits known) {
    Bits upper(U_.size());
    upper.set();
    const Bits models = models_of(g);
    for (auto p = models.find_first(); p != Bits::npos; p = models.find_next(p)) upper &= pool_[p];
    for (auto c = upper.find_first(); c != Bits::npos; c = upper.find_next(c)) {
      if (known[c]) continue;
      if (auto p = solve(g, {static_cast<int>(c)}))
        upper &= pool_[*p];
      else
        add_known(known, static_cast<int>(c));
    }
    return upper;
  }

  // Visits k-element index sequences of items (ascending universe indices)
  // in order of total size, then lexicographically; stops when visit says so.
  template <class Visit>
  void ordered_subsets(const std::vector<int>& items, int k, Visit&& visit) {
    if (static_cast<int>(items.size()) < k) return;
    int lo = 0, hi = 0;
    for (int i = 0; i < k; ++i) {
      lo += size_[items[i]];
      hi += size_[items[items.size() - 1 - i]];
    }
    std::vector<int> chosen;
    bool stop = false;
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int rem) {
      const int left = k - static_cast<int>(chosen.size());
      for (std::size_t i = start; i < items.size() && !stop; ++i) {
        const int sz = size_[items[i]];
        if (sz * left > rem) break;
        if (left == 1 && sz != rem) continue;
        chosen.push_back(items[i]);
        if (left == 1)
          stop = visit(chosen);
        else
          rec(i + 1, rem - sz);
        chosen.pop_back();
      }
    };
    for (int s = lo; s <= hi && !stop; ++s) rec(0, s);
  }

  // {{{ symmetry

  void build_permutations() {
    std::vector<int> perm(vars_.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    do {
      Substitution s;
      for (std::size_t i = 0; i < perm.size(); ++i) s.insert_or_assign(vars_[i], Formula::var(vars_[perm[i]]));
      std::vector<int> map(U_.size());
      for (std::size_t u = 0; u < U_.size(); ++u) map[u] = index_.at(apply_substitution(U_[u], s));
      perms_.push_back(std::move(map));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  bool canonical(const std::vector<int>& g) const {
    for (const auto& p : perms_) {
      std::vector<int> img;
      for (int a : g) img.push_back(p[a]);
      std::sort(img.begin(), img.end());
      if (img < g) return false;
    }
    return true;
  }

  // Some premise already follows from the others.
  bool redundant(const std::vector<int>& g) const {
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        if (i != j && T1_[g[j]][g[i]]) return true;
    if (g.size() > 2) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        Bits rest(U_.size());
        for (std::size_t j = 0; j < g.size(); ++j)
          if (j != i) rest |= T1_[g[j]];
        if (rest[g[i]]) return true;
      }
    }
    return false;
  }

  // }}}

  // Theory of the single premise a; returns true when a witness was found.
  bool single_theory(int a) {
    const std::size_t n = U_.size();
    int image = a;
    for (const auto& p : perms_) image = std::min(image, p[a]);
    if (image != a) {
      // a is a renaming of an earlier formula: carry its theory over
      std::size_t back = 0;
      while (perms_[back][image] != a) ++back;
      inconsistent_[a] = inconsistent_[image];
      Bits t(n);
      const Bits& src = T1_[image];
      for (auto u = src.find_first(); u != Bits::npos; u = src.find_next(u)) t.set(perms_[back][u]);
      T1_[a] = std::move(t);
      rep_[a] = false;
      return false;
    }
    ++res_.premise_sets;
    Bits known(n), theory;
    known.set(a);
    const std::vector<int> g{a};
    Theory status = realize(g, known, theory);
    if (status == Theory::inconsistent) {
      inconsistent_[a] = true;
      T1_[a] = ~Bits(n);
      return false;
    }
    if (status == Theory::open) theory = theory_of(g, known);
    T1_[a] = theory;
    rep_[a] = true;
    for (auto b = theory.find_first(); b != Bits::npos && b < static_cast<std::size_t>(a); b = theory.find_next(b))
      if (T1_[b][a]) rep_[a] = false;
    if (status == Theory::open && rep_[a]) return search_phi(g, theory);
    return false;
  }

  // Returns true when a witness was found for g.
  bool process(const std::vector<int>& g) {
    ++res_.premise_sets;
    Bits known(U_.size()), theory;
    for (int a : g) add_known(known, a);
    Theory status = realize(g, known, theory);
    if (status != Theory::open) return false;
    return search_phi(g, theory_of(g, known));
  }

  bool search_phi(const std::vector<int>& g, const Bits& theory) {
    std::vector<int> outside;
    for (std::size_t u = 0; u < U_.size(); ++u)
      if (!theory[u]) outside.push_back(static_cast<int>(u));
    Bits models = models_of(g);
    auto cover = [&](const std::vector<int>& phi) {
      Bits c(pool_.size());
      for (int e : phi) c |= member_[e];
      return c;
    };
    for (int k = 2; k <= b_.max_phi; ++k) {
      bool found = false;
      ordered_subsets(outside, k, [&](const std::vector<int>& phi) {
        if (++budget_ > b_.max_phi_candidates) {
          res_.budget_exhausted = true;
          return true;
        }
        if (!models.is_subset_of(cover(phi))) return false;
        if (auto p = solve(g, phi)) {
          models.resize(pool_.size());
          models.set(*p);
          return false;
        }
        found = true;
        SaturationWitness w;
        for (int a : g) w.gamma0.insert(U_[a]);
        for (int e : phi) w.phi.insert(U_[e]);
        if (!check_witness(d_, w).empty()) throw Error("saturation witness failed re-verification");
        res_.witness = std::move(w);
        return true;
      });
      if (found || res_.budget_exhausted) return true;
    }
    return false;
  }

  const Decider& d_;
  const PNMatrix& m_;
  SaturationBounds b_;
  std::mt19937 rng_;
  std::vector<std::string> vars_;
  std::vector<Formula> U_;
  std::map<Formula, int> index_;
  std::unique_ptr<Space> space_;
  std::vector<int> sidx_;
  std::vector<int> size_;
  std::vector<std::vector<int>> perms_;
  std::vector<Bits> pool_;          // designated part of each pooled valuation
  std::vector<std::size_t> count_;  // its size
  std::vector<Bits> member_;        // per formula: pooled valuations designating it
  std::vector<Bits> T1_;            // theory of each single premise
  std::vector<bool> inconsistent_;
  std::vector<bool> rep_;  // least formula of its equivalence class
  std::size_t budget_ = 0;
  SaturationResult res_;
};

}  // namespace

SaturationResult refute_saturation(const Decider& d, const SaturationBounds& bounds) {
  return Refuter(d, bounds).run();
}

SaturationResult refute_saturation(const PNMatrix& m, const SaturationBounds& bounds) {
  Decider d(m);
  return refute_saturation(d, bounds);
}

// }}}

// {{{ sampling and split advice

Formula QuerySampler::formula(const Signature& sig, int vars, int depth) {
  static const char* names[] = {"p", "q", "r", "s", "t", "u"};
  vars = std::clamp(vars, 1, 6);
  std::vector<std::pair<std::string, int>> constants, compound;
  for (const auto& c : sig.connectives()) (c.second == 0 ? constants : compound).push_back(c);
  if (depth == 0 || compound.empty() || uniform(0, 2) == 0) {
    int pick = uniform(0, vars + static_cast<int>(constants.size()) - 1);
    if (pick < vars) return Formula::var(names[pick]);
    return Formula::app(constants[pick - vars].first);
  }
  const auto& c = compound[uniform(0, static_cast<int>(compound.size()) - 1)];
  std::vector<Formula> args;
  for (int i = 0; i < c.second; ++i) args.push_back(formula(sig, vars, depth - 1));
  return Formula::app(c.first, std::move(args));
}

Query QuerySampler::query(const Signature& sig, int vars, int depth, int max_premises, int max_conclusions) {
  Query q;
  for (int i = uniform(0, max_premises); i > 0; --i) q.gamma.insert(formula(sig, vars, depth));
  for (int i = uniform(0, max_conclusions); i > 0; --i) q.delta.insert(formula(sig, vars, depth));
  return q;
}

Query QuerySampler::single(const Signature& sig, int vars, int depth, int max_premises) {
  Query q;
  for (int i = uniform(0, max_premises); i > 0; --i) q.gamma.insert(formula(sig, vars, depth));
  q.delta.insert(formula(sig, vars, depth));
  return q;
}

const char* conclusion_name(SplitConclusion c) {
  switch (c) {
    case SplitConclusion::split_safe_multiple: return "split-safe-multiple";
    case SplitConclusion::split_safe_single_conditional: return "split-safe-single-conditional";
    case SplitConclusion::unsafe_evidence: return "unsafe-evidence";
    case SplitConclusion::inconclusive: return "inconclusive";
  }
  return "?";
}

SplitVerdict split_advice(const PNMatrix& m, const Signature& sig1, const Signature& sig2,
                          const SplitBounds& bounds, const std::vector<Query>& probes) {
  if (!(sig1.unite(sig2) == m.sig()))
    throw Error("the two signatures must together give the matrix signature " + m.sig().str());
  SplitVerdict out;
  out.shared = sig1.intersect(sig2);
  Decider dm(m);
  out.monadicity = monadicity_report(dm, out.shared, bounds.separators);
  out.saturation = refute_saturation(dm, bounds.saturation);

  Decider dp(strict_product(reduct(m, sig1), reduct(m, sig2)));
  auto compare = [&](const Query& q) {
    ++out.checked;
    Verdict a = dm.multiple(q.gamma, q.delta);
    Verdict b = dp.multiple(q.gamma, q.delta);
    if (a.answer == b.answer) return false;
    out.divergence = Divergence{q, std::move(a), std::move(b)};
    return true;
  };
  bool diverged = false;
  for (const auto& q : probes)
    if ((diverged = compare(q))) break;
  QuerySampler sampler(bounds.seed);
  for (int i = 0; i < bounds.samples && !diverged; ++i)
    diverged = compare(sampler.query(m.sig(), bounds.vars, bounds.depth, bounds.max_premises, bounds.max_conclusions));

  if (diverged)
    out.conclusion = SplitConclusion::unsafe_evidence;
  else if (out.monadicity.monadic())
    out.conclusion = out.saturation.witness ? SplitConclusion::split_safe_multiple
                                            : SplitConclusion::split_safe_single_conditional;
  else
    out.conclusion = SplitConclusion::inconclusive;
  return out;
}

// }}}

}  // namespace pnm
