#include "pnm/matrix.hpp"

#include <algorithm>
#include <set>

namespace pnm {

const char* kind_name(MatrixKind k) {
  switch (k) {
    case MatrixKind::matrix: return "matrix";
    case MatrixKind::Nmatrix: return "Nmatrix";
    case MatrixKind::Pmatrix: return "Pmatrix";
    case MatrixKind::PNmatrix: return "PNmatrix";
  }
  return "?";
}

namespace {

std::size_t checked_pow(std::size_t base, int exp, std::size_t cap, const std::string& what) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) throw Error(what + " exceeds cap of " + std::to_string(cap));
    r *= base;
  }
  if (r > cap) throw Error(what + " exceeds cap of " + std::to_string(cap));
  return r;
}

// Iterates all tuples of the given arity over n values in table order.
template <class F>
void for_each_tuple(std::size_t n, int arity, F&& f) {
  std::vector<int> t(arity, 0);
  if (arity > 0 && n == 0) return;
  while (true) {
    f(t);
    int k = arity - 1;
    while (k >= 0 && ++t[k] == static_cast<int>(n)) t[k--] = 0;
    if (k < 0) return;
  }
}

}  // namespace

// {{{ PNMatrix

PNMatrix::PNMatrix(Signature sig, std::vector<std::string> values,
                   const std::vector<std::string>& designated)
    : sig_(std::move(sig)), values_(std::move(values)) {
  if (values_.size() > kValueCap)
    throw Error("value count " + std::to_string(values_.size()) + " exceeds cap of " +
                std::to_string(kValueCap));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!index_.emplace(values_[i], static_cast<int>(i)).second)
      throw Error("duplicate value '" + values_[i] + "'");
  }
  designated_ = empty_set();
  for (const auto& d : designated) {
    int i = index_of(d);
    if (i < 0) throw Error("designated value '" + d + "' is not a value");
    designated_.set(i);
  }
  for (const auto& [name, ar] : sig_.connectives()) {
    std::size_t n = checked_pow(values_.size(), ar, kTableEntryCap, "table for '" + name + "'");
    tables_[name] = Table{ar, std::vector<ValueSet>(n, empty_set())};
  }
}

int PNMatrix::index_of(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

const PNMatrix::Table& PNMatrix::table(const std::string& conn) const {
  auto it = tables_.find(conn);
  if (it == tables_.end()) throw Error("no table for connective '" + conn + "'");
  return it->second;
}

std::size_t PNMatrix::tuple_index(const std::vector<int>& args) const {
  std::size_t idx = 0;
  for (int a : args) idx = idx * values_.size() + static_cast<std::size_t>(a);
  return idx;
}

std::vector<int> PNMatrix::tuple_at(std::size_t index, int arity) const {
  std::vector<int> t(arity);
  for (int i = arity - 1; i >= 0; --i) {
    t[i] = static_cast<int>(index % values_.size());
    index /= values_.size();
  }
  return t;
}

const ValueSet& PNMatrix::entry(const std::string& conn, const std::vector<int>& args) const {
  const Table& t = table(conn);
  if (static_cast<int>(args.size()) != t.arity) throw Error("wrong arity for '" + conn + "'");
  return t.entries[tuple_index(args)];
}

void PNMatrix::set_entry(const std::string& conn, const std::vector<int>& args, ValueSet out) {
  auto it = tables_.find(conn);
  if (it == tables_.end()) throw Error("no table for connective '" + conn + "'");
  if (static_cast<int>(args.size()) != it->second.arity) throw Error("wrong arity for '" + conn + "'");
  out.resize(values_.size());
  it->second.entries[tuple_index(args)] = std::move(out);
}

void PNMatrix::set_entry(const std::string& conn, const std::vector<std::string>& args,
                         const std::vector<std::string>& out) {
  std::vector<int> idx;
  for (const auto& a : args) {
    int i = index_of(a);
    if (i < 0) throw Error("unknown value '" + a + "'");
    idx.push_back(i);
  }
  ValueSet s = empty_set();
  for (const auto& o : out) {
    if (o == "*") {
      s.set();
      continue;
    }
    int i = index_of(o);
    if (i < 0) throw Error("unknown value '" + o + "'");
    s.set(i);
  }
  set_entry(conn, idx, std::move(s));
}

bool PNMatrix::total() const {
  for (const auto& [name, t] : tables_)
    for (const auto& e : t.entries)
      if (e.none()) return false;
  return true;
}

bool PNMatrix::deterministic() const {
  for (const auto& [name, t] : tables_)
    for (const auto& e : t.entries)
      if (e.count() > 1) return false;
  return true;
}

std::string PNMatrix::set_str(const ValueSet& s) const {
  std::string out = "{";
  bool first = true;
  for (auto i = s.find_first(); i != ValueSet::npos; i = s.find_next(i)) {
    if (!first) out += ", ";
    out += values_[i];
    first = false;
  }
  return out + "}";
}

// }}}

// {{{ validation

MatrixError::MatrixError(std::vector<std::string> ps)
    : Error([&] {
        std::string msg = "invalid matrix:";
        for (const auto& p : ps) msg += "\n  " + p;
        return msg;
      }()),
      problems(std::move(ps)) {}

namespace {
std::string where(int line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

std::string entry_name(const std::string& conn, const std::vector<std::string>& args) {
  std::string s = conn + "(";
  for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i];
  return s + ")";
}
}  // namespace

std::vector<std::string> validate(const MatrixSpec& spec) {
  std::vector<std::string> errs;
  std::map<std::string, int> index;
  for (const auto& v : spec.values) {
    if (v == "-" || v == "*" || v.empty()) errs.push_back("reserved value name '" + v + "'");
    if (!index.emplace(v, static_cast<int>(index.size())).second)
      errs.push_back("duplicate value '" + v + "'");
  }
  if (spec.values.size() > kValueCap) errs.push_back("too many values");
  for (const auto& d : spec.designated)
    if (!index.count(d)) errs.push_back("unknown designated value '" + d + "'");

  std::set<std::string> seen_tables;
  for (const auto& t : spec.tables) {
    const std::string at = where(t.line);
    int ar = spec.sig.arity(t.name);
    if (ar < 0) {
      errs.push_back(at + "table for undeclared connective '" + t.name + "'");
      continue;
    }
    if (!seen_tables.insert(t.name).second) {
      errs.push_back(at + "duplicate table for '" + t.name + "'");
      continue;
    }
    std::set<std::vector<std::string>> rows;
    for (const auto& r : t.rows) {
      const std::string rat = where(r.line);
      if (static_cast<int>(r.args.size()) != ar) {
        errs.push_back(rat + "row for '" + t.name + "' has " + std::to_string(r.args.size()) +
                       " arguments, expected " + std::to_string(ar));
        continue;
      }
      bool ok = true;
      for (const auto& a : r.args) {
        if (!index.count(a)) {
          errs.push_back(rat + "unknown value '" + a + "'");
          ok = false;
        }
      }
      for (const auto& o : r.outputs) {
        if (o != "*" && !index.count(o)) {
          errs.push_back(rat + "unknown value '" + o + "'");
          ok = false;
        }
      }
      if (ok && !rows.insert(r.args).second)
        errs.push_back(rat + "duplicate entry " + entry_name(t.name, r.args));
    }
    if (spec.values.size() <= kValueCap) {
      std::size_t expected = 1;
      bool small = true;
      for (int i = 0; i < ar && small; ++i) {
        expected *= spec.values.size();
        small = expected <= kTableEntryCap;
      }
      if (!small) {
        errs.push_back(at + "table for '" + t.name + "' is too large");
        continue;
      }
      for_each_tuple(spec.values.size(), ar, [&](const std::vector<int>& tup) {
        std::vector<std::string> names;
        for (int i : tup) names.push_back(spec.values[i]);
        if (!rows.count(names)) errs.push_back(at + "missing entry " + entry_name(t.name, names));
      });
    }
  }
  for (const auto& [name, ar] : spec.sig.connectives())
    if (!seen_tables.count(name)) errs.push_back("missing table for '" + name + "'");
  return errs;
}

std::vector<std::string> validate(const PNMatrix& m) {
  std::vector<std::string> errs;
  if (m.designated_set().size() != m.size()) errs.push_back("designated set has wrong width");
  for (const auto& [name, ar] : m.sig().connectives()) {
    auto it = m.tables().find(name);
    if (it == m.tables().end()) {
      errs.push_back("missing table for '" + name + "'");
      continue;
    }
    std::size_t expected = 1;
    for (int i = 0; i < ar; ++i) expected *= m.size();
    if (it->second.arity != ar || it->second.entries.size() != expected)
      errs.push_back("table for '" + name + "' has the wrong shape");
    for (const auto& e : it->second.entries)
      if (e.size() != m.size()) {
        errs.push_back("entry of '" + name + "' has wrong width");
        break;
      }
  }
  if (m.tables().size() != m.sig().size()) errs.push_back("table without a declared connective");
  return errs;
}

PNMatrix build_matrix(const MatrixSpec& spec) {
  auto errs = validate(spec);
  if (!errs.empty()) throw MatrixError(std::move(errs));
  PNMatrix m(spec.sig, spec.values, spec.designated);
  for (const auto& t : spec.tables)
    for (const auto& r : t.rows) m.set_entry(t.name, r.args, r.outputs);
  return m;
}

// }}}

// {{{ constructions

MatrixKind classify(const PNMatrix& m) {
  bool t = m.total(), d = m.deterministic();
  if (t && d) return MatrixKind::matrix;
  if (t) return MatrixKind::Nmatrix;
  if (d) return MatrixKind::Pmatrix;
  return MatrixKind::PNmatrix;
}

namespace {
std::vector<std::string> designated_names(const PNMatrix& m) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m.designated(static_cast<int>(i))) out.push_back(m.value(static_cast<int>(i)));
  return out;
}
}  // namespace

PNMatrix reduct(const PNMatrix& m, const Signature& sub_sig) {
  if (!sub_sig.subsignature_of(m.sig()))
    throw Error("reduct: {" + sub_sig.str() + "} is not a subsignature of {" + m.sig().str() + "}");
  PNMatrix out(sub_sig, m.values(), designated_names(m));
  for (const auto& [name, ar] : sub_sig.connectives()) {
    const auto& src = m.table(name).entries;
    for (std::size_t i = 0; i < src.size(); ++i) out.set_entry(name, m.tuple_at(i, ar), src[i]);
  }
  return out;
}

PNMatrix extend(const PNMatrix& m, const Signature& big_sig) {
  Signature sig = m.sig().unite(big_sig);  // throws on arity conflict
  PNMatrix out(sig, m.values(), designated_names(m));
  for (const auto& [name, ar] : sig.connectives()) {
    std::size_t n = out.table(name).entries.size();
    for (std::size_t i = 0; i < n; ++i) {
      auto t = out.tuple_at(i, ar);
      out.set_entry(name, t, m.sig().contains(name) ? m.entry(name, t) : out.full_set());
    }
  }
  return out;
}

PNMatrix strict_product(const PNMatrix& m1, const PNMatrix& m2) {
  Signature sig = m1.sig().unite(m2.sig());
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::string> names, des;
  for (std::size_t x = 0; x < m1.size(); ++x) {
    for (std::size_t y = 0; y < m2.size(); ++y) {
      bool dx = m1.designated(static_cast<int>(x)), dy = m2.designated(static_cast<int>(y));
      if (dx != dy) continue;
      pairs.emplace_back(static_cast<int>(x), static_cast<int>(y));
      names.push_back(m1.value(static_cast<int>(x)) + "|" + m2.value(static_cast<int>(y)));
      if (dx) des.push_back(names.back());
    }
  }
  PNMatrix out(sig, names, des);
  for (const auto& [name, ar] : sig.connectives()) {
    const bool in1 = m1.sig().contains(name), in2 = m2.sig().contains(name);
    std::vector<int> xs(ar), ys(ar);
    for_each_tuple(pairs.size(), ar, [&](const std::vector<int>& t) {
      for (int i = 0; i < ar; ++i) {
        xs[i] = pairs[t[i]].first;
        ys[i] = pairs[t[i]].second;
      }
      const ValueSet e1 = in1 ? m1.entry(name, xs) : m1.full_set();
      const ValueSet e2 = in2 ? m2.entry(name, ys) : m2.full_set();
      ValueSet s = out.empty_set();
      for (std::size_t p = 0; p < pairs.size(); ++p)
        if (e1[pairs[p].first] && e2[pairs[p].second]) s.set(p);
      out.set_entry(name, t, std::move(s));
    });
  }
  return out;
}

PNMatrix sum(const std::vector<PNMatrix>& ms) {
  if (ms.empty()) throw Error("sum of no matrices");
  const Signature& sig = ms.front().sig();
  std::vector<std::string> names, des;
  std::vector<std::size_t> offset;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (!(ms[i].sig() == sig)) throw Error("sum: signature mismatch between summands 1 and " + std::to_string(i + 1));
    offset.push_back(names.size());
    for (std::size_t x = 0; x < ms[i].size(); ++x) {
      names.push_back(std::to_string(i + 1) + "." + ms[i].value(static_cast<int>(x)));
      if (ms[i].designated(static_cast<int>(x))) des.push_back(names.back());
    }
  }
  PNMatrix out(sig, names, des);
  for (const auto& [name, ar] : sig.connectives()) {
    if (ar == 0) {
      ValueSet s = out.empty_set();
      for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto& e = ms[i].entry(name, {});
        for (auto y = e.find_first(); y != ValueSet::npos; y = e.find_next(y)) s.set(offset[i] + y);
      }
      out.set_entry(name, std::vector<int>{}, std::move(s));
      continue;
    }
    // cross-index tuples keep the empty entry from construction
    for (std::size_t i = 0; i < ms.size(); ++i) {
      std::vector<int> tagged(ar);
      for_each_tuple(ms[i].size(), ar, [&](const std::vector<int>& t) {
        for (int j = 0; j < ar; ++j) tagged[j] = static_cast<int>(offset[i]) + t[j];
        const auto& e = ms[i].entry(name, t);
        ValueSet s = out.empty_set();
        for (auto y = e.find_first(); y != ValueSet::npos; y = e.find_next(y)) s.set(offset[i] + y);
        out.set_entry(name, tagged, std::move(s));
      });
    }
  }
  return out;
}

PNMatrix power(const PNMatrix& m, int k) {
  if (k < 1) throw Error("power: exponent must be positive");
  const std::size_t n = checked_pow(m.size(), k, kValueCap, "power value count");
  std::vector<std::vector<int>> tuples;
  std::vector<std::string> names, des;
  for_each_tuple(m.size(), k, [&](const std::vector<int>& t) {
    std::string name;
    bool d = true;
    for (int j = 0; j < k; ++j) {
      if (j) name += "&";
      name += m.value(t[j]);
      d = d && m.designated(t[j]);
    }
    tuples.push_back(t);
    names.push_back(name);
    if (d) des.push_back(name);
  });
  PNMatrix out(m.sig(), names, des);
  for (const auto& [name, ar] : m.sig().connectives()) {
    std::vector<int> comp(ar);
    for_each_tuple(n, ar, [&](const std::vector<int>& t) {
      // per coordinate, the allowed outputs
      std::vector<const ValueSet*> allowed(k);
      for (int j = 0; j < k; ++j) {
        for (int i = 0; i < ar; ++i) comp[i] = tuples[t[i]][j];
        allowed[j] = &m.entry(name, comp);
      }
      ValueSet s = out.empty_set();
      for (std::size_t v = 0; v < n; ++v) {
        bool ok = true;
        for (int j = 0; j < k && ok; ++j) ok = (*allowed[j])[tuples[v][j]];
        if (ok) s.set(v);
      }
      out.set_entry(name, t, std::move(s));
    });
  }
  return out;
}

PNMatrix restrict_values(const PNMatrix& m, const std::vector<int>& keep_in) {
  std::vector<int> keep = keep_in;
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::vector<int> local(m.size(), -1);
  std::vector<std::string> names, des;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    local[keep[i]] = static_cast<int>(i);
    names.push_back(m.value(keep[i]));
    if (m.designated(keep[i])) des.push_back(names.back());
  }
  PNMatrix out(m.sig(), names, des);
  for (const auto& [name, ar] : m.sig().connectives()) {
    std::vector<int> orig(ar);
    for_each_tuple(keep.size(), ar, [&](const std::vector<int>& t) {
      for (int i = 0; i < ar; ++i) orig[i] = keep[t[i]];
      const auto& e = m.entry(name, orig);
      ValueSet s = out.empty_set();
      for (auto y = e.find_first(); y != ValueSet::npos; y = e.find_next(y))
        if (local[y] >= 0) s.set(local[y]);
      out.set_entry(name, t, std::move(s));
    });
  }
  return out;
}

// }}}

// {{{ viability

bool viable(const PNMatrix& m, const ValueSet& w) {
  std::vector<int> members;
  for (auto i = w.find_first(); i != ValueSet::npos; i = w.find_next(i)) members.push_back(static_cast<int>(i));
  for (const auto& [name, t] : m.tables()) {
    std::vector<int> args(t.arity);
    bool ok = true;
    for_each_tuple(members.size(), t.arity, [&](const std::vector<int>& idx) {
      if (!ok) return;
      for (int i = 0; i < t.arity; ++i) args[i] = members[idx[i]];
      if (!t.entries[m.tuple_index(args)].intersects(w)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

namespace {

struct Certificate {
  std::uint32_t needs;  // values of the failing tuple
  std::uint32_t entry;  // its table entry
};

// Finds a failing (tuple, entry) pair inside w, if any.
bool find_failure(const std::vector<std::pair<int, std::vector<std::uint32_t>>>& tabs, std::size_t n,
                  std::uint32_t w, Certificate& cert) {
  int members[32];
  int cnt = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (w >> i & 1u) members[cnt++] = static_cast<int>(i);
  for (const auto& [ar, entries] : tabs) {
    std::vector<int> idx(ar, 0);
    if (ar > 0 && cnt == 0) continue;
    while (true) {
      std::size_t ti = 0;
      std::uint32_t needs = 0;
      for (int i = 0; i < ar; ++i) {
        ti = ti * n + static_cast<std::size_t>(members[idx[i]]);
        needs |= 1u << members[idx[i]];
      }
      if ((entries[ti] & w) == 0) {
        cert = {needs, entries[ti]};
        return true;
      }
      int k = ar - 1;
      while (k >= 0 && ++idx[k] == cnt) idx[k--] = 0;
      if (k < 0) break;
    }
  }
  return false;
}

}  // namespace

ViabilityReport viable_components(const PNMatrix& m, std::size_t cap) {
  ViabilityReport rep;
  const std::size_t n = m.size();
  rep.usable = m.empty_set();
  rep.spurious = m.empty_set();
  if (n == 0) return rep;
  std::vector<int> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
  if (m.total() || viable(m, m.full_set())) {
    rep.components.push_back(all);
    rep.usable = m.full_set();
    return rep;
  }
  if (n > cap || n > 31)
    throw Error("viability analysis of a non-total matrix with " + std::to_string(n) +
                " values exceeds cap of " + std::to_string(std::min<std::size_t>(cap, 31)));

  std::vector<std::pair<int, std::vector<std::uint32_t>>> tabs;
  for (const auto& [name, t] : m.tables()) {
    std::vector<std::uint32_t> e;
    for (const auto& s : t.entries) e.push_back(static_cast<std::uint32_t>(s.to_ulong()));
    tabs.emplace_back(t.arity, std::move(e));
  }

  std::vector<Certificate> certs;
  std::vector<std::uint32_t> viable_sets;
  const std::uint32_t top = (1u << n) - 1;
  for (std::uint32_t w = top; w >= 1; --w) {
    bool dead = false;
    for (const auto& c : certs)
      if ((c.needs & ~w) == 0 && (c.entry & w) == 0) {
        dead = true;
        break;
      }
    if (dead) continue;
    Certificate c{};
    if (find_failure(tabs, n, w, c))
      certs.push_back(c);
    else
      viable_sets.push_back(w);
  }

  std::stable_sort(viable_sets.begin(), viable_sets.end(), [](std::uint32_t a, std::uint32_t b) {
    return __builtin_popcount(a) > __builtin_popcount(b);
  });
  std::vector<std::uint32_t> maximal;
  for (auto w : viable_sets) {
    bool covered = false;
    for (auto big : maximal)
      if ((w & ~big) == 0) {
        covered = true;
        break;
      }
    if (!covered) maximal.push_back(w);
  }
  for (auto w : maximal) {
    std::vector<int> comp;
    for (std::size_t i = 0; i < n; ++i)
      if (w >> i & 1u) {
        comp.push_back(static_cast<int>(i));
        rep.usable.set(i);
      }
    rep.components.push_back(std::move(comp));
  }
  std::sort(rep.components.begin(), rep.components.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  rep.spurious = ~rep.usable;
  return rep;
}

PNMatrix prune(const PNMatrix& m) {
  auto rep = viable_components(m);
  std::vector<int> keep;
  for (auto i = rep.usable.find_first(); i != ValueSet::npos; i = rep.usable.find_next(i))
    keep.push_back(static_cast<int>(i));
  return restrict_values(m, keep);
}

// }}}

// {{{ homomorphisms

std::optional<std::string> check_strict_hom(const ValueMap& h, const PNMatrix& m, const PNMatrix& m0) {
  if (!m0.sig().subsignature_of(m.sig())) return "target signature is not a subsignature of the source";
  std::vector<int> img(m.size());
  for (std::size_t x = 0; x < m.size(); ++x) {
    auto it = h.find(m.value(static_cast<int>(x)));
    if (it == h.end()) return "map is undefined on value " + m.value(static_cast<int>(x));
    int y = m0.index_of(it->second);
    if (y < 0) return "image " + it->second + " is not a value of the target";
    img[x] = y;
    if (m.designated(static_cast<int>(x)) != m0.designated(y))
      return "designation not reflected at " + m.value(static_cast<int>(x)) + " -> " + it->second;
  }
  for (const auto& [name, ar] : m0.sig().connectives()) {
    std::optional<std::string> bad;
    std::vector<int> mapped(ar);
    for_each_tuple(m.size(), ar, [&](const std::vector<int>& t) {
      if (bad) return;
      for (int i = 0; i < ar; ++i) mapped[i] = img[t[i]];
      const auto& src = m.entry(name, t);
      const auto& dst = m0.entry(name, mapped);
      for (auto y = src.find_first(); y != ValueSet::npos; y = src.find_next(y)) {
        if (!dst[img[y]]) {
          std::string args;
          for (int i = 0; i < ar; ++i) args += (i ? "," : "") + m.value(t[i]);
          bad = name + "(" + args + ") contains " + m.value(static_cast<int>(y)) + " but its image " +
                m0.value(img[y]) + " is not allowed in the target";
          return;
        }
      }
    });
    if (bad) return bad;
  }
  return std::nullopt;
}

ValueMap projection(const PNMatrix& m1, const PNMatrix& m2, int side) {
  ValueMap h;
  for (std::size_t x = 0; x < m1.size(); ++x)
    for (std::size_t y = 0; y < m2.size(); ++y) {
      if (m1.designated(static_cast<int>(x)) != m2.designated(static_cast<int>(y))) continue;
      const auto& a = m1.value(static_cast<int>(x));
      const auto& b = m2.value(static_cast<int>(y));
      h[a + "|" + b] = side == 1 ? a : b;
    }
  return h;
}

ValueMap inclusion(const PNMatrix& component, int index) {
  ValueMap h;
  for (const auto& v : component.values()) h[v] = std::to_string(index) + "." + v;
  return h;
}

// }}}

}  // namespace pnm
