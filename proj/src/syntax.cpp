#include "pnm/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace pnm {

// {{{ Signature

Signature::Signature(std::initializer_list<std::pair<const std::string, int>> init) {
  for (const auto& [name, ar] : init) add(name, ar);
}

void Signature::add(const std::string& name, int arity) {
  if (arity < 0) throw Error("negative arity for connective '" + name + "'");
  auto it = conns_.find(name);
  if (it != conns_.end() && it->second != arity) {
    throw Error("connective '" + name + "' declared with arities " + std::to_string(it->second) +
                " and " + std::to_string(arity));
  }
  conns_[name] = arity;
}

bool Signature::contains(const std::string& name) const { return conns_.count(name) != 0; }

int Signature::arity(const std::string& name) const {
  auto it = conns_.find(name);
  return it == conns_.end() ? -1 : it->second;
}

bool Signature::subsignature_of(const Signature& other) const {
  for (const auto& [name, ar] : conns_)
    if (other.arity(name) != ar) return false;
  return true;
}

Signature Signature::unite(const Signature& other) const {
  Signature out = *this;
  for (const auto& [name, ar] : other.conns_) out.add(name, ar);
  return out;
}

Signature Signature::intersect(const Signature& other) const {
  Signature out;
  for (const auto& [name, ar] : conns_)
    if (other.arity(name) == ar) out.conns_[name] = ar;
  return out;
}

Signature Signature::minus(const Signature& other) const {
  Signature out;
  for (const auto& [name, ar] : conns_)
    if (other.arity(name) != ar) out.conns_[name] = ar;
  return out;
}

Signature Signature::restrict_to(const std::vector<std::string>& names) const {
  Signature out;
  for (const auto& n : names) {
    int ar = arity(n);
    if (ar < 0) throw Error("unknown connective '" + n + "'");
    out.conns_[n] = ar;
  }
  return out;
}

std::string Signature::str() const {
  std::string out;
  for (const auto& [name, ar] : conns_) {
    if (!out.empty()) out += ", ";
    out += name + "/" + std::to_string(ar);
  }
  return out;
}

Signature Signature::parse(const std::string& text) {
  Signature out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    auto e = item.find_last_not_of(" \t");
    item = item.substr(b, e - b + 1);
    auto slash = item.find('/');
    if (slash == std::string::npos) throw Error("expected name/arity, got '" + item + "'");
    std::string name = item.substr(0, slash);
    int ar = 0;
    try {
      ar = std::stoi(item.substr(slash + 1));
    } catch (const std::exception&) {
      throw Error("bad arity in '" + item + "'");
    }
    out.add(name, ar);
  }
  return out;
}

// }}}

// {{{ Formula

Formula Formula::var(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->name = name;
  n->text = name;
  n->hash = std::hash<std::string>{}(n->text);
  return Formula(std::move(n));
}

Formula Formula::app(const std::string& conn, std::vector<Formula> args) {
  auto n = std::make_shared<Node>();
  n->name = conn;
  n->text = conn;
  if (!args.empty()) {
    n->text += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) n->text += ',';
      n->text += args[i].str();
      n->size += args[i].size();
      n->depth = std::max(n->depth, args[i].depth() + 1);
    }
    n->text += ')';
  }
  n->args = std::move(args);
  n->hash = std::hash<std::string>{}(n->text);
  return Formula(std::move(n));
}

// }}}

// {{{ parsing

ParseError::ParseError(std::size_t off, const std::string& msg)
    : Error("offset " + std::to_string(off) + ": " + msg), offset(off) {}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig) : s_(text), sig_(sig) {}

  Formula formula() {
    skip();
    std::size_t start = pos_;
    if (pos_ >= s_.size()) throw ParseError(pos_, "expected formula, found end of input");
    if (!ident_start(s_[pos_])) throw ParseError(pos_, std::string("unexpected character '") + s_[pos_] + "'");
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    skip();
    int ar = sig_.arity(name);
    if (pos_ < s_.size() && s_[pos_] == '(') {
      if (ar < 0) throw ParseError(start, "unknown connective '" + name + "'");
      ++pos_;
      std::vector<Formula> args;
      args.push_back(formula());
      skip();
      while (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        args.push_back(formula());
        skip();
      }
      if (pos_ >= s_.size()) throw ParseError(pos_, "unbalanced parentheses: missing ')'");
      if (s_[pos_] != ')') throw ParseError(pos_, std::string("expected ',' or ')', found '") + s_[pos_] + "'");
      ++pos_;
      if (static_cast<int>(args.size()) != ar) {
        throw ParseError(start, "arity mismatch: '" + name + "' expects " + std::to_string(ar) +
                                    " arguments, got " + std::to_string(args.size()));
      }
      return Formula::app(name, std::move(args));
    }
    if (ar > 0) {
      throw ParseError(start, "arity mismatch: '" + name + "' expects " + std::to_string(ar) +
                                  " arguments, got 0");
    }
    if (ar == 0) return Formula::app(name);
    return Formula::var(name);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip();
    return pos_ >= s_.size();
  }
  std::size_t pos() const { return pos_; }
  char peek() const { return s_[pos_]; }
  void advance() { ++pos_; }

 private:
  const std::string& s_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

void trailing(Parser& p) {
  if (p.peek() == ')') throw ParseError(p.pos(), "unbalanced parentheses: unexpected ')'");
  throw ParseError(p.pos(), std::string("unexpected trailing character '") + p.peek() + "'");
}

}  // namespace

Formula parse_formula(const std::string& text, const Signature& sig) {
  Parser p(text, sig);
  Formula f = p.formula();
  if (!p.at_end()) trailing(p);
  return f;
}

std::vector<Formula> parse_formula_list(const std::string& text, const Signature& sig) {
  std::vector<Formula> out;
  Parser p(text, sig);
  if (p.at_end()) return out;
  if (p.peek() == '-') {
    p.advance();
    if (!p.at_end()) trailing(p);
    return out;
  }
  out.push_back(p.formula());
  while (!p.at_end()) {
    if (p.peek() != ',') trailing(p);
    p.advance();
    out.push_back(p.formula());
  }
  return out;
}

std::string print_formula(const Formula& f) { return f.str(); }

std::string print_formula_list(const std::vector<Formula>& fs) {
  std::string out;
  for (const auto& f : fs) {
    if (!out.empty()) out += ", ";
    out += f.str();
  }
  return out;
}

std::string print_formula_list(const FormulaSet& fs) {
  return print_formula_list(std::vector<Formula>(fs.begin(), fs.end()));
}

// }}}

// {{{ inspection

void collect_variables(const Formula& f, std::set<std::string>& out) {
  if (f.is_var()) {
    out.insert(f.name());
    return;
  }
  for (const auto& a : f.args()) collect_variables(a, out);
}

std::set<std::string> variables(const Formula& f) {
  std::set<std::string> out;
  collect_variables(f, out);
  return out;
}

void collect_subformulas(const Formula& f, FormulaSet& out) {
  if (!out.insert(f).second) return;
  for (const auto& a : f.args()) collect_subformulas(a, out);
}

FormulaSet subformulas(const FormulaSet& fs) {
  FormulaSet out;
  for (const auto& f : fs) collect_subformulas(f, out);
  return out;
}

Analysis analyze(const Formula& f) {
  Analysis a;
  collect_variables(f, a.variables);
  collect_subformulas(f, a.subformulas);
  a.head = f.name();
  return a;
}

namespace {
void gather_sig(const Formula& f, Signature& sig) {
  if (f.is_var()) return;
  sig.add(f.name(), static_cast<int>(f.args().size()));
  for (const auto& a : f.args()) gather_sig(a, sig);
}
}  // namespace

Signature signature_of(const Formula& f) {
  Signature sig;
  gather_sig(f, sig);
  return sig;
}

void check_over(const Formula& f, const Signature& sig) {
  if (f.is_var()) return;
  int ar = sig.arity(f.name());
  if (ar < 0) throw Error("connective '" + f.name() + "' is not in the signature");
  if (ar != static_cast<int>(f.args().size()))
    throw Error("connective '" + f.name() + "' used with wrong arity in " + f.str());
  for (const auto& a : f.args()) check_over(a, sig);
}

// }}}

// {{{ substitution and matching

Formula apply_substitution(const Formula& f, const Substitution& s) {
  if (f.is_var()) {
    auto it = s.find(f.name());
    return it == s.end() ? f : it->second;
  }
  if (f.args().empty()) return f;
  std::vector<Formula> args;
  args.reserve(f.args().size());
  for (const auto& a : f.args()) args.push_back(apply_substitution(a, s));
  return Formula::app(f.name(), std::move(args));
}

Substitution compose(const Substitution& tau, const Substitution& sigma) {
  Substitution out;
  for (const auto& [v, g] : sigma) out.emplace(v, apply_substitution(g, tau));
  for (const auto& [v, g] : tau)
    if (!sigma.count(v)) out.emplace(v, g);
  return out;
}

namespace {
bool match_into(const Formula& cand, const Formula& schema, Substitution& s) {
  if (schema.is_var()) {
    auto [it, fresh] = s.emplace(schema.name(), cand);
    return fresh || it->second == cand;
  }
  if (cand.is_var() || cand.name() != schema.name() || cand.args().size() != schema.args().size())
    return false;
  for (std::size_t i = 0; i < cand.args().size(); ++i)
    if (!match_into(cand.args()[i], schema.args()[i], s)) return false;
  return true;
}
}  // namespace

std::optional<Substitution> match_instance(const Formula& candidate, const Formula& schema) {
  Substitution s;
  if (!match_into(candidate, schema, s)) return std::nullopt;
  return s;
}

// }}}

// {{{ skeleton

const std::string& MonolithMap::name_for_monolith(const Formula& m) {
  auto it = monolith_names_.find(m);
  if (it != monolith_names_.end()) return it->second;
  std::string name = "m" + std::to_string(monoliths_.size() + 1);
  monoliths_.emplace(name, m);
  return monolith_names_.emplace(m, name).first->second;
}

const std::string& MonolithMap::name_for_variable(const std::string& v) {
  auto it = renaming_.find(v);
  if (it != renaming_.end()) return it->second;
  std::string fresh = "v_" + v;
  renamed_.emplace(fresh, v);
  return renaming_.emplace(v, fresh).first->second;
}

const Formula* MonolithMap::monolith(const std::string& fresh) const {
  auto it = monoliths_.find(fresh);
  return it == monoliths_.end() ? nullptr : &it->second;
}

const std::string* MonolithMap::original_variable(const std::string& renamed) const {
  auto it = renamed_.find(renamed);
  return it == renamed_.end() ? nullptr : &it->second;
}

Formula skeleton(const Formula& f, const Signature& sub_sig, MonolithMap& mm) {
  if (f.is_var()) return Formula::var(mm.name_for_variable(f.name()));
  if (sub_sig.arity(f.name()) != static_cast<int>(f.args().size()))
    return Formula::var(mm.name_for_monolith(f));
  std::vector<Formula> args;
  args.reserve(f.args().size());
  for (const auto& a : f.args()) args.push_back(skeleton(a, sub_sig, mm));
  return Formula::app(f.name(), std::move(args));
}

Formula unskeleton(const Formula& f, const MonolithMap& mm) {
  if (f.is_var()) {
    if (const Formula* m = mm.monolith(f.name())) return *m;
    if (const std::string* v = mm.original_variable(f.name())) return Formula::var(*v);
    throw Error("unskeleton: variable '" + f.name() + "' is not in the monolith map");
  }
  std::vector<Formula> args;
  args.reserve(f.args().size());
  for (const auto& a : f.args()) args.push_back(unskeleton(a, mm));
  return Formula::app(f.name(), std::move(args));
}

// }}}

// {{{ enumeration

std::vector<Formula> enumerate_formulas(const Signature& sig, const std::vector<std::string>& vars,
                                        int depth, std::size_t cap) {
  // layers[d] holds the formulas of depth exactly d
  std::vector<std::vector<Formula>> layers(1);
  std::size_t total = 0;
  auto push = [&](std::vector<Formula>& layer, Formula f) {
    if (++total > cap) throw Error("formula enumeration exceeds cap of " + std::to_string(cap));
    layer.push_back(std::move(f));
  };
  for (const auto& v : vars) push(layers[0], Formula::var(v));
  for (const auto& [name, ar] : sig.connectives())
    if (ar == 0) push(layers[0], Formula::app(name));

  std::vector<Formula> below;  // all formulas of depth < d
  for (int d = 1; d <= depth; ++d) {
    below.insert(below.end(), layers[d - 1].begin(), layers[d - 1].end());
    const std::size_t fresh_from = below.size() - layers[d - 1].size();
    layers.emplace_back();
    for (const auto& [name, ar] : sig.connectives()) {
      if (ar == 0) continue;
      std::vector<std::size_t> idx(ar, 0);
      while (true) {
        bool has_fresh = false;
        for (auto i : idx) has_fresh |= i >= fresh_from;
        if (has_fresh) {
          std::vector<Formula> args;
          for (auto i : idx) args.push_back(below[i]);
          push(layers[d], Formula::app(name, std::move(args)));
        }
        int k = ar - 1;
        while (k >= 0 && ++idx[k] == below.size()) idx[k--] = 0;
        if (k < 0) break;
      }
    }
    if (layers[d].empty()) break;
  }
  std::vector<Formula> out;
  for (auto& l : layers) out.insert(out.end(), l.begin(), l.end());
  std::sort(out.begin(), out.end());
  return out;
}

// }}}

}  // namespace pnm
