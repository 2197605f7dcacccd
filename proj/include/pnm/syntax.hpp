// Signatures, formulas, substitutions and skeleton translation.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Signature {
 public:
  Signature() = default;
  Signature(std::initializer_list<std::pair<const std::string, int>> init);

  // Throws when the name is already declared with another arity.
  void add(const std::string& name, int arity);
  bool contains(const std::string& name) const;
  // -1 when absent.
  int arity(const std::string& name) const;
  bool empty() const { return conns_.empty(); }
  std::size_t size() const { return conns_.size(); }
  const std::map<std::string, int>& connectives() const { return conns_; }

  bool subsignature_of(const Signature& other) const;
  Signature unite(const Signature& other) const;
  Signature intersect(const Signature& other) const;
  Signature minus(const Signature& other) const;
  // Keeps only the listed names; throws on unknown names.
  Signature restrict_to(const std::vector<std::string>& names) const;

  // "and/2, neg/1"
  std::string str() const;
  static Signature parse(const std::string& text);

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, int> conns_;
};

class Formula {
 public:
  static Formula var(const std::string& name);
  static Formula app(const std::string& conn, std::vector<Formula> args = {});

  bool is_var() const { return node_->is_var; }
  // Variable name or connective name.
  const std::string& name() const { return node_->name; }
  const std::vector<Formula>& args() const { return node_->args; }
  std::size_t size() const { return node_->size; }
  int depth() const { return node_->depth; }
  const std::string& str() const { return node_->text; }
  std::size_t hash() const { return node_->hash; }

  // Ordered by size, then printed text; subformulas precede their parents.
  friend bool operator==(const Formula& a, const Formula& b) {
    return a.node_ == b.node_ || (a.node_->hash == b.node_->hash && a.node_->text == b.node_->text);
  }
  friend bool operator<(const Formula& a, const Formula& b) {
    if (a.node_->size != b.node_->size) return a.node_->size < b.node_->size;
    return a.node_->text < b.node_->text;
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend bool operator>(const Formula& a, const Formula& b) { return b < a; }

 private:
  struct Node {
    bool is_var = false;
    std::string name;
    std::vector<Formula> args;
    std::size_t size = 1;
    int depth = 0;
    std::string text;
    std::size_t hash = 0;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

using FormulaSet = std::set<Formula>;
using Substitution = std::map<std::string, Formula>;

struct ParseError : Error {
  std::size_t offset;
  ParseError(std::size_t off, const std::string& msg);
};

Formula parse_formula(const std::string& text, const Signature& sig);
// Comma-separated list; blank text or "-" gives the empty list.
std::vector<Formula> parse_formula_list(const std::string& text, const Signature& sig);
std::string print_formula(const Formula& f);
std::string print_formula_list(const std::vector<Formula>& fs);
std::string print_formula_list(const FormulaSet& fs);

struct Analysis {
  std::set<std::string> variables;
  FormulaSet subformulas;
  std::string head;
};
Analysis analyze(const Formula& f);

std::set<std::string> variables(const Formula& f);
void collect_variables(const Formula& f, std::set<std::string>& out);
void collect_subformulas(const Formula& f, FormulaSet& out);
FormulaSet subformulas(const FormulaSet& fs);
// Connectives used, with the arity at each use; throws on inconsistent arity.
Signature signature_of(const Formula& f);
// Throws unless every connective occurs in sig with its arity.
void check_over(const Formula& f, const Signature& sig);

Formula apply_substitution(const Formula& f, const Substitution& s);
// (tau after sigma)(p) = sigma(p)^tau
Substitution compose(const Substitution& tau, const Substitution& sigma);
std::optional<Substitution> match_instance(const Formula& candidate, const Formula& schema);

// Per-session bijection between fresh variables and monoliths, plus the
// variable renaming p -> v_p.
class MonolithMap {
 public:
  const std::string& name_for_monolith(const Formula& m);
  const std::string& name_for_variable(const std::string& v);
  const Formula* monolith(const std::string& fresh) const;
  const std::string* original_variable(const std::string& renamed) const;
  const std::map<std::string, Formula>& monoliths() const { return monoliths_; }
  std::size_t monolith_count() const { return monoliths_.size(); }

 private:
  std::map<std::string, Formula> monoliths_;
  std::map<Formula, std::string> monolith_names_;
  std::map<std::string, std::string> renamed_;   // fresh -> original
  std::map<std::string, std::string> renaming_;  // original -> fresh
};

Formula skeleton(const Formula& f, const Signature& sub_sig, MonolithMap& mm);
Formula unskeleton(const Formula& f, const MonolithMap& mm);

// All formulas over sig and vars with depth <= depth, sorted. Throws when
// more than cap formulas would be produced.
std::vector<Formula> enumerate_formulas(const Signature& sig, const std::vector<std::string>& vars,
                                        int depth, std::size_t cap);

}  // namespace pnm
