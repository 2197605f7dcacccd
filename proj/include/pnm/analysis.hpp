// Separators and monadicity, bounded saturation refutation, and advice on
// splitting a matrix into reducts.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pnm/engine.hpp"

namespace pnm {

// {{{ separators

struct SeparatorBounds {
  int depth = 3;
  std::size_t max_candidates = 5000;
};

// True when s (over the variable p) separates values x and y: both
// possibility sets are non-empty, one lies inside D and the other outside it.
bool is_separator(const Decider& d, const Formula& s, int x, int y);

struct SeparatorEntry {
  int x = 0;
  int y = 0;
  std::optional<Formula> separator;  // empty: not found within the bounds
};

struct SeparatorTable {
  Signature sub_sig;
  SeparatorBounds bounds;
  std::vector<SeparatorEntry> entries;  // one per unordered pair of usable values
  std::size_t candidates = 0;           // candidate formulas tested
  bool capped = false;                  // the candidate cap cut the enumeration

  bool monadic() const;
  FormulaSet separators() const;
};

// Candidates are one-variable formulas over sub_sig, tested in (size, text)
// order; the first separator is returned.
std::optional<Formula> find_separator(const PNMatrix& m, const std::string& x, const std::string& y,
                                      const Signature& sub_sig, int depth = 3);
std::optional<Formula> find_separator(const Decider& d, int x, int y, const Signature& sub_sig,
                                      const SeparatorBounds& bounds = {});
SeparatorTable monadicity_report(const PNMatrix& m, const Signature& sub_sig,
                                 const SeparatorBounds& bounds = {});
SeparatorTable monadicity_report(const Decider& d, const Signature& sub_sig,
                                 const SeparatorBounds& bounds = {});

// }}}

// {{{ saturation

struct SaturationBounds {
  int max_premises = 2;
  int max_phi = 3;
  int max_depth = 2;
  int max_vars = 3;
  std::size_t universe_cap = 20000;
  std::size_t max_phi_candidates = 20'000'000;
  std::uint32_t seed = 7;
};

// gamma0 derives no member of phi, yet every valuation designating gamma0
// designates some member of phi: the theory of gamma0 is the designated set
// of no valuation.
struct SaturationWitness {
  FormulaSet gamma0;
  FormulaSet phi;
};

// Empty when the witness is valid.
std::vector<std::string> check_witness(const Decider& d, const SaturationWitness& w);

struct SaturationResult {
  std::optional<SaturationWitness> witness;
  SaturationBounds bounds;
  bool budget_exhausted = false;
  std::size_t universe = 0;       // formulas in the search universe
  std::size_t premise_sets = 0;   // premise sets examined
  std::size_t solver_calls = 0;
};

SaturationResult refute_saturation(const PNMatrix& m, const SaturationBounds& bounds = {});
SaturationResult refute_saturation(const Decider& d, const SaturationBounds& bounds = {});

// }}}

// {{{ sampling and split advice

struct Query {
  FormulaSet gamma;
  FormulaSet delta;
};

class QuerySampler {
 public:
  explicit QuerySampler(std::uint32_t seed) : rng_(seed) {}
  Formula formula(const Signature& sig, int vars, int depth);
  Query query(const Signature& sig, int vars, int depth, int max_premises, int max_conclusions);
  // Exactly one conclusion.
  Query single(const Signature& sig, int vars, int depth, int max_premises);

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937 rng_;
};

enum class SplitConclusion { split_safe_multiple, split_safe_single_conditional, unsafe_evidence, inconclusive };
const char* conclusion_name(SplitConclusion c);

struct SplitBounds {
  SeparatorBounds separators;
  SaturationBounds saturation;
  int samples = 200;
  int vars = 3;
  int depth = 2;
  int max_premises = 3;
  int max_conclusions = 3;
  std::uint32_t seed = 1;
};

struct Divergence {
  Query query;
  Verdict over_matrix;
  Verdict over_product;
};

struct SplitVerdict {
  Signature shared;
  SeparatorTable monadicity;
  SaturationResult saturation;
  std::size_t checked = 0;  // probes and samples compared
  std::optional<Divergence> divergence;
  SplitConclusion conclusion = SplitConclusion::inconclusive;
};

// Probes are compared before the random samples.
SplitVerdict split_advice(const PNMatrix& m, const Signature& sig1, const Signature& sig2,
                          const SplitBounds& bounds = {}, const std::vector<Query>& probes = {});

// }}}

}  // namespace pnm
