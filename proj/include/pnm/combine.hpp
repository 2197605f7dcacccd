// Combining two matrix-presented logics: strict products for multiple- and
// single-conclusion combination, decisions by partitioning a finite context,
// and strengthening by schema axioms.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pnm/analysis.hpp"
#include "pnm/engine.hpp"

namespace pnm {

struct CombinedLogic {
  PNMatrix left;
  PNMatrix right;
  PNMatrix matrix;  // strict product over the union signature
  bool total = false;
  bool pruned = false;
  // "exact", "conditional on saturation" or "finite approximation"
  std::string label;
  std::vector<std::string> notes;
};

CombinedLogic combine_multiple(const PNMatrix& m1, const PNMatrix& m2, bool prune_values = false);

// Thrown when saturation of an input is refuted.
struct SaturationRefused : Error {
  int input;  // 1 or 2
  SaturationWitness witness;
  SaturationRefused(int which, SaturationWitness w);
};

// Inputs matching a known-saturated fixture skip the refuter; otherwise the
// refuter runs and a witness aborts the combination.
CombinedLogic combine_single_saturated(const PNMatrix& m1, const PNMatrix& m2,
                                       const SaturationBounds& bounds = {});
CombinedLogic combine_single_power(const PNMatrix& m1, const PNMatrix& m2, int k1, int k2,
                                   const SaturationBounds& bounds = {});

// {{{ context partitions

enum class Mode { multiple, single };

struct ContextOptions {
  std::size_t ctx_cap = 12;
  // Re-decide every component query over the extended matrix and throw on
  // disagreement with the skeleton route.
  bool cross_check = false;
  // Single mode: the caller vouches for saturation of both inputs.
  bool saturated = false;
};

struct ContextVerdict {
  Verdict verdict;
  bool certified = false;
  std::string certification;
  std::vector<Formula> ctx;
  std::size_t partitions = 0;       // partial and complete partitions visited
  std::size_t component_calls = 0;  // component decisions made
  std::size_t cross_checks = 0;
  // First failing partition in search order: (below, above).
  std::optional<std::pair<FormulaSet, FormulaSet>> failing;
};

// Single mode expects delta to hold exactly the conclusion.
ContextVerdict decide_combined_ctx(const PNMatrix& m1, const PNMatrix& m2, Mode mode, const FormulaSet& gamma,
                                   const FormulaSet& delta, const FormulaSet& ctx_extra = {},
                                   const ContextOptions& options = {});

// }}}

// {{{ axioms

struct AxiomSet {
  Signature sig;
  std::vector<Formula> schemas;
  int depth = 2;
  std::size_t cap = 200000;
};

AxiomSet parse_axioms(const std::string& text, const Signature& sig, int depth = 2);

// Instances of the schemas whose variables range over the formulas of depth
// at most ax.depth built from the variables of universe with the
// connectives of ax.sig, together with the subformulas of universe of depth
// at most ax.depth.
FormulaSet axiom_instances(const AxiomSet& ax, const FormulaSet& universe);
bool is_axiom_instance(const AxiomSet& ax, const Formula& f);

// yes when gamma plus the bounded instances derive a over m; otherwise unknown.
Verdict decide_with_axioms(const PNMatrix& m, const AxiomSet& ax, const FormulaSet& gamma, const Formula& a);

// }}}

}  // namespace pnm
