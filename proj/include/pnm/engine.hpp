// Countermodel search and consequence decisions over a finite PNmatrix.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pnm/matrix.hpp"
#include "pnm/syntax.hpp"

namespace pnm {

inline constexpr std::size_t kComponentCap = 64;

enum class Answer { yes, no, unknown };
const char* answer_name(Answer a);

struct Countermodel {
  std::map<Formula, std::string> assignment;
  std::vector<std::string> component;
};

struct Diagnostics {
  std::size_t components = 0;   // viable components searched
  std::size_t assignments = 0;  // value trials during backtracking
};

struct Verdict {
  Answer answer = Answer::unknown;
  std::optional<Countermodel> countermodel;
  std::string note;
  Diagnostics diagnostics;
};

namespace detail {
struct Component;
}

// Caches the viability analysis and compiled tables of one matrix.
class Decider {
 public:
  explicit Decider(const PNMatrix& m);
  ~Decider();
  Decider(const Decider&) = delete;
  Decider& operator=(const Decider&) = delete;

  const PNMatrix& matrix() const { return m_; }
  const ViabilityReport& viability() const { return viability_; }

  Verdict multiple(const FormulaSet& gamma, const FormulaSet& delta) const;
  Verdict single(const FormulaSet& gamma, const Formula& a) const;
  ValueSet possible(const Formula& a, int x, const std::string& var = "p") const;
  // Decides a query over a larger signature through its skeleton over the
  // matrix signature; agrees with deciding over the extended matrix.
  Verdict multiple_skeleton(const FormulaSet& gamma, const FormulaSet& delta) const;

  // internal
  int conn_id(const std::string& name) const;
  const detail::Component& component(std::size_t i) const;
  std::size_t component_count() const { return viability_.components.size(); }

 private:
  PNMatrix m_;
  ViabilityReport viability_;
  std::map<std::string, int> conn_ids_;
  mutable std::vector<std::unique_ptr<detail::Component>> compiled_;
};

// Prevaluation search over a fixed, subformula-closed list of formulas.
class Space {
 public:
  // Requirement per formula.
  static constexpr signed char kAny = -1, kUndesignated = 0, kDesignated = 1;

  Space(const Decider& d, const FormulaSet& scope);

  const std::vector<Formula>& formulas() const { return formulas_; }
  int index_of(const Formula& f) const;

  struct Solution {
    std::vector<int> values;  // global value index per formula
    std::size_t component = 0;
  };
  // First prevaluation in search order meeting the designation requirements.
  std::optional<Solution> solve(const std::vector<signed char>& req, std::size_t* nodes = nullptr,
                                std::size_t* components = nullptr) const;
  // As solve, additionally restricting formulas to the given global values;
  // only_component limits the search to one component.
  std::optional<Solution> solve_with(const std::vector<signed char>& req,
                                     const std::vector<std::pair<int, std::vector<int>>>& allowed,
                                     std::optional<std::size_t> only_component = std::nullopt,
                                     std::size_t* nodes = nullptr,
                                     std::size_t* components = nullptr) const;

  // internal structure, shared with the search
  struct Node {
    int conn = -1;  // -1 for variables
    std::vector<int> args;
  };
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::vector<int>>& users() const { return users_; }

 private:
  const Decider& d_;
  std::vector<Formula> formulas_;
  std::map<Formula, int> index_;
  std::vector<Node> nodes_;
  std::vector<std::vector<int>> users_;
  std::vector<int> order_;  // formulas used as arguments, in search order
};

Verdict decide_multiple(const PNMatrix& m, const FormulaSet& gamma, const FormulaSet& delta);
Verdict decide_single(const PNMatrix& m, const FormulaSet& gamma, const Formula& a);
Verdict decide_skeleton(const PNMatrix& m, const FormulaSet& gamma, const FormulaSet& delta);
ValueSet possible_values(const PNMatrix& m, const Formula& a, const std::string& x,
                         const std::string& var = "p");
// Empty when the countermodel is valid.
std::vector<std::string> check_countermodel(const PNMatrix& m, const FormulaSet& gamma,
                                            const FormulaSet& delta, const Countermodel& cm);

}  // namespace pnm
