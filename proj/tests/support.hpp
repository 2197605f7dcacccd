// Test-side helpers: random query generation and brute-force oracles that
// share no code with the library's search.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "pnm/matrix.hpp"
#include "pnm/syntax.hpp"

namespace pnmtest {

using pnm::Formula;
using pnm::FormulaSet;
using pnm::PNMatrix;
using pnm::Signature;

struct Query {
  FormulaSet gamma;
  FormulaSet delta;
};

class Gen {
 public:
  explicit Gen(std::uint32_t seed) : rng_(seed) {}

  Formula formula(const Signature& sig, int vars, int depth);
  FormulaSet formulas(const Signature& sig, int vars, int depth, int max_count);
  Query query(const Signature& sig, int vars = 3, int depth = 2, int max_premises = 3,
              int max_conclusions = 3);
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937 rng_;
};

// Enumerates every value assignment on sub(gamma u delta) and accepts one as
// a countermodel when it respects the tables and its image lies inside a set
// that passes the viability definition (all subsets are tried).
bool oracle_follows(const PNMatrix& m, const FormulaSet& gamma, const FormulaSet& delta);

// All maximal viable sets by testing every subset, as sorted index lists.
std::vector<std::vector<int>> oracle_maximal_viable(const PNMatrix& m);

// Values of a over all prevaluations on sub(a) u {var} with var = x whose
// image is inside a viable set.
std::vector<int> oracle_possible(const PNMatrix& m, const Formula& a, int x, const std::string& var = "p");

}  // namespace pnmtest
