// Schematic rules and soundness checking against a matrix.
#pragma once

#include <string>
#include <vector>

#include "pnm/engine.hpp"

namespace pnm {

struct Rule {
  std::string name;
  std::vector<Formula> premises;
  std::vector<Formula> conclusions;
  bool single_conclusion() const { return conclusions.size() == 1; }
  std::string str() const;
};

struct Calculus {
  Signature sig;
  std::vector<Rule> rules;
};

// "name : A1, A2 |- B1, B2", with "-" for an empty side.
Rule parse_rule(const std::string& line, const Signature& sig);
// One rule per line; '#' comments and blank lines are skipped.
Calculus parse_calculus(const std::string& text, const Signature& sig);
Calculus read_calculus(const std::string& path, const Signature& sig);

// Rules whose formulas all lie over sub_sig.
Calculus restrict_calculus(const Calculus& c, const Signature& sub_sig);

Verdict rule_sound(const PNMatrix& m, const Rule& r);
Verdict rule_sound(const Decider& d, const Rule& r);

struct SoundnessReport {
  std::vector<Rule> rules;
  std::vector<Verdict> verdicts;
  std::size_t sound = 0;
  std::size_t unsound = 0;
  bool all_sound() const { return unsound == 0; }
  // Completeness is never checked.
  static constexpr const char* scope = "soundness only";
};

SoundnessReport calculus_sound(const PNMatrix& m, const Calculus& c);

const std::vector<std::string>& builtin_calculus_names();
// "classical", "kleene-ks", "sources", "platypus", "modus-ponens".
Calculus builtin_calculus(const std::string& name);

}  // namespace pnm
