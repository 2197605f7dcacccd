#include "pnm/calculus.hpp"

#include <sstream>

#include "pnm/io.hpp"

namespace pnm {

std::string Rule::str() const {
  auto side = [](const std::vector<Formula>& fs) {
    return fs.empty() ? std::string("-") : print_formula_list(fs);
  };
  return name + " : " + side(premises) + " |- " + side(conclusions);
}

Rule parse_rule(const std::string& line, const Signature& sig) {
  auto colon = line.find(':');
  auto turn = line.find("|-");
  if (colon == std::string::npos || turn == std::string::npos || turn < colon)
    throw Error("expected 'name : premises |- conclusions', got '" + line + "'");
  Rule r;
  std::istringstream name(line.substr(0, colon));
  name >> r.name;
  if (r.name.empty()) throw Error("rule without a name: '" + line + "'");
  r.premises = parse_formula_list(line.substr(colon + 1, turn - colon - 1), sig);
  r.conclusions = parse_formula_list(line.substr(turn + 2), sig);
  return r;
}

Calculus parse_calculus(const std::string& text, const Signature& sig) {
  Calculus c;
  c.sig = sig;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      c.rules.push_back(parse_rule(line, sig));
    } catch (const Error& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

Calculus read_calculus(const std::string& path, const Signature& sig) {
  return parse_calculus(read_text_file(path), sig);
}

namespace {
bool over(const Formula& f, const Signature& sig) {
  if (f.is_var()) return true;
  if (sig.arity(f.name()) != static_cast<int>(f.args().size())) return false;
  for (const auto& a : f.args())
    if (!over(a, sig)) return false;
  return true;
}
}  // namespace

Calculus restrict_calculus(const Calculus& c, const Signature& sub_sig) {
  Calculus out;
  out.sig = c.sig.intersect(sub_sig);
  for (const auto& r : c.rules) {
    bool keep = true;
    for (const auto& f : r.premises) keep = keep && over(f, sub_sig);
    for (const auto& f : r.conclusions) keep = keep && over(f, sub_sig);
    if (keep) out.rules.push_back(r);
  }
  return out;
}

Verdict rule_sound(const Decider& d, const Rule& r) {
  return d.multiple(FormulaSet(r.premises.begin(), r.premises.end()),
                    FormulaSet(r.conclusions.begin(), r.conclusions.end()));
}

Verdict rule_sound(const PNMatrix& m, const Rule& r) { return rule_sound(Decider(m), r); }

SoundnessReport calculus_sound(const PNMatrix& m, const Calculus& c) {
  Decider d(m);
  SoundnessReport rep;
  for (const auto& r : c.rules) {
    rep.rules.push_back(r);
    rep.verdicts.push_back(rule_sound(d, r));
    if (rep.verdicts.back().answer == Answer::yes)
      ++rep.sound;
    else
      ++rep.unsound;
  }
  return rep;
}

// {{{ built-in calculi

namespace {

const char* kClassical = R"(
top_i    : - |- top
neg_l    : p, neg(p) |- -
neg_r    : - |- p, neg(p)
and_e1   : and(p,q) |- p
and_e2   : and(p,q) |- q
and_i    : p, q |- and(p,q)
or_i1    : p |- or(p,q)
or_i2    : q |- or(p,q)
or_e     : or(p,q) |- p, q
imp_l    : - |- p, imp(p,q)
imp_mp   : p, imp(p,q) |- q
imp_k    : q |- imp(p,q)
)";

// Rules shared by the Kleene and sources calculi.
const char* kKleeneCore = R"(
and_i       : p, q |- and(p,q)
and_e1      : and(p,q) |- p
and_e2      : and(p,q) |- q
neg_and_1   : neg(p) |- neg(and(p,q))
neg_and_2   : neg(q) |- neg(and(p,q))
or_i1       : p |- or(p,q)
or_i2       : q |- or(p,q)
neg_or_e1   : neg(or(p,q)) |- neg(p)
neg_or_e2   : neg(or(p,q)) |- neg(q)
neg_or_i    : neg(p), neg(q) |- neg(or(p,q))
dneg_i      : p |- neg(neg(p))
dneg_e      : neg(neg(p)) |- p
)";

const char* kKleeneExtra = R"(
neg_and_e   : neg(and(p,q)) |- neg(p), neg(q)
or_e        : or(p,q) |- p, q
explosion   : p, neg(p) |- q, neg(q)
)";

const char* kPlatypus = R"(
pl_i : p, q |- pl(p,q)
pl_e : pl(p,q) |- p, q
)";

const char* kModusPonens = R"(
mp : p, imp(p,q) |- q
)";

}  // namespace

const std::vector<std::string>& builtin_calculus_names() {
  static const std::vector<std::string> names = {"classical", "kleene-ks", "sources", "platypus",
                                                 "modus-ponens"};
  return names;
}

Calculus builtin_calculus(const std::string& name) {
  if (name == "classical")
    return parse_calculus(kClassical, Signature{{"top", 0}, {"neg", 1}, {"and", 2}, {"or", 2}, {"imp", 2}});
  const Signature kleene{{"neg", 1}, {"and", 2}, {"or", 2}};
  if (name == "kleene-ks") return parse_calculus(std::string(kKleeneCore) + kKleeneExtra, kleene);
  if (name == "sources") return parse_calculus(kKleeneCore, kleene);
  if (name == "platypus") return parse_calculus(kPlatypus, Signature{{"pl", 2}});
  if (name == "modus-ponens") return parse_calculus(kModusPonens, Signature{{"imp", 2}});
  std::string msg = "unknown calculus '" + name + "'; available:";
  for (const auto& n : builtin_calculus_names()) msg += " " + n;
  throw Error(msg);
}

// }}}

}  // namespace pnm
