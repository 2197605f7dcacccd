// Built-in matrices, transcribed from their truth tables.
#include <map>

#include "pnm/io.hpp"

namespace pnm {

namespace {

const char* kBool2 = R"(
signature:
  top/0 neg/1 and/2 or/2 imp/2
values: 0 1
designated: 1
table top:
  : 1
table neg:
  0 : 1
  1 : 0
table and:
  0 0 : 0
  0 1 : 0
  1 0 : 0
  1 1 : 1
table or:
  0 0 : 0
  0 1 : 1
  1 0 : 1
  1 1 : 1
table imp:
  0 0 : 1
  0 1 : 1
  1 0 : 0
  1 1 : 1
)";

const char* kBool2n = R"(
signature:
  botop/0 box/1 squig/2 pl/2
values: 0 1
designated: 1
table botop:
  : 0 1
table box:
  0 : 0 1
  1 : 1
table squig:
  0 0 : 0 1
  0 1 : 0 1
  1 0 : 0
  1 1 : 0 1
table pl:
  0 0 : 0
  0 1 : 0 1
  1 0 : 0 1
  1 1 : 1
)";

// Modus ponens alone: imp read as the squig table.
const char* kMp = R"(
signature:
  imp/2
values: 0 1
designated: 1
table imp:
  0 0 : 0 1
  0 1 : 0 1
  1 0 : 0
  1 1 : 0 1
)";

const char* kSources = R"(
signature:
  neg/1 and/2 or/2
values: f bot top t
designated: top t
table neg:
  f : t
  bot : bot
  top : top
  t : f
table and:
  f f : f
  f bot : f
  f top : f
  f t : f
  bot f : f
  bot bot : f bot
  bot top : f
  bot t : f bot
  top f : f
  top bot : f
  top top : top
  top t : top
  t f : f
  t bot : f bot
  t top : top
  t t : t top
table or:
  f f : f top
  f bot : t bot
  f top : top
  f t : t
  bot f : t bot
  bot bot : t bot
  bot top : t
  bot t : t
  top f : top
  top bot : t
  top top : top
  top t : t
  t f : t
  t bot : t
  t top : t
  t t : t
)";

const char* kKleeneKs = R"(
signature:
  neg/1 and/2 or/2
values: 0 a b 1
designated: b 1
table neg:
  0 : 1
  a : a
  b : b
  1 : 0
table and:
  0 0 : 0
  0 a : 0
  0 b : 0
  0 1 : 0
  a 0 : 0
  a a : a
  a b : -
  a 1 : a
  b 0 : 0
  b a : -
  b b : b
  b 1 : b
  1 0 : 0
  1 a : a
  1 b : b
  1 1 : 1
table or:
  0 0 : 0
  0 a : a
  0 b : b
  0 1 : 1
  a 0 : a
  a a : a
  a b : -
  a 1 : 1
  b 0 : b
  b a : -
  b b : b
  b 1 : 1
  1 0 : 1
  1 a : 1
  1 b : 1
  1 1 : 1
)";

std::string kleene_imp(const std::string& name) {
  return "signature:\n  " + name + R"(/2
values: 0 h 1
designated: 1
table )" + name + R"(:
  0 0 : 1
  0 h : 1
  0 1 : 1
  h 0 : h
  h h : h
  h 1 : 1
  1 0 : 0
  1 h : h
  1 1 : 1
)";
}

std::string luk_imp(const std::string& name) {
  return "signature:\n  " + name + R"(/2
values: 0 h 1
designated: 1
table )" + name + R"(:
  0 0 : 1
  0 h : 1
  0 1 : 1
  h 0 : h
  h h : 1
  h 1 : 1
  1 0 : 0
  1 h : h
  1 1 : 1
)";
}

const char* kLuk3 = R"(
signature:
  neg/1 nabla/1 imp/2
values: 0 h 1
designated: 1
table neg:
  0 : 1
  h : h
  1 : 0
table nabla:
  0 : 0
  h : 1
  1 : 1
table imp:
  0 0 : 1
  0 h : 1
  0 1 : 1
  h 0 : h
  h h : 1
  h 1 : 1
  1 0 : 0
  1 h : h
  1 1 : 1
)";

const char* kNeg3 = R"(
signature:
  neg/1
values: 0 h 1
designated: 1
table neg:
  0 : 1
  h : h
  1 : 0
)";

const char* kNobin0 = R"(
signature:
  at/0 f/1
values: 0
designated:
table at:
  : 0
table f:
  0 : 0
)";

const char* kNobin2 = R"(
signature:
  at/0 f/1
values: 0 1
designated: 1
table at:
  : 1
table f:
  0 : 1
  1 : 1
)";

struct Entry {
  FixtureInfo info;
  std::string text;     // matrix text, or empty for a reduct
  std::string base;     // reduct source
  std::vector<std::string> conns;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> all = [] {
    using K = MatrixKind;
    std::vector<Entry> e;
    e.push_back({{"bool2", "two-valued Boolean matrix over top, neg, and, or, imp", K::matrix, false}, kBool2, "", {}});
    e.push_back({{"bool2n", "two-valued Nmatrix with botop, box, squig and platypus", K::Nmatrix, false}, kBool2n, "", {}});
    e.push_back({{"sources", "four-valued Nmatrix of information sources", K::Nmatrix, true}, kSources, "", {}});
    e.push_back({{"kleene-ks", "four-valued strong Kleene Pmatrix", K::Pmatrix, false}, kKleeneKs, "", {}});
    e.push_back({{"kleene-imp", "three-valued Kleene implication", K::matrix, false}, kleene_imp("imp"), "", {}});
    e.push_back({{"luk-imp", "three-valued Lukasiewicz implication", K::matrix, false}, luk_imp("imp"), "", {}});
    e.push_back({{"luk3", "three-valued Lukasiewicz logic with neg, nabla, imp", K::matrix, false}, kLuk3, "", {}});
    e.push_back({{"neg3", "three-valued negation", K::matrix, true}, kNeg3, "", {}});
    e.push_back({{"kleene-impK", "Kleene implication under the name impK", K::matrix, false}, kleene_imp("impK"), "", {}});
    e.push_back({{"luk-impL", "Lukasiewicz implication under the name impL", K::matrix, false}, luk_imp("impL"), "", {}});
    e.push_back({{"mp", "two-valued Nmatrix for an implication obeying only modus ponens", K::Nmatrix, false}, kMp, "", {}});
    e.push_back({{"nobin-0", "one-valued matrix without designated values (at/0, f/1)", K::matrix, false}, kNobin0, "", {}});
    e.push_back({{"nobin-2", "two-valued matrix where every compound is designated (at/0, f/1)", K::matrix, false}, kNobin2, "", {}});
    e.push_back({{"bool2-neg", "negation fragment of bool2", K::matrix, false}, "", "bool2", {"neg"}});
    e.push_back({{"bool2-and", "conjunction fragment of bool2", K::matrix, true}, "", "bool2", {"and"}});
    e.push_back({{"bool2-or", "disjunction fragment of bool2", K::matrix, false}, "", "bool2", {"or"}});
    e.push_back({{"bool2-top", "top fragment of bool2", K::matrix, true}, "", "bool2", {"top"}});
    e.push_back({{"bool2-imp", "implication fragment of bool2", K::matrix, false}, "", "bool2", {"imp"}});
    e.push_back({{"bool2-and-top", "conjunction and top fragment of bool2", K::matrix, true}, "", "bool2", {"and", "top"}});
    return e;
  }();
  return all;
}

}  // namespace

const std::vector<FixtureInfo>& fixtures() {
  static const std::vector<FixtureInfo> infos = [] {
    std::vector<FixtureInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

const FixtureInfo* fixture_info(const std::string& name) {
  for (const auto& f : fixtures())
    if (f.name == name) return &f;
  return nullptr;
}

PNMatrix builtin(const std::string& name) {
  auto colon = name.find(':');
  if (colon != std::string::npos) return load_matrix(name);
  for (const auto& e : entries()) {
    if (e.info.name != name) continue;
    if (!e.text.empty()) return read_matrix_string(e.text);
    PNMatrix base = builtin(e.base);
    return reduct(base, base.sig().restrict_to(e.conns));
  }
  std::string msg = "unknown fixture '" + name + "'; available:";
  for (const auto& f : fixtures()) msg += " " + f.name;
  throw Error(msg);
}

const FixtureInfo* identify_fixture(const PNMatrix& m) {
  static const std::vector<std::string> texts = [] {
    std::vector<std::string> out;
    for (const auto& f : fixtures()) out.push_back(write_matrix(builtin(f.name)));
    return out;
  }();
  const std::string text = write_matrix(m);
  for (std::size_t i = 0; i < texts.size(); ++i)
    if (texts[i] == text) return &fixtures()[i];
  return nullptr;
}

}  // namespace pnm
