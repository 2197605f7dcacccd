#include <doctest.h>

#include "pnm/combine.hpp"
#include "pnm/io.hpp"
#include "support.hpp"

using namespace pnm;

namespace {

FormulaSet S(const Signature& sig, const std::string& s) {
  auto v = parse_formula_list(s, sig);
  return FormulaSet(v.begin(), v.end());
}

Formula F(const Signature& sig, const std::string& s) { return parse_formula(s, sig); }

}  // namespace

TEST_CASE("conjunction and disjunction combine into the classical fragment") {
  auto c = combine_multiple(builtin("bool2-and"), builtin("bool2-or"));
  CHECK(c.total);
  CHECK(c.label == "exact");
  CHECK(c.matrix.size() == 2);
  CHECK(classify(c.matrix) == MatrixKind::matrix);
  const auto sig = c.matrix.sig();
  CHECK(decide_multiple(c.matrix, S(sig, "or(p,and(p,p))"), S(sig, "p")).answer == Answer::yes);
  CHECK(decide_multiple(c.matrix, {}, S(sig, "or(p,and(p,p))")).answer == Answer::no);

  auto classical = builtin("bool2:and,or");
  pnmtest::Gen gen(11);
  for (int i = 0; i < 100; ++i) {
    auto q = gen.query(sig);
    CHECK(decide_multiple(c.matrix, q.gamma, q.delta).answer ==
          decide_multiple(classical, q.gamma, q.delta).answer);
  }
}

TEST_CASE("Kleene and Lukasiewicz implications") {
  auto c = combine_multiple(builtin("kleene-imp"), builtin("luk-imp"), true);
  CHECK(c.pruned);
  CHECK(c.matrix.size() == 3);
  const auto sig = c.matrix.sig();
  CHECK(decide_multiple(c.matrix, {}, S(sig, "p, imp(p,q)")).answer == Answer::yes);

  auto d = combine_multiple(builtin("kleene-impK"), builtin("luk-impL"));
  CHECK(d.total);
  CHECK(d.matrix.size() == 5);
  CHECK(classify(d.matrix) == MatrixKind::Nmatrix);
}

TEST_CASE("single-conclusion combination of saturated inputs") {
  auto c = combine_single_saturated(builtin("neg3"), builtin("bool2-and"));
  CHECK(c.label == "exact");
  const auto sig = c.matrix.sig();
  CHECK(decide_single(c.matrix, S(sig, "neg(p)"), F(sig, "neg(and(p,p))")).answer == Answer::no);
  CHECK(decide_single(c.matrix, S(sig, "neg(neg(p))"), F(sig, "p")).answer == Answer::yes);

  auto t = combine_single_saturated(builtin("bool2-and"), builtin("bool2-top"));
  CHECK(t.label == "exact");
  CHECK(t.matrix.size() == 2);
  CHECK(classify(t.matrix) == MatrixKind::matrix);
  auto classical = builtin("bool2-and-top");
  pnmtest::Gen gen(5);
  for (int i = 0; i < 100; ++i) {
    auto q = gen.query(classical.sig());
    CHECK(decide_multiple(t.matrix, q.gamma, q.delta).answer ==
          decide_multiple(classical, q.gamma, q.delta).answer);
  }
}

TEST_CASE("a refuted input aborts single-conclusion combination") {
  try {
    combine_single_saturated(builtin("bool2-neg"), builtin("bool2-and"));
    FAIL("expected a refusal");
  } catch (const SaturationRefused& e) {
    CHECK(e.input == 1);
    CHECK(e.witness.gamma0.empty());
    CHECK(print_formula_list(e.witness.phi) == "p, neg(p)");
  }
}

TEST_CASE("unknown inputs are combined conditionally") {
  auto m = builtin("mp");
  auto c = combine_single_saturated(m, builtin("bool2-and"));
  CHECK(c.label == "conditional on saturation");
}

TEST_CASE("finite powers stand in for the infinite power") {
  auto a = combine_single_power(builtin("bool2-and"), builtin("bool2-or"), 1, 2);
  const auto sig = a.matrix.sig();
  const auto gamma = S(sig, "or(p,and(p,p))");
  const auto p = F(sig, "p");
  CHECK(decide_single(a.matrix, gamma, p).answer == Answer::no);
  CHECK_FALSE(pnmtest::oracle_follows(a.matrix, gamma, {p}));

  auto b = combine_single_power(builtin("bool2-neg"), builtin("bool2-and"), 2, 1);
  auto ref = combine_single_saturated(builtin("neg3"), builtin("bool2-and"));
  CHECK(decide_single(b.matrix, S(sig.unite(b.matrix.sig()), "neg(p)"),
                      F(b.matrix.sig(), "neg(and(p,p))")).answer == Answer::no);
  pnmtest::Gen gen(17);
  for (int i = 0; i < 50; ++i) {
    auto q = gen.query(b.matrix.sig(), 3, 2, 3, 1);
    if (q.delta.size() != 1) continue;
    const auto& c = *q.delta.begin();
    CHECK(decide_single(b.matrix, q.gamma, c).answer == decide_single(ref.matrix, q.gamma, c).answer);
  }

  auto same = combine_single_power(builtin("kleene-imp"), builtin("neg3"), 1, 1);
  CHECK(write_matrix(same.matrix) == write_matrix(strict_product(builtin("kleene-imp"), builtin("neg3"))));
  CHECK(same.label == "finite approximation");
}

TEST_CASE("context partitions on the disjoint implications") {
  auto k = builtin("kleene-impK"), l = builtin("luk-impL");
  const auto sig = k.sig().unite(l.sig());
  ContextOptions o;
  o.cross_check = true;
  auto r = decide_combined_ctx(k, l, Mode::multiple, S(sig, "impK(p,q)"), S(sig, "impL(p,q)"), {}, o);
  CHECK(r.verdict.answer == Answer::no);
  CHECK(r.certified);
  CHECK(r.ctx.size() == 4);
  CHECK(r.cross_checks == r.component_calls);
  REQUIRE(r.verdict.countermodel);
  const auto& cm = *r.verdict.countermodel;
  CHECK(cm.assignment.at(F(sig, "p")) == "0|h");
  CHECK(cm.assignment.at(F(sig, "q")) == "0|0");
  auto product = strict_product(k, l);
  CHECK(check_countermodel(product, S(sig, "impK(p,q)"), S(sig, "impL(p,q)"), cm).empty());
  REQUIRE(r.failing);
  CHECK(r.failing->first.count(F(sig, "impK(p,q)")));

  auto overlap = decide_combined_ctx(k, l, Mode::multiple, S(sig, "p, impK(p,q)"), S(sig, "p"));
  CHECK(overlap.verdict.answer == Answer::yes);
  CHECK(overlap.partitions == 0);
}

TEST_CASE("context partitions agree with the product route") {
  struct Pair {
    const char* left;
    const char* right;
  };
  for (const Pair& p : {Pair{"bool2-and", "bool2-or"}, Pair{"kleene-impK", "luk-impL"}, Pair{"neg3", "bool2-and"}}) {
    auto m1 = builtin(p.left), m2 = builtin(p.right);
    auto product = strict_product(m1, m2);
    REQUIRE(product.total());
    Decider dp(product);
    ContextOptions o;
    o.ctx_cap = 24;
    o.cross_check = true;
    pnmtest::Gen gen(23);
    for (int i = 0; i < 60; ++i) {
      auto q = gen.query(product.sig(), 3, 2, 2, 2);
      auto r = decide_combined_ctx(m1, m2, Mode::multiple, q.gamma, q.delta, {}, o);
      CHECK_MESSAGE(r.verdict.answer == dp.multiple(q.gamma, q.delta).answer, p.left, " ", p.right);
      CHECK(r.certified);
      if (r.verdict.countermodel)
        CHECK(check_countermodel(product, q.gamma, q.delta, *r.verdict.countermodel).empty());
    }
  }
}

TEST_CASE("single mode follows the single-conclusion product") {
  auto n = builtin("neg3"), a = builtin("bool2-and");
  const auto product = strict_product(n, a);
  const auto sig = product.sig();
  ContextOptions o;
  o.saturated = true;
  o.ctx_cap = 24;
  auto r = decide_combined_ctx(n, a, Mode::single, S(sig, "neg(p)"), S(sig, "neg(and(p,p))"), {}, o);
  CHECK(r.verdict.answer == Answer::no);
  CHECK(r.certified);
  REQUIRE(r.failing);
  CHECK(r.failing->second.count(F(sig, "neg(and(p,p))")));
  CHECK(decide_combined_ctx(n, a, Mode::single, S(sig, "neg(neg(p))"), S(sig, "p"), {}, o).verdict.answer ==
        Answer::yes);

  Decider dp(product);
  pnmtest::Gen gen(29);
  for (int i = 0; i < 60; ++i) {
    auto q = gen.query(sig, 3, 2, 2, 1);
    if (q.delta.size() != 1) continue;
    auto v = decide_combined_ctx(n, a, Mode::single, q.gamma, q.delta, {}, o);
    CHECK(v.verdict.answer == dp.single(q.gamma, *q.delta.begin()).answer);
  }

  CHECK_FALSE(decide_combined_ctx(n, a, Mode::single, {}, S(sig, "p")).certified);
  CHECK_THROWS_AS(decide_combined_ctx(n, a, Mode::single, {}, S(sig, "p, q")), Error);
}

TEST_CASE("context cap, extra context and certification flags") {
  auto ks = builtin("kleene-ks"), n = builtin("neg3");
  auto r = decide_combined_ctx(ks, builtin("bool2-imp"), Mode::multiple, {},
                               S(ks.sig().unite(builtin("bool2-imp").sig()), "p"));
  CHECK_FALSE(r.certified);
  CHECK(r.certification.find("uncertified") == 0);

  const auto sig = n.sig();
  auto deep = S(sig, "neg(neg(neg(neg(neg(neg(neg(neg(neg(neg(neg(neg(p))))))))))))");
  CHECK_THROWS_AS(decide_combined_ctx(n, builtin("bool2-and"), Mode::multiple, deep, {}), Error);

  auto a = builtin("bool2-and");
  const auto both = n.sig().unite(a.sig());
  auto plain = decide_combined_ctx(n, a, Mode::multiple, S(both, "p"), S(both, "q"));
  auto extra = decide_combined_ctx(n, a, Mode::multiple, S(both, "p"), S(both, "q"), S(both, "and(p,q), neg(q)"));
  CHECK(plain.verdict.answer == Answer::no);
  CHECK(extra.verdict.answer == Answer::no);
  CHECK(extra.ctx.size() == plain.ctx.size() + 2);
}

TEST_CASE("components of the combination stay derivable") {
  auto m1 = builtin("kleene-ks"), m2 = builtin("bool2-imp");
  auto product = strict_product(m1, m2);
  Decider d1(m1), dp(product);
  pnmtest::Gen gen(31);
  int valid = 0;
  for (int i = 0; i < 300; ++i) {
    auto q = gen.query(m1.sig(), 3, 2, 3, 3);
    if (d1.multiple(q.gamma, q.delta).answer != Answer::yes) continue;
    ++valid;
    CHECK(dp.multiple(q.gamma, q.delta).answer == Answer::yes);
  }
  CHECK(valid > 20);
}

TEST_CASE("axiom instances") {
  const Signature sig{{"imp", 2}};
  auto ax = parse_axioms("imp(p1,imp(p2,p1))", sig, 0);
  auto inst = axiom_instances(ax, S(sig, "q, r"));
  CHECK(inst.count(F(sig, "imp(q,imp(r,q))")));
  CHECK(inst.count(F(sig, "imp(q,imp(q,q))")));
  CHECK(inst.size() == 4);
  CHECK(is_axiom_instance(ax, F(sig, "imp(q,imp(r,q))")));
  CHECK_FALSE(is_axiom_instance(ax, F(sig, "imp(q,imp(r,r))")));
  CHECK(axiom_instances(AxiomSet{}, S(sig, "q")).empty());

  ax.depth = 1;
  auto more = axiom_instances(ax, S(sig, "q, r"));
  CHECK(more.size() == 36);  // range {q, r, and the four implications over them}
  CHECK(std::includes(more.begin(), more.end(), inst.begin(), inst.end()));

  ax.cap = 10;
  CHECK_THROWS_AS(axiom_instances(ax, S(sig, "q, r")), Error);
}

TEST_CASE("deciding with axioms") {
  auto mp = builtin("mp");
  const auto& sig = mp.sig();
  auto ax = parse_axioms(
      "# the two implication axioms\n"
      "imp(p1,imp(p2,p1))\n"
      "imp(imp(p1,imp(p2,p3)),imp(imp(p1,p2),imp(p1,p3)))\n",
      sig, 2);
  CHECK(ax.schemas.size() == 2);
  CHECK(decide_with_axioms(mp, ax, {}, F(sig, "imp(q,q)")).answer == Answer::yes);
  CHECK(decide_multiple(mp, {}, S(sig, "imp(q,q)")).answer == Answer::no);

  ax.depth = 0;
  CHECK(decide_with_axioms(mp, ax, S(sig, "q"), F(sig, "q")).answer == Answer::yes);
  auto u = decide_with_axioms(mp, ax, {}, F(sig, "q"));
  CHECK(u.answer == Answer::unknown);
  CHECK(u.note.find("unknown at depth 0") == 0);

  // once derived, deeper bounds keep the derivation
  for (const char* f : {"imp(q,q)", "imp(q,imp(r,q))", "imp(imp(q,r),imp(q,q))", "q"}) {
    bool seen = false;
    for (int d = 0; d <= 2; ++d) {
      ax.depth = d;
      bool yes = decide_with_axioms(mp, ax, {}, F(sig, f)).answer == Answer::yes;
      CHECK(yes >= seen);
      seen = yes;
    }
  }
  CHECK_THROWS_AS(parse_axioms("imp(p", sig), Error);
}
