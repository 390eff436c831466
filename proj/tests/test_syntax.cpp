#include "doctest.h"
#include "stproof/syntax.hpp"

#include <random>

using namespace stp;

static Signature sig_pq() {
  Signature s;
  s.relations = {{"P", 1}, {"Q", 1}, {"R", 2}, {"p", 0}, {"q", 0}};
  s.functions = {{"f", 1}, {"c", 0}};
  return s;
}

TEST_CASE("parsing builds the expected trees") {
  Signature s = sig_pq();
  auto f1 = parse_formula("P(x) /\\ ~q", s);
  CHECK(f1->tag == Formula::Tag::Conj);
  CHECK(f1->lhs->tag == Formula::Tag::Atom);
  CHECK(f1->rhs->tag == Formula::Tag::Neg);

  // Implication is sugar for ~a \/ b.
  auto f2 = parse_formula("P(x) -> forall x. P(x)", s);
  CHECK(f2->tag == Formula::Tag::Disj);
  CHECK(f2->lhs->tag == Formula::Tag::Neg);
  CHECK(f2->rhs->tag == Formula::Tag::Forall);
  CHECK(equal(f2, mk_disj(mk_neg(mk_atom("P", {mk_var("x")})),
                          mk_forall("x", mk_atom("P", {mk_var("x")})))));

  auto t = parse_term("wA[x. P(x)]", s);
  CHECK(t->tag == Term::Tag::UWitness);
  CHECK(t->bound == "x");
  CHECK(equal(t->body, mk_atom("P", {mk_var("x")})));
}

TEST_CASE("precedence: ~ binds tighter than /\\ which binds tighter than \\/") {
  Signature s = sig_pq();
  auto f = parse_formula("~p /\\ q \\/ p", s);
  CHECK(f->tag == Formula::Tag::Disj);
  CHECK(f->lhs->tag == Formula::Tag::Conj);
  CHECK(f->lhs->lhs->tag == Formula::Tag::Neg);
  // Binders extend maximally to the right.
  auto g = parse_formula("p \\/ forall x. P(x) /\\ q", s);
  CHECK(g->tag == Formula::Tag::Disj);
  CHECK(g->rhs->tag == Formula::Tag::Forall);
  CHECK(g->rhs->lhs->tag == Formula::Tag::Conj);
}

TEST_CASE("print and parse round trips") {
  Signature s = sig_pq();
  const char* samples[] = {
      "p",
      "~~p",
      "P(f(x)) /\\ (q \\/ p)",
      "p /\\ q /\\ p",
      "p /\\ (q /\\ p)",
      "forall x. exists y. R(x, y)",
      "~(p \\/ q)",
      "P(c) \\/ (forall x. P(x))",
      "P(wA[x. P(x)])",
      "Q(wE[y. R(y, z)])",
      "P(eps[x. ~P(x)])",
      "exists x. ~P(x) \\/ (forall x. P(x))",
  };
  for (auto* text : samples) {
    auto f = parse_formula(text, s);
    auto printed = print(f);
    CHECK(printed == text);  // print∘parse = id (inputs are canonically spaced)
    auto f2 = parse_formula(printed, s);
    CHECK(equal(f, f2));  // parse∘print = id
  }

  const char* seqs[] = {
      "p |- q",
      "|- p",
      "p |-",
      "|-",
      "P(x), Q(y) |- R(x, y), p",
  };
  for (auto* text : seqs) {
    auto sq = parse_sequent(text, s);
    CHECK(print(sq) == text);
  }
}

TEST_CASE("free variables") {
  Signature s = sig_pq();
  CHECK(free_vars(parse_formula("forall x. R(x, y)", s)) ==
        std::set<std::string>{"y"});
  CHECK(free_vars(parse_term("eps[x. R(x, y)]", s)) ==
        std::set<std::string>{"y"});
  CHECK(free_vars(parse_formula("P(wA[x. R(x, z)])", s)) ==
        std::set<std::string>{"z"});
  CHECK(free_vars(parse_formula("p", s)).empty());
}

TEST_CASE("substitution") {
  Signature s = sig_pq();
  auto px = parse_formula("P(x)", s);
  CHECK(print(substitute(px, "x", parse_term("f(y)", s))) == "P(f(y))");

  auto cap = parse_formula("exists y. R(x, y)", s);
  CHECK_THROWS_AS(substitute(cap, "x", mk_var("y")), CaptureError);

  auto bnd = parse_formula("P(x) \\/ forall x. Q(x)", s);
  CHECK(print(substitute(bnd, "x", parse_term("c", s))) ==
        "P(c) \\/ (forall x. Q(x))");

  // Substitution reaches free variables inside witness bodies.
  auto wit = parse_formula("P(wE[y. R(y, x)])", s);
  CHECK(print(substitute(wit, "x", parse_term("c", s))) == "P(wE[y. R(y, c)])");

  // free_vars(f[x->t]) = (free_vars(f) \ {x}) ∪ free_vars(t) when x free.
  auto f = parse_formula("R(x, y)", s);
  auto g = substitute(f, "x", parse_term("f(z)", s));
  CHECK(free_vars(g) == std::set<std::string>{"y", "z"});
}

TEST_CASE("alpha renaming") {
  Signature s = sig_pq();
  auto f = parse_formula("forall x. P(x)", s);
  auto r = alpha_fresh(f, {"x"});
  CHECK(print(r) == "forall x1. P(x1)");

  CHECK(print(alpha_fresh(parse_formula("P(y)", s), {"y"})) == "P(y)");

  auto g = parse_formula("exists x. P(x) /\\ forall x. Q(x)", s);
  auto rg = alpha_fresh(g, {"x", "t0"});
  CHECK(rg->name == "x1");
  CHECK(alpha_equal(g, rg));
  // The two binders get distinct fresh names.
  CHECK(print(rg) == "exists x1. P(x1) /\\ (forall x2. Q(x2))");

  // Nested shadowing stays correct when a fresh target collides with an
  // inner binder's original name.
  auto h = parse_formula("forall x. exists x1. R(x, x1)", s);
  auto rh = alpha_fresh(h, {"x"});
  CHECK(alpha_equal(h, rh));
  CHECK(print(rh) == "forall x1. exists x11. R(x1, x11)");
}

TEST_CASE("alpha equality") {
  Signature s = sig_pq();
  CHECK(alpha_equal(parse_formula("forall x. P(x)", s),
                    parse_formula("forall y. P(y)", s)));
  CHECK(!alpha_equal(parse_formula("forall x. P(x)", s),
                     parse_formula("forall y. Q(y)", s)));
  CHECK(!alpha_equal(parse_formula("forall x. R(x, y)", s),
                     parse_formula("forall y. R(y, y)", s)));
}

TEST_CASE("tau translation") {
  Signature s = sig_pq();
  auto g1 = parse_sequent("p |- q", s);
  CHECK(print(tau(g1, s)) == "~p \\/ q");

  auto g2 = parse_sequent("p, q |-", s);
  CHECK(print(tau(g2, s)) == "~p \\/ ~q");

  auto g3 = parse_sequent("|-", s);
  CHECK(print(tau(g3, s)) == "p /\\ ~p");  // phi0 = first 0-ary relation

  // Left association and sorted printed-text enumeration per side.
  auto g4 = parse_sequent("q, p |- Q(y), P(x)", s);
  CHECK(print(tau(g4, s)) == "~p \\/ ~q \\/ P(x) \\/ Q(y)");
  CHECK(free_vars(tau(g4, s)) == free_vars(g4));
}

TEST_CASE("dialect translations") {
  Signature s = sig_pq();
  CHECK(print(to_epsilon(parse_term("wE[x. P(x)]", s))) == "eps[x. P(x)]");
  CHECK(print(to_epsilon(parse_term("wA[x. P(x)]", s))) == "eps[x. ~P(x)]");
  CHECK(print(to_epsilon(parse_term("y", s))) == "y");
  CHECK(print(to_henkin(parse_term("eps[x. P(x)]", s))) == "wE[x. P(x)]");
  CHECK(print(to_henkin(parse_term("eps[x. ~P(x)]", s))) == "wE[x. ~P(x)]");
  CHECK(print(to_henkin(parse_term("f(eps[x. Q(x)])", s))) == "f(wE[x. Q(x)])");
  // Round trip on wA needs derivations, not syntactic identity.
  CHECK(print(to_henkin(to_epsilon(parse_term("wA[x. P(x)]", s)))) ==
        "wE[x. ~P(x)]");
  // W∘E is the identity on base-dialect syntax.
  auto base = parse_formula("forall x. P(x) \\/ exists y. R(x, y)", s);
  CHECK(equal(to_henkin(to_epsilon(base)), base));
  CHECK_THROWS_AS(to_epsilon(parse_term("eps[x. P(x)]", s)), DialectError);
  CHECK_THROWS_AS(to_henkin(parse_term("wA[x. P(x)]", s)), DialectError);
  CHECK_THROWS_AS(parse_formula("R(eps[x. P(x)], wA[y. Q(y)])", s), DialectError);
}

// Random small Henkin formulas for the substitution commutation law.
namespace {

TermPtr rnd_term(std::mt19937& rng, int depth);
FormulaPtr rnd_formula(std::mt19937& rng, int depth);

TermPtr rnd_term(std::mt19937& rng, int depth) {
  int pick = static_cast<int>(rng() % (depth > 0 ? 5 : 2));
  switch (pick) {
    case 0: return mk_var("x");
    case 1: return mk_var("y");
    case 2: return mk_app("f", {rnd_term(rng, depth - 1)});
    case 3: return mk_uwitness("u", rnd_formula(rng, depth - 1));
    default: return mk_ewitness("u", rnd_formula(rng, depth - 1));
  }
}

FormulaPtr rnd_formula(std::mt19937& rng, int depth) {
  int pick = static_cast<int>(rng() % (depth > 0 ? 5 : 1));
  switch (pick) {
    case 0: return mk_atom("P", {rnd_term(rng, depth - 1)});
    case 1: return mk_neg(rnd_formula(rng, depth - 1));
    case 2: return mk_conj(rnd_formula(rng, depth - 1), rnd_formula(rng, depth - 1));
    case 3: return mk_disj(rnd_formula(rng, depth - 1), rnd_formula(rng, depth - 1));
    default: return mk_forall("z", rnd_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("substitution commutes with the dialect translations") {
  std::mt19937 rng(7);
  int done = 0;
  for (int i = 0; i < 400; ++i) {
    auto f = rnd_formula(rng, 3);
    auto t = rnd_term(rng, 2);
    FormulaPtr lhsE, rhsE;
    try {
      lhsE = to_epsilon(substitute(f, "x", t));
      rhsE = substitute(to_epsilon(f), "x", to_epsilon(t));
    } catch (const CaptureError&) {
      continue;  // both sides reject exactly when capture occurs
    }
    CHECK(equal(lhsE, rhsE));
    // Dual direction on the translated image.
    auto fe = to_epsilon(f);
    auto te = to_epsilon(t);
    auto lhsW = to_henkin(substitute(fe, "x", te));
    auto rhsW = substitute(to_henkin(fe), "x", to_henkin(te));
    CHECK(equal(lhsW, rhsW));
    ++done;
  }
  CHECK(done > 200);
}

TEST_CASE("dialect tracking") {
  Signature s = sig_pq();
  CHECK(parse_formula("P(x)", s)->dia == Dialect::Base);
  CHECK(parse_formula("P(wA[x. P(x)])", s)->dia == Dialect::Henkin);
  CHECK(parse_formula("P(eps[x. P(x)])", s)->dia == Dialect::Epsilon);
  auto e = to_epsilon(parse_formula("P(wA[x. P(x)])", s));
  CHECK(e->dia == Dialect::Epsilon);
}

TEST_CASE("sequent flavors") {
  Signature s = sig_pq();
  auto a = parse_sequent("p |- q", s);
  auto b = parse_sequent("p |-", s);
  CHECK(print(sequent_join(a, b, false)) == "p |- q");
  CHECK(print(sequent_join(a, b, true)) == "p, p |- q");
  auto m = parse_sequent("p, p |- q", s);
  CHECK(print(support(m)) == "p |- q");
  CHECK(ms_equal(parse_sequent("p, q |-", s), parse_sequent("q, p |-", s)));
  CHECK(!ms_equal(parse_sequent("p, p |-", s), parse_sequent("p |-", s)));
  CHECK(set_equal(parse_sequent("p, p |-", s), parse_sequent("p |-", s)));
}

TEST_CASE("signature validation and phi0") {
  Signature s;
  s.relations = {{"P", 1}};
  s.functions = {{"P", 1}};
  CHECK_THROWS_AS(s.validate(), SyntaxError);
  Signature s2;
  s2.relations = {{"Q", 2}};
  CHECK(print(s2.phi0()) == "Q(x, x)");
  Signature s3;
  s3.relations = {{"Q", 2}, {"a0", 0}, {"b0", 0}};
  CHECK(print(s3.phi0()) == "a0");
}

TEST_CASE("parse errors carry positions") {
  Signature s = sig_pq();
  CHECK_THROWS_AS(parse_formula("P(x", s), ParseError);
  CHECK_THROWS_AS(parse_formula("P(x, y)", s), ParseError);  // arity mismatch
  Signature closed = sig_pq();
  CHECK_THROWS_AS(parse_formula("S(x)", closed, false), ParseError);
}
