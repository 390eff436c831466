#include "doctest.h"
#include "proof_samples.hpp"
#include "stproof/calculus.hpp"

using namespace stp;

namespace {

Signature sig() {
  Signature s;
  s.relations = {{"P", 1}, {"Q", 1}, {"R", 2}, {"p", 0}, {"q", 0}, {"r", 0}};
  s.functions = {{"c", 0}, {"d", 0}, {"f", 1}};
  return s;
}

FormulaPtr F(const std::string& t) {
  auto s = sig();
  return parse_formula(t, s, false);
}

Sequent S(const std::string& t) {
  auto s = sig();
  return parse_sequent(t, s, false);
}

TermPtr T(const std::string& t) {
  auto s = sig();
  return parse_term(t, s, false);
}

// Copies a node so a single field can be perturbed before re-checking.
std::shared_ptr<Derivation> clone(const DerivPtr& d) {
  return std::make_shared<Derivation>(*d);
}

}  // namespace

TEST_CASE("rule and calculus names round-trip") {
  for (auto r : {RuleId::ID, RuleId::GID, RuleId::AndRI, RuleId::OrLE,
                 RuleId::AllR, RuleId::EWI, RuleId::WExchRE, RuleId::ExLEps,
                 RuleId::ExRE, RuleId::AllLE, RuleId::Cut, RuleId::CL}) {
    CHECK(rule_from_name(rule_name(r)) == r);
  }
  for (auto c : {CalculusId::STP, CalculusId::STQ, CalculusId::STH,
                 CalculusId::STHC, CalculusId::E, CalculusId::MQST}) {
    CHECK(calculus_from_name(calculus_name(c)) == c);
  }
  CHECK_THROWS_AS(rule_from_name("Frobnicate"), SyntaxError);
  CHECK_THROWS_AS(calculus_from_name("lk"), SyntaxError);
}

TEST_CASE("rule catalog membership") {
  CHECK(rule_in(CalculusId::STP, RuleId::AndRE));
  CHECK_FALSE(rule_in(CalculusId::STQ, RuleId::AndRE));
  CHECK_FALSE(rule_in(CalculusId::STQ, RuleId::EWI));
  CHECK(rule_in(CalculusId::STH, RuleId::UWE));
  CHECK_FALSE(rule_in(CalculusId::STHC, RuleId::UWE));
  CHECK(rule_in(CalculusId::STHC, RuleId::Cut));
  CHECK(rule_in(CalculusId::STHC, RuleId::WExchLE));
  CHECK_FALSE(rule_in(CalculusId::STP, RuleId::Cut));
  CHECK(rule_in(CalculusId::E, RuleId::ExLEps));
  CHECK_FALSE(rule_in(CalculusId::E, RuleId::AllR));
  CHECK(rule_in(CalculusId::MQST, RuleId::GID));
  CHECK(rule_in(CalculusId::MQST, RuleId::CL));
  CHECK_FALSE(rule_in(CalculusId::MQST, RuleId::WL));
  CHECK_FALSE(rule_in(CalculusId::MQST, RuleId::ID));
}

TEST_CASE("directional classification") {
  CHECK(is_introduction(RuleId::AndRI));
  CHECK(is_elimination(RuleId::AndRE));
  CHECK(is_elimination(RuleId::ExLE));
  CHECK_FALSE(is_introduction(RuleId::ExLE));
  CHECK(is_sidetrack(RuleId::ExRE));
  CHECK(is_sidetrack(RuleId::AllLE));
  CHECK(is_elimination(RuleId::AllLE));
  CHECK_FALSE(is_sidetrack(RuleId::AllRE));
  CHECK(rule_arity(RuleId::ID) == 0);
  CHECK(rule_arity(RuleId::AndRI) == 2);
  CHECK(rule_arity(RuleId::ExRE) == 2);
  CHECK(rule_arity(RuleId::NegLI) == 1);
}

TEST_CASE("apply_rule: propositional connectives") {
  auto stp_ = CalculusId::STP;

  SUBCASE("conjunction right introduction merges matching contexts") {
    auto c = apply_rule(stp_, RuleId::AndRI, {S("r |- q, p"), S("r |- q, P(x)")},
                        {.principal = F("p /\\ P(x)")});
    CHECK(set_equal(c, S("r |- q, p /\\ P(x)")));
    CHECK_THROWS_AS(
        apply_rule(stp_, RuleId::AndRI, {S("r |- q, p"), S("|- q, P(x)")},
                   {.principal = F("p /\\ P(x)")}),
        RuleError);
  }
  SUBCASE("conjunction left introduction and its inverse") {
    auto c = apply_rule(stp_, RuleId::AndLI, {S("p, q, r |- ")},
                        {.principal = F("p /\\ q")});
    CHECK(set_equal(c, S("p /\\ q, r |- ")));
    auto back = apply_rule(stp_, RuleId::AndLE, {c}, {.principal = F("p /\\ q")});
    CHECK(set_equal(back, S("p, q, r |- ")));
  }
  SUBCASE("collapsed side formulas are accepted, missing ones are not") {
    auto c = apply_rule(stp_, RuleId::AndLI, {S("p |- q")},
                        {.principal = F("p /\\ p")});
    CHECK(set_equal(c, S("p /\\ p |- q")));
    CHECK_THROWS_AS(apply_rule(stp_, RuleId::AndLI, {S("p |- q")},
                               {.principal = F("p /\\ r")}),
                    RuleError);
    CHECK_THROWS_AS(apply_rule(stp_, RuleId::OrRI, {S("|- p")},
                               {.principal = F("p \\/ r")}),
                    RuleError);
  }
  SUBCASE("selected inverses of two-premise rules") {
    auto c1 = apply_rule(stp_, RuleId::AndRE, {S("|- p /\\ q, r")},
                         {.principal = F("p /\\ q"), .select = 1});
    CHECK(set_equal(c1, S("|- p, r")));
    auto c2 = apply_rule(stp_, RuleId::AndRE, {S("|- p /\\ q, r")},
                         {.principal = F("p /\\ q"), .select = 2});
    CHECK(set_equal(c2, S("|- q, r")));
    auto c3 = apply_rule(stp_, RuleId::OrLE, {S("p \\/ q |- r")},
                         {.principal = F("p \\/ q"), .select = 2});
    CHECK(set_equal(c3, S("q |- r")));
    CHECK_THROWS_AS(apply_rule(stp_, RuleId::AndRE, {S("|- p /\\ q")},
                               {.principal = F("p /\\ q")}),
                    RuleError);
  }
  SUBCASE("negation swaps sides") {
    CHECK(set_equal(apply_rule(stp_, RuleId::NegRI, {S("p |- q")},
                               {.principal = F("~p")}),
                    S("|- q, ~p")));
    CHECK(set_equal(apply_rule(stp_, RuleId::NegLI, {S("|- q, p")},
                               {.principal = F("~p")}),
                    S("~p |- q")));
    CHECK(set_equal(apply_rule(stp_, RuleId::NegLE, {S("~p |- q")},
                               {.principal = F("~p")}),
                    S("|- q, p")));
    CHECK(set_equal(apply_rule(stp_, RuleId::NegRE, {S("|- q, ~p")},
                               {.principal = F("~p")}),
                    S("p |- q")));
  }
  SUBCASE("disjunction elimination splats both disjuncts") {
    CHECK(set_equal(apply_rule(stp_, RuleId::OrRE, {S("|- p \\/ q")},
                               {.principal = F("p \\/ q")}),
                    S("|- p, q")));
  }
  SUBCASE("arity and principal validation") {
    CHECK_THROWS_AS(apply_rule(stp_, RuleId::NegRI, {}, {.principal = F("~p")}),
                    RuleError);
    CHECK_THROWS_AS(apply_rule(stp_, RuleId::NegRI, {S("p |- ")}, {}), RuleError);
    CHECK_THROWS_AS(
        apply_rule(stp_, RuleId::NegRI, {S("p |- ")}, {.principal = F("p")}),
        RuleError);
    CHECK_THROWS_AS(apply_rule(stp_, RuleId::GID, {}, {.principal = F("p")}),
                    RuleError);
  }
}

TEST_CASE("apply_rule: plain quantifier rules") {
  auto stq = CalculusId::STQ;
  auto all = F("forall x. P(x)");
  auto ex = F("exists x. P(x)");

  auto c = apply_rule(stq, RuleId::AllL, {S("P(c) |- q")},
                      {.term = T("c"), .principal = all});
  CHECK(set_equal(c, S("forall x. P(x) |- q")));

  c = apply_rule(stq, RuleId::ExR, {S("|- P(f(c))")},
                 {.term = T("f(c)"), .principal = ex});
  CHECK(set_equal(c, S("|- exists x. P(x)")));

  c = apply_rule(stq, RuleId::AllR, {S("q |- P(y)")},
                 {.eigen = "y", .principal = all});
  CHECK(set_equal(c, S("q |- forall x. P(x)")));

  c = apply_rule(stq, RuleId::ExL, {S("P(y) |- q")},
                 {.eigen = "y", .principal = ex});
  CHECK(set_equal(c, S("exists x. P(x) |- q")));

  CHECK_THROWS_AS(apply_rule(stq, RuleId::AllR, {S("q |- P(y)")},
                             {.principal = all}),
                  RuleError);
  CHECK_THROWS_AS(apply_rule(stq, RuleId::AllL, {S("P(c) |- q")},
                             {.principal = all}),
                  RuleError);
}

TEST_CASE("apply_rule: witness rules") {
  auto sth = CalculusId::STH;
  auto all = F("forall x. P(x)");
  auto ex = F("exists x. P(x)");
  auto wa = mk_uwitness("x", F("P(x)"));
  auto we = mk_ewitness("x", F("P(x)"));
  auto c0 = mk_app("c", {});

  SUBCASE("universal witness introduction replaces an instance") {
    auto c = apply_rule(sth, RuleId::UWI, {S("P(c) |- q")},
                        {.term = c0, .principal = all});
    CHECK(set_equal(c, Sequent{{mk_atom("P", {wa})}, {F("q")}}));
    auto back = apply_rule(sth, RuleId::UWE, {Sequent{{F("q")}, {mk_atom("P", {wa})}}},
                           {.term = c0, .principal = all});
    CHECK(set_equal(back, S("q |- P(c)")));
  }
  SUBCASE("existential witness introduction and elimination") {
    auto c = apply_rule(sth, RuleId::EWI, {S("|- P(c)")},
                        {.term = c0, .principal = ex});
    CHECK(set_equal(c, Sequent{{}, {mk_atom("P", {we})}}));
    auto back = apply_rule(sth, RuleId::EWE, {Sequent{{mk_atom("P", {we})}, {}}},
                           {.term = c0, .principal = ex});
    CHECK(set_equal(back, S("P(c) |- ")));
  }
  SUBCASE("quantified formula to witness instance and back") {
    auto winst = mk_atom("P", {wa});
    auto c = apply_rule(sth, RuleId::AllRWI, {Sequent{{}, {winst}}},
                        {.principal = all});
    CHECK(set_equal(c, Sequent{{}, {all}}));
    auto back = apply_rule(sth, RuleId::AllRWE, {c}, {.principal = all});
    CHECK(set_equal(back, Sequent{{}, {winst}}));
    auto l = apply_rule(sth, RuleId::AllLWI, {Sequent{{winst}, {}}},
                        {.principal = all});
    CHECK(set_equal(l, Sequent{{all}, {}}));
    CHECK(set_equal(apply_rule(sth, RuleId::AllLWE, {l}, {.principal = all}),
                    Sequent{{winst}, {}}));
    auto einst = mk_atom("P", {we});
    auto e = apply_rule(sth, RuleId::ExLWI, {Sequent{{einst}, {}}},
                        {.principal = ex});
    CHECK(set_equal(e, Sequent{{ex}, {}}));
    CHECK(set_equal(apply_rule(sth, RuleId::ExLWE, {e}, {.principal = ex}),
                    Sequent{{einst}, {}}));
    auto r = apply_rule(sth, RuleId::ExRWI, {Sequent{{}, {einst}}},
                        {.principal = ex});
    CHECK(set_equal(r, Sequent{{}, {ex}}));
    CHECK(set_equal(apply_rule(sth, RuleId::ExRWE, {r}, {.principal = ex}),
                    Sequent{{}, {einst}}));
  }
}

TEST_CASE("apply_rule: cut and witness exchange") {
  auto sthc = CalculusId::STHC;

  auto c = apply_rule(sthc, RuleId::Cut, {S("p |- q, r"), S("r, P(x) |- q")},
                      {.principal = F("r")});
  CHECK(set_equal(c, S("p, P(x) |- q")));
  CHECK_THROWS_AS(apply_rule(sthc, RuleId::Cut, {S("p |- q"), S("r |- q")},
                             {.principal = F("r")}),
                  RuleError);

  auto wa = mk_uwitness("x", F("P(x)"));
  auto we = mk_ewitness("x", F("~P(x)"));
  auto qa = mk_atom("Q", {wa});
  auto qe = mk_atom("Q", {we});
  auto swapped = apply_rule(sthc, RuleId::WExchRI, {Sequent{{}, {qa}}},
                            {.term = wa, .principal = qa});
  CHECK(set_equal(swapped, Sequent{{}, {qe}}));
  auto back = apply_rule(sthc, RuleId::WExchRE, {swapped},
                         {.term = wa, .principal = qe});
  CHECK(set_equal(back, Sequent{{}, {qa}}));
  auto left = apply_rule(sthc, RuleId::WExchLI, {Sequent{{qa}, {}}},
                         {.term = wa, .principal = qa});
  CHECK(set_equal(left, Sequent{{qe}, {}}));
  CHECK(set_equal(apply_rule(sthc, RuleId::WExchLE, {left},
                             {.term = wa, .principal = qe}),
                  Sequent{{qa}, {}}));
  CHECK_THROWS_AS(apply_rule(sthc, RuleId::WExchRI, {Sequent{{}, {qa}}},
                             {.term = we, .principal = qa}),
                  RuleError);
}

TEST_CASE("apply_rule: epsilon rules") {
  auto E = CalculusId::E;
  auto px = F("P(x)");
  auto ex = F("exists x. P(x)");
  auto all = F("forall x. P(x)");
  auto eps = mk_eps("x", px);
  auto epsneg = mk_eps("x", mk_neg(px));

  auto c = apply_rule(E, RuleId::ExLEps, {Sequent{{mk_atom("P", {eps})}, {}}},
                      {.principal = ex});
  CHECK(set_equal(c, Sequent{{ex}, {}}));

  c = apply_rule(E, RuleId::ExREps, {S("|- P(c)")},
                 {.term = mk_app("c", {}), .principal = ex});
  CHECK(set_equal(c, Sequent{{}, {ex}}));

  c = apply_rule(E, RuleId::AllLEps, {S("P(c) |- ")},
                 {.term = mk_app("c", {}), .principal = all});
  CHECK(set_equal(c, Sequent{{all}, {}}));

  c = apply_rule(E, RuleId::AllREps, {Sequent{{}, {mk_atom("P", {epsneg})}}},
                 {.principal = all});
  CHECK(set_equal(c, Sequent{{}, {all}}));
}

TEST_CASE("apply_rule: multiset structural rules") {
  auto mq = CalculusId::MQST;
  auto p = F("P(c)");
  Sequent twice{{}, {p, p}};
  auto c = apply_rule(mq, RuleId::CR, {twice}, {.principal = p});
  CHECK(ms_equal(c, Sequent{{}, {p}}));
  CHECK_THROWS_AS(apply_rule(mq, RuleId::CR, {Sequent{{}, {p}}}, {.principal = p}),
                  RuleError);
  Sequent twiceL{{p, p}, {}};
  CHECK(ms_equal(apply_rule(mq, RuleId::CL, {twiceL}, {.principal = p}),
                 Sequent{{p}, {}}));

  // Multiset removal takes exactly one copy.
  auto r = apply_rule(mq, RuleId::NegRI, {Sequent{{p, p}, {}}},
                      {.principal = mk_neg(p)});
  CHECK(ms_equal(r, Sequent{{p}, {mk_neg(p)}}));
}

TEST_CASE("checker: small set-calculus derivations") {
  auto stp_ = CalculusId::STP;
  auto d = mk_rule(stp_, RuleId::ID, {}, {.principal = F("p")});
  d = mk_rule(stp_, RuleId::WL, {d}, {.principal = F("q")});
  d = mk_rule(stp_, RuleId::AndRE,
              {mk_rule(stp_, RuleId::WR, {d}, {.principal = F("p /\\ q")})},
              {.principal = F("p /\\ q"), .select = 2});
  auto rep = check(d, stp_);
  CHECK(set_equal(rep.conclusion, S("q, p |- p, q")));
  CHECK(rep.open_premises.empty());
  CHECK(rep.node_count == 4);
  CHECK(rep.max_depth == 4);

  // The same derivation names rules outside stq.
  CHECK_THROWS_AS(check(d, CalculusId::STQ), RuleViolation);
}

TEST_CASE("checker: open premises flow to the report") {
  auto stp_ = CalculusId::STP;
  auto a = mk_assumption("h1", S("p |- q"));
  auto d = mk_rule(stp_, RuleId::NegRI, {a}, {.principal = F("~p")});
  auto rep = check(d, stp_);
  REQUIRE(rep.open_premises.size() == 1);
  CHECK(rep.open_premises[0].label == "h1");
  CHECK(set_equal(rep.open_premises[0].sequent, S("p |- q")));
}

TEST_CASE("checker: duplicate formulas rejected in set flavor") {
  auto node = std::make_shared<Derivation>();
  node->kind = NodeKind::Assumption;
  node->label = "h";
  node->sequent = Sequent{{F("p"), F("p")}, {}};
  CHECK_THROWS_AS(check(node, CalculusId::STP), RuleViolation);
  // The multiset flavor is fine with it.
  auto rep = check(node, CalculusId::MQST);
  CHECK(rep.open_premises.size() == 1);
}

TEST_CASE("checker: stated sequent must match the computed conclusion") {
  auto stp_ = CalculusId::STP;
  auto d = mk_rule(stp_, RuleId::ID, {}, {.principal = F("p")});
  auto lying = clone(mk_rule(stp_, RuleId::WL, {d}, {.principal = F("q")}));
  lying->sequent = S("r, p |- p");
  CHECK_THROWS_AS(check(lying, stp_), RuleViolation);
}

TEST_CASE("checker: drinker derivation in stq") {
  auto d = samples::drinker_stq();
  auto rep = check(d, CalculusId::STQ);
  CHECK(set_equal(rep.conclusion, S("|- exists x. (P(x) -> forall x. P(x))")));
  CHECK(rep.open_premises.empty());
  CHECK(rep.node_count == 10);
}

TEST_CASE("checker: drinker derivation in sth") {
  auto d = samples::drinker_sth();
  auto rep = check(d, CalculusId::STH);
  CHECK(set_equal(rep.conclusion, S("|- exists x. (P(x) -> forall x. P(x))")));
  CHECK(rep.open_premises.empty());
  CHECK(rep.node_count == 6);
}

TEST_CASE("checker: drinker mutations are rejected") {
  auto d = samples::drinker_stq();

  SUBCASE("changing the eigenvariable of AllR") {
    // Node 3 from the root is AllR (eigen x); y names a free variable there.
    auto n0 = clone(d);
    auto n1 = clone(n0->children[0]);
    auto n2 = clone(n1->children[0]);
    auto n3 = clone(n2->children[0]);
    REQUIRE(n3->rule == RuleId::AllR);
    n3->params.eigen = "y";
    n2->children = {n3};
    n1->children = {n2};
    n0->children = {n1};
    CHECK_THROWS_AS(check(n0, CalculusId::STQ), RuleViolation);
  }
  SUBCASE("perturbing a rule name") {
    auto n0 = clone(d);
    REQUIRE(n0->rule == RuleId::ExR);
    n0->rule = RuleId::ExL;
    CHECK_THROWS_AS(check(n0, CalculusId::STQ), RuleViolation);
  }
  SUBCASE("perturbing the witness term in sth") {
    auto h = clone(samples::drinker_sth());
    auto n1 = clone(h->children[0]);
    REQUIRE(n1->rule == RuleId::EWI);
    n1->params.term = mk_app("c", {});
    auto mutated = clone(h);
    mutated->children = {n1};
    CHECK_THROWS_AS(check(mutated, CalculusId::STH), RuleViolation);
  }
}

TEST_CASE("checker: eigenvariable conditions") {
  auto stq = CalculusId::STQ;
  auto all = F("forall x. P(x)");

  // Valid: the eigenvariable vanishes from the conclusion.
  auto lem = F("~P(y) \\/ P(y)");
  auto ok = mk_rule(stq, RuleId::ID, {}, {.principal = F("P(y)")});
  ok = mk_rule(stq, RuleId::NegRI, {ok}, {.principal = F("~P(y)")});
  ok = mk_rule(stq, RuleId::OrRI, {ok}, {.principal = lem});
  ok = mk_rule(stq, RuleId::AllR, {ok},
               {.eigen = "y", .principal = F("forall x. (~P(x) \\/ P(x))")});
  CHECK_NOTHROW(check(ok, stq));

  // Invalid: eigen y free in the conclusion's antecedent.
  auto bad = mk_rule(stq, RuleId::ID, {}, {.principal = F("P(y)")});
  bad = mk_rule(stq, RuleId::WL, {bad}, {.principal = F("Q(y)")});
  auto node = clone(mk_rule(stq, RuleId::AllR, {bad},
                            {.eigen = "y", .principal = all}));
  CHECK_THROWS_WITH_AS(check(node, stq),
                       doctest::Contains("eigenvariable"), RuleViolation);

  // Invalid: eigen free in an open premise above the inference even though
  // the conclusion itself is clean.
  auto a = mk_assumption("h", S("|- P(y)"));
  auto viaOpen = mk_rule(stq, RuleId::AllR, {a}, {.eigen = "y", .principal = all});
  CHECK_THROWS_WITH_AS(check(viaOpen, stq),
                       doctest::Contains("open premise"), RuleViolation);

  // ExL mirrors AllR.
  auto exl = mk_assumption("h", S("P(y) |- Q(y)"));
  auto badExl = mk_rule(stq, RuleId::ExL, {exl},
                        {.eigen = "y", .principal = F("exists x. P(x)")});
  CHECK_THROWS_AS(check(badExl, stq), RuleViolation);
}

TEST_CASE("checker: generalized axioms in mqst") {
  auto mq = CalculusId::MQST;
  auto gid = mk_gid(S("q, p /\\ q |- p /\\ q"), F("p /\\ q"));
  auto rep = check(gid, mq);
  CHECK(rep.open_premises.empty());

  auto noPrincipal = clone(gid);
  noPrincipal->params.principal = nullptr;
  CHECK_THROWS_AS(check(noPrincipal, mq), RuleViolation);

  auto oneSided = mk_gid(S("p |- q"), F("p"));
  CHECK_THROWS_AS(check(oneSided, mq), RuleViolation);
}

TEST_CASE("checker: mqst sidetrack discharge") {
  auto mq = CalculusId::MQST;
  auto ex = F("exists x. P(x)");
  Sequent goal = S("|- q, exists x. P(x)");

  auto major = mk_assumption("maj", goal);
  auto leaf = mk_discharged("u", S("|- q, P(y)"));
  auto minor = mk_rule(mq, RuleId::ExRI, {leaf},
                       {.term = mk_var("y"), .principal = ex});
  REQUIRE(ms_equal(minor->sequent, goal));
  auto st = mk_rule(mq, RuleId::ExRE, {major, minor},
                    {.eigen = "y", .principal = ex}, "u");

  auto rep = check(st, mq);
  CHECK(ms_equal(rep.conclusion, goal));
  REQUIRE(rep.open_premises.size() == 1);
  CHECK(rep.open_premises[0].label == "maj");

  SUBCASE("undischarged labels surface at the root") {
    CHECK_THROWS_WITH_AS(check(minor, mq), doctest::Contains("never discharged"),
                         RuleViolation);
  }
  SUBCASE("schema mismatch is rejected") {
    auto badLeaf = mk_discharged("u", S("|- q, P(c)"));
    auto badMinor = mk_rule(mq, RuleId::ExRI, {badLeaf},
                            {.term = mk_app("c", {}), .principal = ex});
    auto bad = clone(st);
    bad->children = {major, badMinor};
    CHECK_THROWS_WITH_AS(check(bad, mq), doctest::Contains("schema"),
                         RuleViolation);
  }
  SUBCASE("eigenvariable must avoid the conclusion") {
    // Same shape but with Q(y) in the shared context.
    auto m2 = mk_assumption("maj", S("|- Q(y), exists x. P(x)"));
    auto l2 = mk_discharged("u", S("|- Q(y), P(y)"));
    auto mn2 = mk_rule(mq, RuleId::ExRI, {l2},
                       {.term = mk_var("y"), .principal = ex});
    auto st2 = mk_rule(mq, RuleId::ExRE, {m2, mn2},
                       {.eigen = "y", .principal = ex}, "u");
    CHECK_THROWS_WITH_AS(check(st2, mq), doctest::Contains("eigenvariable"),
                         RuleViolation);
  }
  SUBCASE("zero discharges are allowed") {
    auto plain = mk_gid(S("q |- q"), F("q"));
    auto st0 = mk_rule(mq, RuleId::ExRE, {major, plain},
                       {.eigen = "y", .principal = ex}, "u");
    auto r0 = check(st0, mq);
    CHECK(ms_equal(r0.conclusion, S("q |- q")));
  }
  SUBCASE("discharge inside the major premise is rejected") {
    auto majBad = mk_discharged("u", goal);
    auto stBad = mk_rule(mq, RuleId::ExRE, {majBad, minor},
                         {.eigen = "y", .principal = ex}, "u");
    CHECK_THROWS_WITH_AS(check(stBad, mq),
                         doctest::Contains("outside the minor"), RuleViolation);
  }
  SUBCASE("binds on a non-sidetrack rule is rejected") {
    auto bad = clone(minor);
    bad->binds = "u";
    CHECK_THROWS_AS(check(bad, mq), RuleViolation);
  }
}

TEST_CASE("checker: mqst universal sidetrack") {
  auto mq = CalculusId::MQST;
  auto all = F("forall x. P(x)");
  Sequent goal = S("forall x. P(x), q |- ");

  auto major = mk_assumption("maj", goal);
  auto leaf = mk_discharged("w", S("P(y), q |- "));
  auto minor = mk_rule(mq, RuleId::AllLI, {leaf},
                       {.term = mk_var("y"), .principal = all});
  REQUIRE(ms_equal(minor->sequent, goal));
  auto st = mk_rule(mq, RuleId::AllLE, {major, minor},
                    {.eigen = "y", .principal = all}, "w");
  auto rep = check(st, mq);
  CHECK(ms_equal(rep.conclusion, goal));
}

TEST_CASE("checker: epsilon existence proof") {
  auto E = CalculusId::E;
  auto px = F("P(x)");
  auto ex = F("exists x. P(x)");
  auto eps = mk_eps("x", px);
  auto peps = mk_atom("P", {eps});

  auto d = mk_rule(E, RuleId::ID, {}, {.principal = peps});
  d = mk_rule(E, RuleId::ExLEps, {d}, {.principal = ex});
  d = mk_rule(E, RuleId::ExREps, {d}, {.term = eps, .principal = ex});
  auto rep = check(d, E);
  CHECK(set_equal(rep.conclusion, Sequent{{ex}, {ex}}));
}

TEST_CASE("checker: sthc cut with witness exchange") {
  auto sthc = CalculusId::STHC;
  auto px = F("P(x)");
  auto wa = mk_uwitness("x", px);
  auto we = mk_ewitness("x", mk_neg(px));
  auto pwa = mk_atom("P", {wa});
  auto pwe = mk_atom("P", {we});

  // P(wE) |- P(wE) via exchange on both sides of P(wA) |- P(wA), then cut
  // against an identity to get back a one-step consequence.
  auto d = mk_rule(sthc, RuleId::ID, {}, {.principal = pwa});
  d = mk_rule(sthc, RuleId::WExchLI, {d}, {.term = wa, .principal = pwa});
  d = mk_rule(sthc, RuleId::WExchRI, {d}, {.term = wa, .principal = pwa});
  CHECK(set_equal(d->sequent, Sequent{{pwe}, {pwe}}));

  auto idwe = mk_rule(sthc, RuleId::ID, {}, {.principal = pwe});
  auto cut = mk_rule(sthc, RuleId::Cut, {d, idwe}, {.principal = pwe});
  auto rep = check(cut, sthc);
  CHECK(set_equal(rep.conclusion, Sequent{{pwe}, {pwe}}));
  CHECK(rep.node_count == 5);
}

TEST_CASE("node_count") {
  CHECK(node_count(samples::drinker_stq()) == 10);
  CHECK(node_count(samples::drinker_sth()) == 6);
}
