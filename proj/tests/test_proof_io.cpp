#include "doctest.h"
#include "proof_samples.hpp"
#include "stproof/proof_io.hpp"

using namespace stp;

TEST_CASE("printing and parsing derivations round-trips bit-exactly") {
  for (auto& [d, cal] : {std::pair{samples::drinker_stq(), CalculusId::STQ},
                         std::pair{samples::drinker_sth(), CalculusId::STH}}) {
    auto text = print_derivation(d);
    Signature sig;
    auto back = parse_derivation(text, sig);
    CHECK(print_derivation(back) == text);
    CHECK_NOTHROW(check(back, cal));
  }
}

TEST_CASE("parsing a hand-written derivation") {
  std::string text =
      "NegRI; principal=R:~p; sequent=|- q, ~p\n"
      "  Assumption; label=h; sequent=p |- q\n";
  Signature sig;
  auto d = parse_derivation(text, sig);
  REQUIRE(d->kind == NodeKind::Rule);
  CHECK(d->rule == RuleId::NegRI);
  REQUIRE(d->children.size() == 1);
  CHECK(d->children[0]->kind == NodeKind::Assumption);
  CHECK(d->children[0]->label == "h");
  CHECK(print_derivation(d) == text);
  auto rep = check(d, CalculusId::STP);
  CHECK(rep.open_premises.size() == 1);
}

TEST_CASE("comments and blank lines are ignored") {
  std::string text =
      "# an axiom\n"
      "\n"
      "ID; principal=B:p; sequent=p |- p\n";
  Signature sig;
  auto d = parse_derivation(text, sig);
  CHECK(d->rule == RuleId::ID);
  CHECK(print_derivation(d) == "ID; principal=B:p; sequent=p |- p\n");
}

TEST_CASE("sidetrack nodes carry binds= and discharge markers") {
  std::string text =
      "ExRE; eigen=y; principal=R:exists x. P(x); binds=u; sequent=|- q, exists x. P(x)\n"
      "  Assumption; label=maj; sequent=|- q, exists x. P(x)\n"
      "  ExRI; term=y; principal=R:exists x. P(x); sequent=|- q, exists x. P(x)\n"
      "    Discharged; label=u; sequent=|- q, P(y)\n";
  Signature sig;
  auto d = parse_derivation(text, sig);
  CHECK(d->binds == "u");
  CHECK(print_derivation(d) == text);
  auto rep = check(d, CalculusId::MQST);
  REQUIRE(rep.open_premises.size() == 1);
  CHECK(rep.open_premises[0].label == "maj");
}

TEST_CASE("parse errors carry line numbers") {
  Signature sig;
  CHECK_THROWS_WITH_AS(parse_derivation("ID; sequent=p |- p\n bad\n", sig),
                       doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_AS(parse_derivation("Bogus; sequent=p |- p\n", sig), ParseError);
  CHECK_THROWS_AS(parse_derivation("ID; principal=B:p\n", sig), ParseError);
  CHECK_THROWS_AS(parse_derivation("", sig), ParseError);
  CHECK_THROWS_AS(
      parse_derivation("ID; principal=B:p; sequent=p |- p\n"
                       "ID; principal=B:q; sequent=q |- q\n",
                       sig),
      ParseError);
  CHECK_THROWS_AS(
      parse_derivation("WL; principal=B:q; sequent=q, p |- p\n"
                       "    ID; principal=B:p; sequent=p |- p\n",
                       sig),
      ParseError);
  CHECK_THROWS_AS(parse_derivation("Assumption; sequent=p |- p\n", sig),
                  ParseError);
}

TEST_CASE("fixture files match the built-in samples") {
  std::string dir = STPROOF_FIXTURES_DIR;
  Signature sig;
  auto stq = parse_derivation(read_file(dir + "/drinker_stq.proof"), sig);
  CHECK(print_derivation(stq) == print_derivation(samples::drinker_stq()));
  CHECK_NOTHROW(check(stq, CalculusId::STQ));
  auto sth = parse_derivation(read_file(dir + "/drinker_sth.proof"), sig);
  CHECK(print_derivation(sth) == print_derivation(samples::drinker_sth()));
  CHECK_NOTHROW(check(sth, CalculusId::STH));
}

TEST_CASE("principal side markers match the rule") {
  CHECK(principal_side(RuleId::ID) == 'B');
  CHECK(principal_side(RuleId::GID) == 'B');
  CHECK(principal_side(RuleId::Cut) == 'B');
  CHECK(principal_side(RuleId::AndLI) == 'L');
  CHECK(principal_side(RuleId::AndRI) == 'R');
  CHECK(principal_side(RuleId::UWI) == 'L');
  CHECK(principal_side(RuleId::EWI) == 'R');
  CHECK(principal_side(RuleId::EWE) == 'L');
  CHECK(principal_side(RuleId::UWE) == 'R');
  CHECK(principal_side(RuleId::WExchLE) == 'L');
  CHECK(principal_side(RuleId::AllREps) == 'R');
  CHECK(principal_side(RuleId::ExLE) == 'L');
  CHECK(principal_side(RuleId::ExRE) == 'R');
  CHECK(principal_side(RuleId::AllLE) == 'L');
}
