// Hand-built sample derivations shared by the unit tests and the
// acceptance suite.

#pragma once

#include "stproof/calculus.hpp"

namespace stp::samples {

// `|- exists x (P(x) -> forall x P(x))` in stq. Ten rule applications:
// ID, WL, WR, NegRI, OrRI, ExR (t = x), AllR (eigen x), NegRI, OrRI,
// ExR (t = y, where the set flavor collapses the duplicate goal).
inline DerivPtr drinker_stq() {
  auto cal = CalculusId::STQ;
  auto x = mk_var("x");
  auto y = mk_var("y");
  auto px = mk_atom("P", {x});
  auto py = mk_atom("P", {y});
  auto allp = mk_forall("x", px);
  auto goal = mk_exists("x", mk_implies(px, allp));

  auto d = mk_rule(cal, RuleId::ID, {}, {.principal = px});
  d = mk_rule(cal, RuleId::WL, {d}, {.principal = py});
  d = mk_rule(cal, RuleId::WR, {d}, {.principal = allp});
  d = mk_rule(cal, RuleId::NegRI, {d}, {.principal = mk_neg(px)});
  d = mk_rule(cal, RuleId::OrRI, {d}, {.principal = mk_implies(px, allp)});
  d = mk_rule(cal, RuleId::ExR, {d}, {.term = x, .principal = goal});
  d = mk_rule(cal, RuleId::AllR, {d}, {.eigen = "x", .principal = allp});
  d = mk_rule(cal, RuleId::NegRI, {d}, {.principal = mk_neg(py)});
  d = mk_rule(cal, RuleId::OrRI, {d}, {.principal = mk_implies(py, allp)});
  d = mk_rule(cal, RuleId::ExR, {d}, {.term = y, .principal = goal});
  return d;
}

// The same goal in sth, using the universal witness of `forall x P(x)`:
// ID, AllRWI, NegRI, OrRI, EWI (t = that witness), ExRWI.
inline DerivPtr drinker_sth() {
  auto cal = CalculusId::STH;
  auto x = mk_var("x");
  auto px = mk_atom("P", {x});
  auto allp = mk_forall("x", px);
  auto w = mk_uwitness("x", px);
  auto pw = mk_atom("P", {w});
  auto goal = mk_exists("x", mk_implies(px, allp));

  auto d = mk_rule(cal, RuleId::ID, {}, {.principal = pw});
  d = mk_rule(cal, RuleId::AllRWI, {d}, {.principal = allp});
  d = mk_rule(cal, RuleId::NegRI, {d}, {.principal = mk_neg(pw)});
  d = mk_rule(cal, RuleId::OrRI, {d}, {.principal = mk_implies(pw, allp)});
  d = mk_rule(cal, RuleId::EWI, {d}, {.term = w, .principal = goal});
  d = mk_rule(cal, RuleId::ExRWI, {d}, {.principal = goal});
  return d;
}

}  // namespace stp::samples
