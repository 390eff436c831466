#include "doctest.h"
#include "stproof/normalize.hpp"
#include "stproof/proof_io.hpp"

using namespace stp;

namespace {

constexpr CalculusId MQ = CalculusId::MQST;

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

bool has_rule(const DerivPtr& d, RuleId r) {
  if (d->kind == NodeKind::Rule && d->rule == r) return true;
  for (auto& c : d->children)
    if (has_rule(c, r)) return true;
  return false;
}

int count_assumptions(const DerivPtr& d) {
  int n = d->kind == NodeKind::Assumption ? 1 : 0;
  for (auto& c : d->children) n += count_assumptions(c);
  return n;
}

// exists x. P(x) introduced from its instance at t.
DerivPtr ex_intro(DerivPtr prem, const TermPtr& t) {
  return mk_rule(MQ, RuleId::ExRI, {std::move(prem)},
                 {.term = t, .principal = F("exists x. P(x)")});
}

// The minor derivation every ExRE test reuses: a discharged leaf carrying the
// instance at the eigenvariable, closed back up with ExRI.
DerivPtr ex_minor(const std::string& label, const Sequent& schema, const std::string& eigen) {
  return ex_intro(mk_discharged(label, schema), mk_var(eigen));
}

}  // namespace

TEST_CASE("count_logical_symbols counts connectives and quantifiers") {
  CHECK(count_logical_symbols(F("p")) == 0);
  CHECK(count_logical_symbols(F("~(p /\\ q) \\/ forall x. P(x)")) == 4);
  CHECK(count_logical_symbols(S("p |- ~p")) == 1);
  CHECK(count_logical_symbols(S("|-")) == 0);
}

TEST_CASE("a contraction extends the segment of its premise") {
  auto d = mk_gid(S("p, p |- p"), F("p"));
  d = mk_rule(MQ, RuleId::CL, {d}, {.principal = F("p")});
  auto segs = segments(d);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].nodes == std::vector<NodePath>{{0}, {}});
  CHECK(segs[0].rank == 0);
  CHECK(segs[0].starts_with_gid);
  CHECK(!segs[0].starts_with_intro);
  CHECK(!segs[0].ends_at_major_elim);
}

TEST_CASE("an introduction feeding an elimination is a cut segment") {
  auto d = mk_assumption("a", S("q |- p"));
  d = mk_rule(MQ, RuleId::NegLI, {d}, {.principal = F("~p")});
  d = mk_rule(MQ, RuleId::NegLE, {d}, {.principal = F("~p")});
  auto cuts = cut_segments(d);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].nodes == std::vector<NodePath>{{0}});
  CHECK(cuts[0].rank == 1);
  CHECK(cuts[0].starts_with_intro);
  CHECK(cuts[0].ends_at_major_elim);
  CHECK(!is_normal(d));
}

TEST_CASE("eliminations applied to assumptions are normal") {
  auto d = mk_assumption("a", S("p /\\ q |- r"));
  d = mk_rule(MQ, RuleId::AndLE, {d}, {.principal = F("p /\\ q")});
  CHECK(cut_segments(d).empty());
  CHECK(is_normal(d));
  CHECK(normalize(d).get() == d.get());
}

TEST_CASE("a compound identity instance is not normal") {
  auto d = mk_gid(S("p /\\ q |- p /\\ q"), F("p /\\ q"));
  CHECK(!is_normal(d));
  std::vector<std::string> trace;
  auto e = normalize(d, &trace);
  CHECK(is_normal(e));
  CHECK(ms_equal(e->sequent, d->sequent));
  REQUIRE(!trace.empty());
  CHECK(trace[0] == "expand-gid at root");
}

TEST_CASE("a sidetrack that discharges nothing is dropped") {
  auto major = mk_assumption("M", S("|- exists x. P(x)"));
  auto minor = mk_assumption("N", S("p |- q"));
  auto d = mk_rule(MQ, RuleId::ExRE, {major, minor},
                   {.eigen = "y", .principal = F("exists x. P(x)")}, "u");
  check(d, MQ);
  CHECK(!is_normal(d));
  std::vector<std::string> trace;
  auto e = normalize(d, &trace);
  CHECK(print_derivation(e) == print_derivation(minor));
  REQUIRE(trace.size() == 1);
  CHECK(trace[0] == "drop-vacuous-sidetrack at root");
}

TEST_CASE("negation detour contracts to the bare premise") {
  auto a = mk_assumption("a", S("q |- p"));
  auto d = mk_rule(MQ, RuleId::NegLI, {a}, {.principal = F("~p")});
  d = mk_rule(MQ, RuleId::NegLE, {d}, {.principal = F("~p")});
  std::vector<std::string> trace;
  auto e = normalize(d, &trace);
  CHECK(e.get() == a.get());
  REQUIRE(trace.size() == 1);
  CHECK(trace[0] == "reduce-detour at root r=1 m=1 -> r=-1 m=0");
}

TEST_CASE("conjunction detour keeps only the selected premise") {
  auto d1 = mk_assumption("a1", S("|- p, r"));
  auto d2 = mk_assumption("a2", S("|- q, r"));
  auto d = mk_rule(MQ, RuleId::AndRI, {d1, d2}, {.principal = F("p /\\ q")});
  d = mk_rule(MQ, RuleId::AndRE, {d}, {.principal = F("p /\\ q"), .select = 2});
  auto e = normalize(d);
  CHECK(e.get() == d2.get());
}

TEST_CASE("universal detour substitutes the witness term") {
  auto y = mk_var("y");
  auto allp = F("forall x. P(x)");
  auto d = mk_gid(Sequent{{mk_atom("P", {y})}, {mk_atom("P", {y})}}, mk_atom("P", {y}));
  d = mk_rule(MQ, RuleId::AllLI, {d}, {.term = y, .principal = allp});
  d = mk_rule(MQ, RuleId::AllRI, {d}, {.eigen = "y", .principal = allp});
  d = mk_rule(MQ, RuleId::AllRE, {d}, {.term = mk_app("c", {}), .principal = allp});
  auto e = normalize(d);
  check(e, MQ);
  CHECK(is_normal(e));
  CHECK(ms_equal(e->sequent, S("forall x. P(x) |- P(c)")));
  CHECK(!has_rule(e, RuleId::AllRI));
  CHECK(!has_rule(e, RuleId::AllRE));
}

TEST_CASE("existential detour grafts the premise at the discharged leaf") {
  auto prem = mk_assumption("a", S("|- P(c)"));
  auto major = ex_intro(prem, mk_app("c", {}));
  auto minor = ex_minor("u", S("|- P(y)"), "y");
  auto d = mk_rule(MQ, RuleId::ExRE, {major, minor},
                   {.eigen = "y", .principal = F("exists x. P(x)")}, "u");
  check(d, MQ);
  auto e = normalize(d);
  auto rep = check(e, MQ);
  CHECK(is_normal(e));
  CHECK(ms_equal(e->sequent, S("|- exists x. P(x)")));
  CHECK(!has_rule(e, RuleId::ExRE));
  REQUIRE(rep.open_premises.size() == 1);
  CHECK(ms_equal(Sequent{{}, {F("P(c)")}}, rep.open_premises[0].sequent));
}

TEST_CASE("existential detour grafts the premise at every discharged leaf") {
  auto prem = mk_assumption("a", S("|- P(c), p, q"));
  auto major = ex_intro(prem, mk_app("c", {}));
  auto schema = S("|- P(y), p, q");
  auto leaf = [&] { return mk_discharged("u", schema); };
  auto minor = mk_rule(MQ, RuleId::AndRI, {leaf(), leaf()}, {.principal = F("p /\\ p")});
  minor = ex_intro(minor, mk_var("y"));
  auto d = mk_rule(MQ, RuleId::ExRE, {major, minor},
                   {.eigen = "y", .principal = F("exists x. P(x)")}, "u");
  check(d, MQ);
  auto e = normalize(d);
  auto rep = check(e, MQ);
  CHECK(is_normal(e));
  CHECK(ms_equal(e->sequent, d->sequent));
  CHECK(count_assumptions(e) == 2);
  for (auto& op : rep.open_premises) CHECK(ms_equal(op.sequent, S("|- P(c), p, q")));
}

TEST_CASE("a mismatched elimination commutes past the introduction") {
  auto d = mk_assumption("a", S("p /\\ q, r |-"));
  d = mk_rule(MQ, RuleId::NegRI, {d}, {.principal = F("~r")});
  d = mk_rule(MQ, RuleId::AndLE, {d}, {.principal = F("p /\\ q")});
  auto e = normalize(d);
  check(e, MQ);
  CHECK(is_normal(e));
  CHECK(ms_equal(e->sequent, S("p, q |- ~r")));
  CHECK(e->rule == RuleId::NegRI);
  CHECK(e->children[0]->rule == RuleId::AndLE);
}

TEST_CASE("a contraction between introduction and elimination duplicates the elimination") {
  auto d = mk_assumption("a", S("p /\\ q, p, q |-"));
  d = mk_rule(MQ, RuleId::AndLI, {d}, {.principal = F("p /\\ q")});
  d = mk_rule(MQ, RuleId::CL, {d}, {.principal = F("p /\\ q")});
  d = mk_rule(MQ, RuleId::AndLE, {d}, {.principal = F("p /\\ q")});
  std::vector<std::string> trace;
  auto e = normalize(d, &trace);
  check(e, MQ);
  CHECK(is_normal(e));
  CHECK(ms_equal(e->sequent, S("p, q |-")));
  CHECK(node_count(e) == 4);
  CHECK(trace.size() >= 2);
  CHECK(trace[0].substr(0, 20) == "permute-contraction ");
}

TEST_CASE("an elimination below an identity instance collapses into it") {
  auto d = mk_gid(S("p, exists x. P(x) |- p"), F("p"));
  d = mk_rule(MQ, RuleId::ExLE, {d},
              {.term = mk_app("c", {}), .principal = F("exists x. P(x)")});
  auto e = normalize(d);
  check(e, MQ);
  CHECK(is_normal(e));
  CHECK(node_count(e) == 1);
  CHECK(e->rule == RuleId::GID);
  CHECK(ms_equal(e->sequent, S("p, P(c) |- p")));
}

TEST_CASE("an elimination commutes past a sidetrack segment") {
  auto major = mk_assumption("M", S("p /\\ q |- exists x. P(x)"));
  auto minor = ex_minor("u", S("p /\\ q |- P(y)"), "y");
  auto d = mk_rule(MQ, RuleId::ExRE, {major, minor},
                   {.eigen = "y", .principal = F("exists x. P(x)")}, "u");
  d = mk_rule(MQ, RuleId::AndLE, {d}, {.principal = F("p /\\ q")});
  check(d, MQ);
  std::vector<std::string> trace;
  auto e = normalize(d, &trace);
  check(e, MQ);
  CHECK(is_normal(e));
  CHECK(ms_equal(e->sequent, S("p, q |- exists x. P(x)")));
  // The sidetrack ends the derivation; the eliminations moved into its minor.
  CHECK(e->rule == RuleId::ExRE);
  CHECK(e->children[0].get() == major.get());
  REQUIRE(trace.size() == 2);
  CHECK(trace[0].substr(0, 18) == "permute-sidetrack ");
  CHECK(trace[1].substr(0, 14) == "permute-intro ");

  SUBCASE("tracks and midsegments of the result") {
    auto ts = tracks(e);
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].nodes ==
          std::vector<NodePath>{{0}, {1, 0, 0}, {1, 0}, {1}, {}});
    CHECK(ts[0].segment_starts == std::vector<int>{0, 1, 2, 3});
    CHECK(ts[0].midsegment == 2);
  }
  SUBCASE("main branch of the result") {
    auto mb = main_branch(e);
    CHECK(mb == std::vector<NodePath>{{}, {0}});
  }
  SUBCASE("normalization is idempotent") {
    CHECK(normalize(e).get() == e.get());
  }
}

TEST_CASE("an elimination commutes past a sidetrack feeding another sidetrack") {
  auto exq = F("exists x. Q(x)");
  auto major = mk_assumption("M", S("|- exists x. P(x), exists x. Q(x)"));
  auto minor1 = ex_minor("u", S("|- P(y), exists x. Q(x)"), "y");
  auto st = mk_rule(MQ, RuleId::ExRE, {major, minor1},
                    {.eigen = "y", .principal = F("exists x. P(x)")}, "u");
  auto minor2 = mk_rule(MQ, RuleId::ExRI, {mk_discharged("v", S("|- exists x. P(x), Q(w)"))},
                        {.term = mk_var("w"), .principal = exq});
  auto d = mk_rule(MQ, RuleId::ExRE, {st, minor2}, {.eigen = "w", .principal = exq}, "v");
  check(d, MQ);
  auto e = normalize(d);
  auto rep = check(e, MQ);
  CHECK(is_normal(e));
  CHECK(ms_equal(e->sequent, d->sequent));
  REQUIRE(rep.open_premises.size() == 1);
  CHECK(rep.open_premises[0].label == "M");
}

TEST_CASE("unsupported shapes are reported, not mangled") {
  auto exp = F("exists x. P(x)");

  SUBCASE("two-premise introduction feeding a sidetrack major premise") {
    auto d1 = mk_assumption("a1", S("|- p, exists x. P(x)"));
    auto d2 = mk_assumption("a2", S("|- q, exists x. P(x)"));
    auto major = mk_rule(MQ, RuleId::AndRI, {d1, d2}, {.principal = F("p /\\ q")});
    auto minor = ex_minor("u", S("|- p /\\ q, P(y)"), "y");
    auto d = mk_rule(MQ, RuleId::ExRE, {major, minor}, {.eigen = "y", .principal = exp}, "u");
    check(d, MQ);
    CHECK_THROWS_WITH_AS(normalize(d), doctest::Contains("two-premise introduction"),
                         TransformError);
  }
  SUBCASE("contraction on the sidetrack principal") {
    auto d = mk_assumption("a", S("exists x. P(x) |- P(c), exists x. P(x)"));
    d = mk_rule(MQ, RuleId::ExRI, {d}, {.term = mk_app("c", {}), .principal = exp});
    d = mk_rule(MQ, RuleId::CR, {d}, {.principal = exp});
    auto minor = ex_minor("u", S("exists x. P(x) |- P(y)"), "y");
    d = mk_rule(MQ, RuleId::ExRE, {d, minor}, {.eigen = "y", .principal = exp}, "u");
    check(d, MQ);
    CHECK_THROWS_WITH_AS(normalize(d), doctest::Contains("contraction on the principal"),
                         TransformError);
  }
  SUBCASE("eigenvariable introduction feeding a sidetrack major premise") {
    auto major = mk_gid(S("exists x. P(x) |- Q(z), exists x. P(x)"), exp);
    major = mk_rule(MQ, RuleId::AllRI, {major},
                    {.eigen = "z", .principal = F("forall x. Q(x)")});
    auto minor = ex_minor("u", S("exists x. P(x) |- forall x. Q(x), P(y)"), "y");
    auto d = mk_rule(MQ, RuleId::ExRE, {major, minor}, {.eigen = "y", .principal = exp}, "u");
    check(d, MQ);
    CHECK_THROWS_WITH_AS(normalize(d), doctest::Contains("eigenvariable introduction"),
                         TransformError);
  }
}

TEST_CASE("tracks and main_branch require the stated preconditions") {
  auto a = mk_assumption("a", S("q |- p"));
  auto d = mk_rule(MQ, RuleId::NegLI, {a}, {.principal = F("~p")});
  auto bad = mk_rule(MQ, RuleId::NegLE, {d}, {.principal = F("~p")});
  CHECK_THROWS_AS(tracks(bad), TransformError);
  CHECK_THROWS_AS(main_branch(bad), TransformError);
  // Normal but ending in an introduction.
  CHECK_THROWS_AS(main_branch(d), TransformError);
  CHECK(tracks(d).size() == 1);
}

TEST_CASE("main branch of an elimination chain ends at the open assumption") {
  auto d = mk_assumption("a", S("p /\\ q |- ~r"));
  d = mk_rule(MQ, RuleId::AndLE, {d}, {.principal = F("p /\\ q")});
  d = mk_rule(MQ, RuleId::NegRE, {d}, {.principal = F("~r")});
  auto mb = main_branch(d);
  CHECK(mb == std::vector<NodePath>{{}, {0}, {0, 0}});
  auto ts = tracks(d);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].nodes == std::vector<NodePath>{{0, 0}, {0}, {}});
  CHECK(ts[0].segment_starts == std::vector<int>{0, 1, 2});
  CHECK(ts[0].midsegment == 2);
}

TEST_CASE("normalization is deterministic") {
  auto build = [] {
    auto major = mk_assumption("M", S("p /\\ q |- exists x. P(x)"));
    auto minor = ex_minor("u", S("p /\\ q |- P(y)"), "y");
    auto d = mk_rule(MQ, RuleId::ExRE, {major, minor},
                     {.eigen = "y", .principal = F("exists x. P(x)")}, "u");
    return mk_rule(MQ, RuleId::AndLE, {d}, {.principal = F("p /\\ q")});
  };
  CHECK(print_derivation(normalize(build())) == print_derivation(normalize(build())));
}
