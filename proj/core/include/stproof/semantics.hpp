// Finite 3-valued strong-Kleene models, ST-satisfaction, bounded
// countermodel search, Henkin expansion, and the propositional decision
// procedures.

#pragma once

#include "stproof/syntax.hpp"

namespace stp {

// 0, 1/2, 1 in order.
enum class TruthValue { F = 0, N = 1, T = 2 };

std::string tv_name(TruthValue v);         // "0", "1/2", "1"
TruthValue tv_from_name(const std::string& s);

struct SemanticsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceeded : SemanticsError {
  using SemanticsError::SemanticsError;
};
struct UnsupportedOpenWitness : SemanticsError {
  using SemanticsError::SemanticsError;
};

// Domain elements are indices into `domain`, which holds their printable
// ids. Witness constants (wA/wE/eps terms) are rigid: they are keyed by
// their printed text and interpreted directly by witness_tables.
struct FiniteSTModel {
  std::vector<std::string> domain;
  std::map<std::string, std::map<std::vector<int>, int>> fn_tables;
  std::map<std::string, std::map<std::vector<int>, TruthValue>> rel_tables;
  std::map<std::string, int> witness_tables;
};

using Assignment = std::map<std::string, int>;

int eval_term(const FiniteSTModel& m, const Assignment& a, const TermPtr& t);
TruthValue eval(const FiniteSTModel& m, const Assignment& a, const FormulaPtr& f);

// Some antecedent formula is at most 1/2, or some succedent formula is at
// least 1/2.
bool satisfies(const FiniteSTModel& m, const Assignment& a, const Sequent& s);
bool satisfies(const FiniteSTModel& m, const Sequent& s);

struct Verdict {
  bool countermodel = false;  // otherwise: none up to the bound
  FiniteSTModel model;
  Assignment assignment;
  long long models_tried = 0;
};

// Searches for a model plus assignment satisfying every member of X but
// not s. Enumerates domains of size 1..maxDomain; within a size, function
// tables (witness constants included, as constants) lexicographically,
// then relation tables lexicographically, then assignments to the free
// variables. Relation values are restricted to {0, 1} when twoValued.
// Throws BudgetExceeded past `budget` candidate models.
Verdict consequence_bounded(const std::vector<Sequent>& X, const Sequent& s,
                            int maxDomain, bool twoValued = false,
                            long long budget = 10000000);

// Extends witness_tables so that each listed constant satisfies its Henkin
// equation: universal witnesses take a value minimizing their body,
// existential witnesses and epsilon terms one maximizing it, ties broken
// to the least element index. Constants are processed innermost-first;
// bodies must be closed apart from the bound variable.
FiniteSTModel henkin_expand(FiniteSTModel m, std::vector<TermPtr> constants);

// Collects every witness constant occurring in evaluated positions,
// innermost included, deduplicated by printed text.
std::vector<TermPtr> witness_constants(const Sequent& s);

// Exhaustive over the 3-valuations of the occurring 0-ary atoms: do all
// members of X hold under satisfies whenever s fails? Inputs must be
// propositional (0-ary atoms only).
bool decide_st_propositional(const std::vector<Sequent>& X, const Sequent& s);

// Every valuation designating ({1/2, 1}) all premises designates phi.
bool lp_consequence(const std::vector<FormulaPtr>& premises, const FormulaPtr& phi);

std::string print_model(const FiniteSTModel& m);
FiniteSTModel parse_model(const std::string& text, Signature& sig, bool learn = true);

}  // namespace stp
