// Sequent calculi: rule catalog, derivation trees, forward rule application,
// and the derivation checker.

#pragma once

#include <string>
#include <vector>

#include "stproof/syntax.hpp"

namespace stp {

enum class CalculusId { STP, STQ, STH, STHC, E, MQST };

std::string calculus_name(CalculusId c);
CalculusId calculus_from_name(const std::string& s);
// MQST sequents are multisets; every other calculus uses duplicate-free sets.
bool is_multiset(CalculusId c);

enum class RuleId {
  // Axioms and structural rules.
  ID, GID, WL, WR, CL, CR,
  // Propositional rules; I = downward (introduction), E = upward (elimination).
  AndLI, AndLE, AndRI, AndRE,
  OrLI, OrLE, OrRI, OrRE,
  NegLI, NegLE, NegRI, NegRE,
  // Plain quantifier rules (eigenvariable versions of AllR/ExL).
  AllL, AllR, ExL, ExR,
  // Witness rules.
  UWI, EWI, EWE, UWE,
  AllLWI, AllLWE, AllRWI, AllRWE, ExLWI, ExLWE, ExRWI, ExRWE,
  // Cut and witness exchange.
  Cut, WExchLI, WExchLE, WExchRI, WExchRE,
  // Epsilon calculus quantifier rules.
  ExLEps, ExREps, AllLEps, AllREps,
  // Multiset quantifier rules; ExRE/AllLE are the sidetrack rules.
  ExLE, ExRI, AllLI, AllRE, ExLI, AllRI, ExRE, AllLE,
};

std::string rule_name(RuleId r);
RuleId rule_from_name(const std::string& s);
bool rule_in(CalculusId c, RuleId r);
// Upward readings plus the plain and sidetrack multiset eliminations.
bool is_elimination(RuleId r);
bool is_introduction(RuleId r);
bool is_sidetrack(RuleId r);
// Number of premises the rule consumes.
int rule_arity(RuleId r);

struct RuleParams {
  TermPtr term;          // substituted term t
  std::string eigen;     // eigenvariable y
  FormulaPtr principal;  // principal formula
  char side = 0;         // 'L' or 'R' where the rule leaves it ambiguous
  int select = 0;        // 1|2: which inverse of a two-premise rule
};

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

enum class NodeKind { Rule, Assumption, Discharged };

struct Derivation {
  NodeKind kind = NodeKind::Rule;
  RuleId rule = RuleId::ID;
  Sequent sequent;
  RuleParams params;
  std::vector<DerivPtr> children;  // sidetrack rules: major first, minor second
  std::string label;               // Assumption/Discharged
  std::string binds;               // sidetrack rules: discharged label
};

DerivPtr mk_assumption(std::string label, Sequent s);
DerivPtr mk_discharged(std::string label, Sequent s);
// GID carries a free-form sequent; the principal must appear on both sides.
DerivPtr mk_gid(Sequent s, FormulaPtr principal);
// Builds a rule node whose sequent is computed with apply_rule.
DerivPtr mk_rule(CalculusId cal, RuleId r, std::vector<DerivPtr> children,
                 RuleParams params, std::string binds = "");

struct RuleError : SyntaxError {
  using SyntaxError::SyntaxError;
};

struct RuleViolation : std::runtime_error {
  std::vector<int> path;  // child indices from the root
  RuleViolation(std::vector<int> p, const std::string& reason);
};

// Forward reading: the unique conclusion of the rule on the given premises.
// GID is excluded (its conclusion is not determined by premises).
Sequent apply_rule(CalculusId cal, RuleId r, const std::vector<Sequent>& premises,
                   const RuleParams& params);

struct OpenPremise {
  std::string label;
  Sequent sequent;
};

struct CheckReport {
  Sequent conclusion;
  std::vector<OpenPremise> open_premises;
  CalculusId calculus = CalculusId::STP;
  int node_count = 0;
  int max_depth = 0;
};

// Validates every node against the calculus, including eigenvariable side
// conditions and discharge bookkeeping. Throws RuleViolation on failure.
CheckReport check(const DerivPtr& d, CalculusId cal);

int node_count(const DerivPtr& d);

}  // namespace stp
