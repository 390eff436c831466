// Constructive derivation transformations: weakening, substitution and
// joining of derivations, GID expansion, the tau and alpha interderivability
// pairs, and the translations between the witness calculi and the epsilon
// calculus.

#pragma once

#include "stproof/calculus.hpp"

namespace stp {

struct TransformError : SyntaxError {
  using SyntaxError::SyntaxError;
};

// Both directions check in the stated calculus; forward's conclusion is
// backward's sole open premise and vice versa.
struct DerivationPair {
  DerivPtr forward;
  DerivPtr backward;
};

// Bundling of several premise sequents into one: forward derives the bundle
// from the premises, backward[i] recovers premise i from the bundle.
struct BundlePair {
  DerivPtr forward;
  std::vector<DerivPtr> backward;
};

// Every variable name occurring anywhere in the tree: sequents, rule
// parameters, and eigenvariables.
std::set<std::string> derivation_vars(const DerivPtr& d);

// Replaces every GID node whose principal is not atomic by a derivation of
// the same sequent built from atomic GID instances and introduction rules
// only. Conclusion and open premises are unchanged. MQST only.
DerivPtr expand_atomic_gid(const DerivPtr& d);

// Renames every free occurrence of x to z throughout the tree, including
// rule parameters and eigenvariables named x. Requires z to occur nowhere
// in d (throws TransformError otherwise).
DerivPtr rename_free(const DerivPtr& d, const std::string& x, const std::string& z,
                     CalculusId cal = CalculusId::MQST);

// Weakening for MQST derivations: joins extraL/extraR onto every sequent of
// the tree. GID leaves absorb the extras as enlarged instances; eigenvariables
// clashing with the extras are renamed first. Assumption leaves are joined as
// well, so a derivation of S from X becomes one of S joined with the extras
// from the correspondingly joined premises; premises of a closed derivation
// are of course untouched.
DerivPtr weaken_derivation(const DerivPtr& d, const std::vector<FormulaPtr>& extraL,
                           const std::vector<FormulaPtr>& extraR);

// Substitutes t for free x throughout an MQST derivation. Eigenvariables
// clashing with x or with the variables of t are first renamed to fresh
// ones; the result derives S[x->t] from X[x->t].
DerivPtr substitute_in_derivation(const DerivPtr& d, const std::string& x,
                                  const TermPtr& t);

// From d1 deriving S from X and the premise s1, and d2 deriving S from X and
// the premise s2, builds a derivation of S from the single combined premise
// s1 joined with s2 (and X). STH: extras ride along as set unions, assumption
// leaves are bridged back to X with WL/WR, so the open premises are exactly
// X plus the combined premise. MQST: has no weakening primitive, so the
// members of X reappear joined with s2 respectively S; for closed-but-for-
// s1/s2 inputs the contract is exact. Conclusion closes with contractions
// (MQST) or set collapse (STH).
DerivPtr join_derivations(const DerivPtr& d1, const Sequent& s1, const DerivPtr& d2,
                          const Sequent& s2, CalculusId cal);

// Interderivability of s with its formula translation: a pair between s and
// the sequent with empty antecedent and tau(s, sig) as only succedent.
// Throws TransformError for the doubly empty sequent, from which no rule
// can derive anything.
DerivationPair tau_interderive(const Sequent& s, CalculusId cal, const Signature& sig);

// Bundles sequents of the form |- phi_i into |- phi_1 /\ ... /\ phi_n
// (left associated) with derivations both ways. Requires at least one input,
// each with empty antecedent and a single succedent formula.
BundlePair bundle_interderive(const std::vector<Sequent>& xs, CalculusId cal);

// Interderivability in STH of two sequents equal up to renaming bound
// variables, built from the witness exchange blocks (quantifier exposure,
// witness replacement, quantifier reintroduction) applied recursively.
DerivationPair alpha_interderive_sth(const Sequent& s, const Sequent& sp);

// Expands one STH elimination rule application into its STHC macro: a cut
// against an introduction-only proof. The premise appears as the open
// assumption labeled "premise".
DerivPtr derived_elim_sthc(RuleId rule, const Sequent& premise, const RuleParams& params);

// Re-expresses an STH derivation in STHC by macro-expanding every
// elimination node with derived_elim_sthc.
DerivPtr embed_sth_in_sthc(const DerivPtr& d);

// Translates an STHC derivation into the epsilon calculus: sequents map
// under to_epsilon, witness introductions become the epsilon quantifier
// blocks, witness exchange nodes vanish (both sides share one image).
DerivPtr derivation_to_epsilon(const DerivPtr& d);

// Translates an epsilon calculus derivation into STHC: epsilon quantifier
// rules become witness introduction blocks, with a witness exchange step for
// the universal-right case.
DerivPtr derivation_to_sthc(const DerivPtr& d);

// Derivations both ways between phi and its image under the round trip
// through the epsilon dialect, built by exchanging one universal witness at
// a time. Throws TransformError when a universal witness sits in a position
// where its free variables are captured, as no exchange rule reaches it.
DerivationPair ew_roundtrip(const FormulaPtr& phi);

}  // namespace stp
