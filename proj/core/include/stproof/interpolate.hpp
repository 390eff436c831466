// Split interpolation for normal MQST derivations: given a two-coloring of
// the open premises, computes a finite set of sequents whose members are
// derivable from the first color class and which, together with the second
// class, derive the conclusion, with all relation symbols and free variables
// shared between the two sides. Both directions come with checkable
// derivations.

#pragma once

#include "stproof/normalize.hpp"

namespace stp {

enum class SplitSide { X1, X2 };

// Assignment of every open-premise label to a side.
using Split = std::map<std::string, SplitSide>;

struct InterpolationResult {
  // The interpolating set (duplicate-free, order deterministic).
  std::vector<Sequent> interpolant;
  // d_left[i] derives interpolant[i]; its open premises lie in X1.
  std::vector<DerivPtr> d_left;
  // Derives the conclusion; its open premises lie in interpolant plus X2.
  DerivPtr d_right;
  // Vocabulary shared between X1 and X2 plus the conclusion.
  std::set<std::string> shared_relations;
  std::set<std::string> shared_free_vars;
};

// Relation symbols occurring anywhere in the sequent, including inside
// witness and epsilon term bodies.
std::set<std::string> relation_symbols(const Sequent& s);

// Replaces s by its single-formula form (empty antecedent, tau(s, sig) as
// the only succedent) and binds x universally or existentially over it.
// Returns s unchanged when x is not free in s.
Sequent quantify_sequent(const Sequent& s, const std::string& x, bool universal,
                         const Signature& sig);

// Computes an interpolant for the coloring. The derivation must check in
// MQST, be normal, and every open premise label must be assigned a side;
// throws TransformError otherwise. The result is verified internally before
// being returned. Deterministic.
InterpolationResult interpolate(const DerivPtr& d, const Split& split,
                                const Signature& sig);

// Re-checks both certificate directions against the stated endpoints and the
// vocabulary inclusions (relations and free variables of the interpolant
// must be shared; function symbols are not constrained). Appends one line
// per failed condition to *failures when given.
bool verify_interpolation(const InterpolationResult& r, const std::vector<Sequent>& x1,
                          const std::vector<Sequent>& x2, const Sequent& s,
                          std::vector<std::string>* failures = nullptr);

}  // namespace stp
