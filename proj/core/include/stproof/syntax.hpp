// Terms, formulas, sequents: construction, printing, parsing, substitution.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace stp {

struct Term;
struct Formula;
using TermPtr = std::shared_ptr<const Term>;
using FormulaPtr = std::shared_ptr<const Formula>;

// Dialect stratification. Base syntax has neither witness constants nor
// epsilon terms; Henkin adds wA/wE; Epsilon adds eps. Mixing the two
// extensions inside one tree is rejected at construction time.
enum class Dialect { Base, Henkin, Epsilon };

struct SyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CaptureError : SyntaxError {
  using SyntaxError::SyntaxError;
};
struct DialectError : SyntaxError {
  using SyntaxError::SyntaxError;
};
struct ParseError : SyntaxError {
  using SyntaxError::SyntaxError;
};

struct Term {
  enum class Tag { Var, App, UWitness, EWitness, Eps };
  Tag tag;
  std::string name;           // Var: variable name; App: function symbol
  std::vector<TermPtr> args;  // App
  std::string bound;          // UWitness/EWitness/Eps: variable bound in body
  FormulaPtr body;            // UWitness/EWitness/Eps
  Dialect dia = Dialect::Base;
};

struct Formula {
  enum class Tag { Atom, Neg, Conj, Disj, Forall, Exists };
  Tag tag;
  std::string name;           // Atom: relation symbol; Forall/Exists: variable
  std::vector<TermPtr> args;  // Atom
  FormulaPtr lhs;             // Neg/Conj/Disj; Forall/Exists body
  FormulaPtr rhs;             // Conj/Disj
  Dialect dia = Dialect::Base;
};

TermPtr mk_var(std::string name);
TermPtr mk_app(std::string fn, std::vector<TermPtr> args);
TermPtr mk_uwitness(std::string x, FormulaPtr body);
TermPtr mk_ewitness(std::string x, FormulaPtr body);
TermPtr mk_eps(std::string x, FormulaPtr body);

FormulaPtr mk_atom(std::string rel, std::vector<TermPtr> args = {});
FormulaPtr mk_neg(FormulaPtr f);
FormulaPtr mk_conj(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_disj(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_forall(std::string x, FormulaPtr f);
FormulaPtr mk_exists(std::string x, FormulaPtr f);
// Sugar only; builds ~a \/ b.
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);

bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

std::string print(const TermPtr& t);
std::string print(const FormulaPtr& f);

std::set<std::string> free_vars(const TermPtr& t);
std::set<std::string> free_vars(const FormulaPtr& f);
// Every variable name occurring anywhere, free or bound.
std::set<std::string> all_vars(const TermPtr& t);
std::set<std::string> all_vars(const FormulaPtr& f);

// Capture-avoiding substitution that never renames: raises CaptureError
// when a free variable of t would land under a binder for it.
TermPtr substitute(const TermPtr& in, const std::string& x, const TermPtr& t);
FormulaPtr substitute(const FormulaPtr& in, const std::string& x, const TermPtr& t);

// Replace every free occurrence of the closed-position term `from` by `to`.
// An occurrence counts as free when no free variable of `from` is bound at
// that position; raises CaptureError if a free variable of `to` would be
// captured at a replaced position.
TermPtr replace_term(const TermPtr& in, const TermPtr& from, const TermPtr& to);
FormulaPtr replace_term(const FormulaPtr& in, const TermPtr& from, const TermPtr& to);

// Least-numeric-suffix fresh name: returns base itself when unused,
// otherwise base1, base2, ...
std::string fresh_var(const std::string& base, const std::set<std::string>& avoid);

// Rename every bound variable to a name fresh for avoid ∪ free(f) and for
// all other binders introduced along the way. Deterministic.
FormulaPtr alpha_fresh(const FormulaPtr& f, std::set<std::string> avoid);

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b);

struct Signature {
  std::map<std::string, int> relations;
  std::map<std::string, int> functions;
  // Distinguished atom for tau of the empty sequent; defaulted by phi0().
  FormulaPtr phi0_config;

  void validate() const;  // disjoint name spaces, at least one relation
  FormulaPtr phi0() const;
  bool is_function(const std::string& name) const {
    return functions.count(name) != 0;
  }
};

// Sequent over formulas. The same carrier serves both flavors: set-flavored
// calculi keep each side duplicate-free in insertion order, the multiset
// flavor allows duplicates and canonicalizes to sorted-by-printed-text order.
struct Sequent {
  std::vector<FormulaPtr> ante;
  std::vector<FormulaPtr> succ;
};

std::string print(const Sequent& s);
std::set<std::string> free_vars(const Sequent& s);
std::set<std::string> all_vars(const Sequent& s);
Sequent substitute(const Sequent& s, const std::string& x, const TermPtr& t);

// Set-flavor helpers.
bool set_member(const std::vector<FormulaPtr>& side, const FormulaPtr& f);
std::vector<FormulaPtr> set_add(std::vector<FormulaPtr> side, const FormulaPtr& f);
std::vector<FormulaPtr> set_remove(std::vector<FormulaPtr> side, const FormulaPtr& f);
bool set_equal(const Sequent& a, const Sequent& b);
Sequent set_canon(const Sequent& s);  // deduplicate, keep first occurrences

// Multiset-flavor helpers.
int ms_count(const std::vector<FormulaPtr>& side, const FormulaPtr& f);
std::vector<FormulaPtr> ms_add(std::vector<FormulaPtr> side, const FormulaPtr& f, int n = 1);
std::vector<FormulaPtr> ms_remove(std::vector<FormulaPtr> side, const FormulaPtr& f, int n = 1);
bool ms_equal(const Sequent& a, const Sequent& b);
Sequent ms_canon(const Sequent& s);  // sort by printed text

// Componentwise union (set flavor) or multiset sum.
Sequent sequent_join(const Sequent& a, const Sequent& b, bool multiset);
// Forget multiplicities.
Sequent support(const Sequent& s);

// tau translation: left-associated ~g1 \/ ... \/ ~gn \/ d1 \/ ... \/ dm,
// enumerating each side in sorted printed-text order; degenerate cases per
// the definition, the doubly empty case yielding phi0 /\ ~phi0.
FormulaPtr tau(const Sequent& s, const Signature& sig);

// Dialect translations.
TermPtr to_epsilon(const TermPtr& t);
FormulaPtr to_epsilon(const FormulaPtr& f);
Sequent to_epsilon(const Sequent& s);
TermPtr to_henkin(const TermPtr& t);
FormulaPtr to_henkin(const FormulaPtr& f);
Sequent to_henkin(const Sequent& s);

// Parsing. When learn is true unknown symbols are added to sig with the
// arity they are used at (formula position: relation; applied term
// position: function; bare lowercase term position: variable).
TermPtr parse_term(const std::string& text, Signature& sig, bool learn = true);
FormulaPtr parse_formula(const std::string& text, Signature& sig, bool learn = true);
Sequent parse_sequent(const std::string& text, Signature& sig, bool learn = true);

}  // namespace stp
