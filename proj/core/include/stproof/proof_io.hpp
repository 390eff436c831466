// Text format for derivations. One node per line,
//
//   Rule; key=value; ...; sequent=G |- D
//     Child
//     Child
//
// with children indented two further spaces, fields in the fixed order
// label, term, eigen, principal, select, binds, sequent, and blank or
// '#'-comment lines ignored on input. Printing then parsing is bit-exact
// on parse results and on anything built through mk_rule.

#pragma once

#include "stproof/calculus.hpp"

namespace stp {

// Side marker used in principal= fields: 'L', 'R', or 'B' for rules whose
// principal is not tied to one side (ID, GID, Cut).
char principal_side(RuleId r);

std::string print_derivation(const DerivPtr& d);

DerivPtr parse_derivation(const std::string& text, Signature& sig,
                          bool learn = true);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace stp
