#include "stproof/calculus.hpp"

#include <algorithm>
#include <map>

namespace stp {

std::string calculus_name(CalculusId c) {
  switch (c) {
    case CalculusId::STP: return "stp";
    case CalculusId::STQ: return "stq";
    case CalculusId::STH: return "sth";
    case CalculusId::STHC: return "sthc";
    case CalculusId::E: return "e";
    case CalculusId::MQST: return "mqst";
  }
  return "?";
}

CalculusId calculus_from_name(const std::string& s) {
  if (s == "stp") return CalculusId::STP;
  if (s == "stq") return CalculusId::STQ;
  if (s == "sth") return CalculusId::STH;
  if (s == "sthc") return CalculusId::STHC;
  if (s == "e") return CalculusId::E;
  if (s == "mqst") return CalculusId::MQST;
  throw SyntaxError("unknown calculus: " + s);
}

bool is_multiset(CalculusId c) { return c == CalculusId::MQST; }

namespace {

const std::pair<RuleId, const char*> kRuleNames[] = {
    {RuleId::ID, "ID"}, {RuleId::GID, "GID"}, {RuleId::WL, "WL"},
    {RuleId::WR, "WR"}, {RuleId::CL, "CL"}, {RuleId::CR, "CR"},
    {RuleId::AndLI, "AndLI"}, {RuleId::AndLE, "AndLE"},
    {RuleId::AndRI, "AndRI"}, {RuleId::AndRE, "AndRE"},
    {RuleId::OrLI, "OrLI"}, {RuleId::OrLE, "OrLE"},
    {RuleId::OrRI, "OrRI"}, {RuleId::OrRE, "OrRE"},
    {RuleId::NegLI, "NegLI"}, {RuleId::NegLE, "NegLE"},
    {RuleId::NegRI, "NegRI"}, {RuleId::NegRE, "NegRE"},
    {RuleId::AllL, "AllL"}, {RuleId::AllR, "AllR"},
    {RuleId::ExL, "ExL"}, {RuleId::ExR, "ExR"},
    {RuleId::UWI, "UWI"}, {RuleId::EWI, "EWI"},
    {RuleId::EWE, "EWE"}, {RuleId::UWE, "UWE"},
    {RuleId::AllLWI, "AllLWI"}, {RuleId::AllLWE, "AllLWE"},
    {RuleId::AllRWI, "AllRWI"}, {RuleId::AllRWE, "AllRWE"},
    {RuleId::ExLWI, "ExLWI"}, {RuleId::ExLWE, "ExLWE"},
    {RuleId::ExRWI, "ExRWI"}, {RuleId::ExRWE, "ExRWE"},
    {RuleId::Cut, "Cut"},
    {RuleId::WExchLI, "WExchLI"}, {RuleId::WExchLE, "WExchLE"},
    {RuleId::WExchRI, "WExchRI"}, {RuleId::WExchRE, "WExchRE"},
    {RuleId::ExLEps, "ExLEps"}, {RuleId::ExREps, "ExREps"},
    {RuleId::AllLEps, "AllLEps"}, {RuleId::AllREps, "AllREps"},
    {RuleId::ExLE, "ExLE"}, {RuleId::ExRI, "ExRI"},
    {RuleId::AllLI, "AllLI"}, {RuleId::AllRE, "AllRE"},
    {RuleId::ExLI, "ExLI"}, {RuleId::AllRI, "AllRI"},
    {RuleId::ExRE, "ExRE"}, {RuleId::AllLE, "AllLE"},
};

}  // namespace

std::string rule_name(RuleId r) {
  for (auto& [id, name] : kRuleNames)
    if (id == r) return name;
  return "?";
}

RuleId rule_from_name(const std::string& s) {
  for (auto& [id, name] : kRuleNames)
    if (s == name) return id;
  throw SyntaxError("unknown rule: " + s);
}

bool is_sidetrack(RuleId r) { return r == RuleId::ExRE || r == RuleId::AllLE; }

bool is_elimination(RuleId r) {
  switch (r) {
    case RuleId::AndLE: case RuleId::AndRE: case RuleId::OrLE:
    case RuleId::OrRE: case RuleId::NegLE: case RuleId::NegRE:
    case RuleId::EWE: case RuleId::UWE:
    case RuleId::AllLWE: case RuleId::AllRWE:
    case RuleId::ExLWE: case RuleId::ExRWE:
    case RuleId::ExLE: case RuleId::AllRE:
    case RuleId::ExRE: case RuleId::AllLE:
      return true;
    default:
      return false;
  }
}

bool is_introduction(RuleId r) {
  switch (r) {
    case RuleId::AndLI: case RuleId::AndRI: case RuleId::OrLI:
    case RuleId::OrRI: case RuleId::NegLI: case RuleId::NegRI:
    case RuleId::AllL: case RuleId::AllR: case RuleId::ExL: case RuleId::ExR:
    case RuleId::UWI: case RuleId::EWI:
    case RuleId::AllLWI: case RuleId::AllRWI:
    case RuleId::ExLWI: case RuleId::ExRWI:
    case RuleId::ExLEps: case RuleId::ExREps:
    case RuleId::AllLEps: case RuleId::AllREps:
    case RuleId::ExLE: case RuleId::ExRI: case RuleId::AllLI:
    case RuleId::ExLI: case RuleId::AllRI:
      return r != RuleId::ExLE;
    default:
      return false;
  }
}

int rule_arity(RuleId r) {
  switch (r) {
    case RuleId::ID: case RuleId::GID:
      return 0;
    case RuleId::AndRI: case RuleId::OrLI: case RuleId::Cut:
    case RuleId::ExRE: case RuleId::AllLE:
      return 2;
    default:
      return 1;
  }
}

bool rule_in(CalculusId c, RuleId r) {
  auto prop_intro = [](RuleId r) {
    switch (r) {
      case RuleId::AndLI: case RuleId::AndRI: case RuleId::OrLI:
      case RuleId::OrRI: case RuleId::NegLI: case RuleId::NegRI:
        return true;
      default:
        return false;
    }
  };
  auto prop_elim = [](RuleId r) {
    switch (r) {
      case RuleId::AndLE: case RuleId::AndRE: case RuleId::OrLE:
      case RuleId::OrRE: case RuleId::NegLE: case RuleId::NegRE:
        return true;
      default:
        return false;
    }
  };
  auto structural_set = [](RuleId r) {
    return r == RuleId::ID || r == RuleId::WL || r == RuleId::WR;
  };
  switch (c) {
    case CalculusId::STP:
      return structural_set(r) || prop_intro(r) || prop_elim(r);
    case CalculusId::STQ:
      // Bottom-up directions deleted: introductions only.
      return structural_set(r) || prop_intro(r) || r == RuleId::AllL ||
             r == RuleId::AllR || r == RuleId::ExL || r == RuleId::ExR;
    case CalculusId::STH:
      switch (r) {
        case RuleId::UWI: case RuleId::EWI: case RuleId::EWE: case RuleId::UWE:
        case RuleId::AllLWI: case RuleId::AllLWE:
        case RuleId::AllRWI: case RuleId::AllRWE:
        case RuleId::ExLWI: case RuleId::ExLWE:
        case RuleId::ExRWI: case RuleId::ExRWE:
          return true;
        default:
          return structural_set(r) || prop_intro(r) || prop_elim(r);
      }
    case CalculusId::STHC:
      // All elimination rules removed; cut and witness exchange added.
      switch (r) {
        case RuleId::UWI: case RuleId::EWI:
        case RuleId::AllLWI: case RuleId::AllRWI:
        case RuleId::ExLWI: case RuleId::ExRWI:
        case RuleId::Cut:
        case RuleId::WExchLI: case RuleId::WExchLE:
        case RuleId::WExchRI: case RuleId::WExchRE:
          return true;
        default:
          return structural_set(r) || prop_intro(r);
      }
    case CalculusId::E:
      switch (r) {
        case RuleId::Cut:
        case RuleId::ExLEps: case RuleId::ExREps:
        case RuleId::AllLEps: case RuleId::AllREps:
          return true;
        default:
          return structural_set(r) || prop_intro(r);
      }
    case CalculusId::MQST:
      switch (r) {
        case RuleId::GID: case RuleId::CL: case RuleId::CR:
        case RuleId::ExLE: case RuleId::ExRI:
        case RuleId::AllLI: case RuleId::AllRE:
        case RuleId::ExLI: case RuleId::AllRI:
        case RuleId::ExRE: case RuleId::AllLE:
          return true;
        default:
          return prop_intro(r) || prop_elim(r);
      }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Forward rule application.

namespace {

using Side = std::vector<FormulaPtr>;

Side rm(Side s, const FormulaPtr& f, bool ms, const char* what) {
  if (ms) {
    if (ms_count(s, f) < 1)
      throw RuleError(std::string(what) + " " + print(f) + " absent from premise");
    return ms_remove(std::move(s), f, 1);
  }
  if (!set_member(s, f))
    throw RuleError(std::string(what) + " " + print(f) + " absent from premise");
  return set_remove(std::move(s), f);
}

// Removal of the second of two side formulas. In the set flavor both
// collapse into one occurrence when syntactically equal, so membership is
// checked against the original side rather than the already-reduced one.
Side rm2(Side s, const FormulaPtr& f, bool ms, const char* what,
         const Side& original) {
  if (!ms && !set_member(s, f)) {
    if (!set_member(original, f))
      throw RuleError(std::string(what) + " " + print(f) + " absent from premise");
    return s;
  }
  return rm(std::move(s), f, ms, what);
}

Side add(Side s, const FormulaPtr& f, bool ms) {
  return ms ? ms_add(std::move(s), f) : set_add(std::move(s), f);
}

bool side_eq(const Side& a, const Side& b, bool ms) {
  Sequent sa{a, {}}, sb{b, {}};
  return ms ? ms_equal(sa, sb) : set_equal(sa, sb);
}

FormulaPtr need_principal(const RuleParams& p, Formula::Tag tag, const char* rule) {
  if (!p.principal)
    throw RuleError(std::string(rule) + " needs a principal formula");
  if (p.principal->tag != tag)
    throw RuleError(std::string(rule) + " principal has the wrong shape: " +
                    print(p.principal));
  return p.principal;
}

TermPtr need_term(const RuleParams& p, const char* rule) {
  if (!p.term) throw RuleError(std::string(rule) + " needs term=");
  return p.term;
}

std::string need_eigen(const RuleParams& p, const char* rule) {
  if (p.eigen.empty()) throw RuleError(std::string(rule) + " needs eigen=");
  return p.eigen;
}

int need_select(const RuleParams& p, const char* rule) {
  if (p.select != 1 && p.select != 2)
    throw RuleError(std::string(rule) + " needs select=1 or select=2");
  return p.select;
}

// The instance phi[x -> t] of a quantified principal.
FormulaPtr instance(const FormulaPtr& quant, const TermPtr& t) {
  return substitute(quant->lhs, quant->name, t);
}

TermPtr wa_of(const FormulaPtr& quant) {
  return mk_uwitness(quant->name, quant->lhs);
}
TermPtr we_of(const FormulaPtr& quant) {
  return mk_ewitness(quant->name, quant->lhs);
}
TermPtr eps_of_exists(const FormulaPtr& quant) {
  return mk_eps(quant->name, quant->lhs);
}
TermPtr eps_of_forall(const FormulaPtr& quant) {
  return mk_eps(quant->name, mk_neg(quant->lhs));
}

}  // namespace

Sequent apply_rule(CalculusId cal, RuleId r, const std::vector<Sequent>& ps,
                   const RuleParams& params) {
  bool ms = is_multiset(cal);
  if (static_cast<int>(ps.size()) != rule_arity(r))
    throw RuleError(rule_name(r) + " expects " + std::to_string(rule_arity(r)) +
                    " premises, got " + std::to_string(ps.size()));
  switch (r) {
    case RuleId::ID: {
      if (!params.principal) throw RuleError("ID needs a principal formula");
      return Sequent{{params.principal}, {params.principal}};
    }
    case RuleId::GID:
      throw RuleError("GID conclusion is not determined by premises");
    case RuleId::WL: {
      if (!params.principal) throw RuleError("WL needs a principal formula");
      return Sequent{add(ps[0].ante, params.principal, ms), ps[0].succ};
    }
    case RuleId::WR: {
      if (!params.principal) throw RuleError("WR needs a principal formula");
      return Sequent{ps[0].ante, add(ps[0].succ, params.principal, ms)};
    }
    case RuleId::CL: {
      if (!params.principal) throw RuleError("CL needs a principal formula");
      if (ms_count(ps[0].ante, params.principal) < 2)
        throw RuleError("CL needs two occurrences of " + print(params.principal));
      return Sequent{ms_remove(ps[0].ante, params.principal, 1), ps[0].succ};
    }
    case RuleId::CR: {
      if (!params.principal) throw RuleError("CR needs a principal formula");
      if (ms_count(ps[0].succ, params.principal) < 2)
        throw RuleError("CR needs two occurrences of " + print(params.principal));
      return Sequent{ps[0].ante, ms_remove(ps[0].succ, params.principal, 1)};
    }

    case RuleId::AndLI: {
      auto pr = need_principal(params, Formula::Tag::Conj, "AndLI");
      auto s = rm(ps[0].ante, pr->lhs, ms, "conjunct");
      s = rm2(std::move(s), pr->rhs, ms, "conjunct", ps[0].ante);
      return Sequent{add(std::move(s), pr, ms), ps[0].succ};
    }
    case RuleId::AndLE: {
      auto pr = need_principal(params, Formula::Tag::Conj, "AndLE");
      auto s = rm(ps[0].ante, pr, ms, "principal");
      s = add(std::move(s), pr->lhs, ms);
      s = add(std::move(s), pr->rhs, ms);
      return Sequent{std::move(s), ps[0].succ};
    }
    case RuleId::AndRI: {
      auto pr = need_principal(params, Formula::Tag::Conj, "AndRI");
      auto d1 = rm(ps[0].succ, pr->lhs, ms, "conjunct");
      auto d2 = rm(ps[1].succ, pr->rhs, ms, "conjunct");
      if (!side_eq(ps[0].ante, ps[1].ante, ms) || !side_eq(d1, d2, ms))
        throw RuleError("AndRI premise contexts differ");
      return Sequent{ps[0].ante, add(std::move(d1), pr, ms)};
    }
    case RuleId::AndRE: {
      auto pr = need_principal(params, Formula::Tag::Conj, "AndRE");
      int sel = need_select(params, "AndRE");
      auto s = rm(ps[0].succ, pr, ms, "principal");
      return Sequent{ps[0].ante, add(std::move(s), sel == 1 ? pr->lhs : pr->rhs, ms)};
    }
    case RuleId::OrLI: {
      auto pr = need_principal(params, Formula::Tag::Disj, "OrLI");
      auto g1 = rm(ps[0].ante, pr->lhs, ms, "disjunct");
      auto g2 = rm(ps[1].ante, pr->rhs, ms, "disjunct");
      if (!side_eq(g1, g2, ms) || !side_eq(ps[0].succ, ps[1].succ, ms))
        throw RuleError("OrLI premise contexts differ");
      return Sequent{add(std::move(g1), pr, ms), ps[0].succ};
    }
    case RuleId::OrLE: {
      auto pr = need_principal(params, Formula::Tag::Disj, "OrLE");
      int sel = need_select(params, "OrLE");
      auto s = rm(ps[0].ante, pr, ms, "principal");
      return Sequent{add(std::move(s), sel == 1 ? pr->lhs : pr->rhs, ms), ps[0].succ};
    }
    case RuleId::OrRI: {
      auto pr = need_principal(params, Formula::Tag::Disj, "OrRI");
      auto s = rm(ps[0].succ, pr->lhs, ms, "disjunct");
      s = rm2(std::move(s), pr->rhs, ms, "disjunct", ps[0].succ);
      return Sequent{ps[0].ante, add(std::move(s), pr, ms)};
    }
    case RuleId::OrRE: {
      auto pr = need_principal(params, Formula::Tag::Disj, "OrRE");
      auto s = rm(ps[0].succ, pr, ms, "principal");
      s = add(std::move(s), pr->lhs, ms);
      s = add(std::move(s), pr->rhs, ms);
      return Sequent{ps[0].ante, std::move(s)};
    }
    case RuleId::NegLI: {
      auto pr = need_principal(params, Formula::Tag::Neg, "NegLI");
      return Sequent{add(ps[0].ante, pr, ms), rm(ps[0].succ, pr->lhs, ms, "negatum")};
    }
    case RuleId::NegLE: {
      auto pr = need_principal(params, Formula::Tag::Neg, "NegLE");
      return Sequent{rm(ps[0].ante, pr, ms, "principal"), add(ps[0].succ, pr->lhs, ms)};
    }
    case RuleId::NegRI: {
      auto pr = need_principal(params, Formula::Tag::Neg, "NegRI");
      return Sequent{rm(ps[0].ante, pr->lhs, ms, "negatum"), add(ps[0].succ, pr, ms)};
    }
    case RuleId::NegRE: {
      auto pr = need_principal(params, Formula::Tag::Neg, "NegRE");
      return Sequent{add(ps[0].ante, pr->lhs, ms), rm(ps[0].succ, pr, ms, "principal")};
    }

    case RuleId::AllL: case RuleId::AllLI: {
      auto pr = need_principal(params, Formula::Tag::Forall, rule_name(r).c_str());
      auto inst = instance(pr, need_term(params, rule_name(r).c_str()));
      return Sequent{add(rm(ps[0].ante, inst, ms, "instance"), pr, ms), ps[0].succ};
    }
    case RuleId::ExR: case RuleId::ExRI: {
      auto pr = need_principal(params, Formula::Tag::Exists, rule_name(r).c_str());
      auto inst = instance(pr, need_term(params, rule_name(r).c_str()));
      return Sequent{ps[0].ante, add(rm(ps[0].succ, inst, ms, "instance"), pr, ms)};
    }
    case RuleId::AllR: case RuleId::AllRI: {
      auto pr = need_principal(params, Formula::Tag::Forall, rule_name(r).c_str());
      auto inst = instance(pr, mk_var(need_eigen(params, rule_name(r).c_str())));
      return Sequent{ps[0].ante, add(rm(ps[0].succ, inst, ms, "instance"), pr, ms)};
    }
    case RuleId::ExL: case RuleId::ExLI: {
      auto pr = need_principal(params, Formula::Tag::Exists, rule_name(r).c_str());
      auto inst = instance(pr, mk_var(need_eigen(params, rule_name(r).c_str())));
      return Sequent{add(rm(ps[0].ante, inst, ms, "instance"), pr, ms), ps[0].succ};
    }
    case RuleId::ExLE: {
      auto pr = need_principal(params, Formula::Tag::Exists, "ExLE");
      auto inst = instance(pr, need_term(params, "ExLE"));
      return Sequent{add(rm(ps[0].ante, pr, ms, "principal"), inst, ms), ps[0].succ};
    }
    case RuleId::AllRE: {
      auto pr = need_principal(params, Formula::Tag::Forall, "AllRE");
      auto inst = instance(pr, need_term(params, "AllRE"));
      return Sequent{ps[0].ante, add(rm(ps[0].succ, pr, ms, "principal"), inst, ms)};
    }

    case RuleId::UWI: {
      auto pr = need_principal(params, Formula::Tag::Forall, "UWI");
      auto inst = instance(pr, need_term(params, "UWI"));
      auto winst = instance(pr, wa_of(pr));
      return Sequent{add(rm(ps[0].ante, inst, ms, "instance"), winst, ms), ps[0].succ};
    }
    case RuleId::EWI: {
      auto pr = need_principal(params, Formula::Tag::Exists, "EWI");
      auto inst = instance(pr, need_term(params, "EWI"));
      auto winst = instance(pr, we_of(pr));
      return Sequent{ps[0].ante, add(rm(ps[0].succ, inst, ms, "instance"), winst, ms)};
    }
    case RuleId::EWE: {
      auto pr = need_principal(params, Formula::Tag::Exists, "EWE");
      auto winst = instance(pr, we_of(pr));
      auto inst = instance(pr, need_term(params, "EWE"));
      return Sequent{add(rm(ps[0].ante, winst, ms, "witness instance"), inst, ms),
                     ps[0].succ};
    }
    case RuleId::UWE: {
      auto pr = need_principal(params, Formula::Tag::Forall, "UWE");
      auto winst = instance(pr, wa_of(pr));
      auto inst = instance(pr, need_term(params, "UWE"));
      return Sequent{ps[0].ante,
                     add(rm(ps[0].succ, winst, ms, "witness instance"), inst, ms)};
    }
    case RuleId::AllLWI: {
      auto pr = need_principal(params, Formula::Tag::Forall, "AllLWI");
      auto winst = instance(pr, wa_of(pr));
      return Sequent{add(rm(ps[0].ante, winst, ms, "witness instance"), pr, ms),
                     ps[0].succ};
    }
    case RuleId::AllLWE: {
      auto pr = need_principal(params, Formula::Tag::Forall, "AllLWE");
      auto winst = instance(pr, wa_of(pr));
      return Sequent{add(rm(ps[0].ante, pr, ms, "principal"), winst, ms), ps[0].succ};
    }
    case RuleId::AllRWI: {
      auto pr = need_principal(params, Formula::Tag::Forall, "AllRWI");
      auto winst = instance(pr, wa_of(pr));
      return Sequent{ps[0].ante,
                     add(rm(ps[0].succ, winst, ms, "witness instance"), pr, ms)};
    }
    case RuleId::AllRWE: {
      auto pr = need_principal(params, Formula::Tag::Forall, "AllRWE");
      auto winst = instance(pr, wa_of(pr));
      return Sequent{ps[0].ante, add(rm(ps[0].succ, pr, ms, "principal"), winst, ms)};
    }
    case RuleId::ExLWI: {
      auto pr = need_principal(params, Formula::Tag::Exists, "ExLWI");
      auto winst = instance(pr, we_of(pr));
      return Sequent{add(rm(ps[0].ante, winst, ms, "witness instance"), pr, ms),
                     ps[0].succ};
    }
    case RuleId::ExLWE: {
      auto pr = need_principal(params, Formula::Tag::Exists, "ExLWE");
      auto winst = instance(pr, we_of(pr));
      return Sequent{add(rm(ps[0].ante, pr, ms, "principal"), winst, ms), ps[0].succ};
    }
    case RuleId::ExRWI: {
      auto pr = need_principal(params, Formula::Tag::Exists, "ExRWI");
      auto winst = instance(pr, we_of(pr));
      return Sequent{ps[0].ante,
                     add(rm(ps[0].succ, winst, ms, "witness instance"), pr, ms)};
    }
    case RuleId::ExRWE: {
      auto pr = need_principal(params, Formula::Tag::Exists, "ExRWE");
      auto winst = instance(pr, we_of(pr));
      return Sequent{ps[0].ante, add(rm(ps[0].succ, pr, ms, "principal"), winst, ms)};
    }

    case RuleId::Cut: {
      if (!params.principal) throw RuleError("Cut needs a principal formula");
      auto pr = params.principal;
      Sequent left{ps[0].ante, rm(ps[0].succ, pr, ms, "cut formula")};
      Sequent right{rm(ps[1].ante, pr, ms, "cut formula"), ps[1].succ};
      return sequent_join(left, right, ms);
    }

    case RuleId::WExchLI: case RuleId::WExchLE:
    case RuleId::WExchRI: case RuleId::WExchRE: {
      if (!params.principal)
        throw RuleError(rule_name(r) + " needs a principal formula");
      auto wa = need_term(params, rule_name(r).c_str());
      if (wa->tag != Term::Tag::UWitness)
        throw RuleError(rule_name(r) + " term= must be a wA witness");
      auto we = mk_ewitness(wa->bound, mk_neg(wa->body));
      bool toWe = r == RuleId::WExchLI || r == RuleId::WExchRI;
      auto from = toWe ? wa : we;
      auto to = toWe ? we : wa;
      auto result = replace_term(params.principal, from, to);
      bool left = r == RuleId::WExchLI || r == RuleId::WExchLE;
      if (left)
        return Sequent{add(rm(ps[0].ante, params.principal, ms, "principal"), result, ms),
                       ps[0].succ};
      return Sequent{ps[0].ante,
                     add(rm(ps[0].succ, params.principal, ms, "principal"), result, ms)};
    }

    case RuleId::ExLEps: {
      auto pr = need_principal(params, Formula::Tag::Exists, "ExLEps");
      auto inst = instance(pr, eps_of_exists(pr));
      return Sequent{add(rm(ps[0].ante, inst, ms, "epsilon instance"), pr, ms),
                     ps[0].succ};
    }
    case RuleId::ExREps: {
      auto pr = need_principal(params, Formula::Tag::Exists, "ExREps");
      auto inst = instance(pr, need_term(params, "ExREps"));
      return Sequent{ps[0].ante, add(rm(ps[0].succ, inst, ms, "instance"), pr, ms)};
    }
    case RuleId::AllLEps: {
      auto pr = need_principal(params, Formula::Tag::Forall, "AllLEps");
      auto inst = instance(pr, need_term(params, "AllLEps"));
      return Sequent{add(rm(ps[0].ante, inst, ms, "instance"), pr, ms), ps[0].succ};
    }
    case RuleId::AllREps: {
      auto pr = need_principal(params, Formula::Tag::Forall, "AllREps");
      auto inst = instance(pr, eps_of_forall(pr));
      return Sequent{ps[0].ante,
                     add(rm(ps[0].succ, inst, ms, "epsilon instance"), pr, ms)};
    }

    case RuleId::ExRE: {
      auto pr = need_principal(params, Formula::Tag::Exists, "ExRE");
      if (ms_count(ps[0].succ, pr) < 1)
        throw RuleError("ExRE major premise lacks " + print(pr));
      return ps[1];
    }
    case RuleId::AllLE: {
      auto pr = need_principal(params, Formula::Tag::Forall, "AllLE");
      if (ms_count(ps[0].ante, pr) < 1)
        throw RuleError("AllLE major premise lacks " + print(pr));
      return ps[1];
    }
  }
  throw RuleError("unhandled rule " + rule_name(r));
}

// ---------------------------------------------------------------------------
// Derivation construction.

DerivPtr mk_assumption(std::string label, Sequent s) {
  auto d = std::make_shared<Derivation>();
  d->kind = NodeKind::Assumption;
  d->label = std::move(label);
  d->sequent = std::move(s);
  return d;
}

DerivPtr mk_discharged(std::string label, Sequent s) {
  auto d = std::make_shared<Derivation>();
  d->kind = NodeKind::Discharged;
  d->label = std::move(label);
  d->sequent = std::move(s);
  return d;
}

DerivPtr mk_gid(Sequent s, FormulaPtr principal) {
  auto d = std::make_shared<Derivation>();
  d->kind = NodeKind::Rule;
  d->rule = RuleId::GID;
  d->params.principal = std::move(principal);
  d->sequent = std::move(s);
  return d;
}

DerivPtr mk_rule(CalculusId cal, RuleId r, std::vector<DerivPtr> children,
                 RuleParams params, std::string binds) {
  std::vector<Sequent> ps;
  ps.reserve(children.size());
  for (auto& c : children) ps.push_back(c->sequent);
  auto d = std::make_shared<Derivation>();
  d->kind = NodeKind::Rule;
  d->rule = r;
  d->sequent = apply_rule(cal, r, ps, params);
  d->params = std::move(params);
  d->children = std::move(children);
  d->binds = std::move(binds);
  return d;
}

int node_count(const DerivPtr& d) {
  int n = 1;
  for (auto& c : d->children) n += node_count(c);
  return n;
}

// ---------------------------------------------------------------------------
// Checking.

RuleViolation::RuleViolation(std::vector<int> p, const std::string& reason)
    : std::runtime_error([&] {
        std::string where = "node";
        for (int i : p) where += "." + std::to_string(i);
        return where + ": " + reason;
      }()),
      path(std::move(p)) {}

namespace {

struct Sub {
  std::vector<OpenPremise> opens;
  std::vector<std::pair<std::string, Sequent>> pending;  // discharged leaves

  void merge(Sub&& o) {
    for (auto& x : o.opens) opens.push_back(std::move(x));
    for (auto& x : o.pending) pending.push_back(std::move(x));
  }
};

bool eigen_free_in(const std::string& y, const Sequent& s) {
  return free_vars(s).count(y) != 0;
}

struct Checker {
  CalculusId cal;
  bool ms;
  int nodes = 0;
  int maxd = 0;

  Sub walk(const DerivPtr& d, std::vector<int>& path, int depth) {
    ++nodes;
    maxd = std::max(maxd, depth);
    auto fail = [&](const std::string& why) -> RuleViolation {
      return RuleViolation(path, why);
    };

    if (!ms) {
      // Set-flavored sequents must be duplicate-free.
      auto c = set_canon(d->sequent);
      if (c.ante.size() != d->sequent.ante.size() ||
          c.succ.size() != d->sequent.succ.size())
        throw fail("duplicate formula in a set-flavored sequent");
    }

    Sub out;
    if (d->kind == NodeKind::Assumption) {
      if (d->label.empty()) throw fail("assumption without a label");
      if (!d->children.empty()) throw fail("assumption with children");
      out.opens.push_back({d->label, d->sequent});
      return out;
    }
    if (d->kind == NodeKind::Discharged) {
      if (d->label.empty()) throw fail("discharged assumption without a label");
      if (!d->children.empty()) throw fail("discharged assumption with children");
      out.pending.push_back({d->label, d->sequent});
      return out;
    }

    if (!rule_in(cal, d->rule))
      throw fail("rule " + rule_name(d->rule) + " is not part of " +
                 calculus_name(cal));
    if (static_cast<int>(d->children.size()) != rule_arity(d->rule))
      throw fail(rule_name(d->rule) + " expects " +
                 std::to_string(rule_arity(d->rule)) + " premises");
    if (is_sidetrack(d->rule)) {
      if (d->binds.empty()) throw fail(rule_name(d->rule) + " must name binds=");
    } else if (!d->binds.empty()) {
      throw fail(rule_name(d->rule) + " cannot bind assumptions");
    }

    std::vector<Sub> subs;
    std::vector<Sequent> premises;
    for (size_t i = 0; i < d->children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      subs.push_back(walk(d->children[i], path, depth + 1));
      path.pop_back();
      premises.push_back(d->children[i]->sequent);
    }

    if (d->rule == RuleId::GID) {
      if (!d->params.principal) throw fail("GID needs a principal formula");
      if (ms_count(d->sequent.ante, d->params.principal) < 1 ||
          ms_count(d->sequent.succ, d->params.principal) < 1)
        throw fail("GID principal must occur on both sides");
    } else {
      Sequent computed;
      try {
        computed = apply_rule(cal, d->rule, premises, d->params);
      } catch (const CaptureError& e) {
        throw fail(std::string("capture: ") + e.what());
      } catch (const RuleError& e) {
        throw fail(e.what());
      }
      bool same = ms ? ms_equal(computed, d->sequent) : set_equal(computed, d->sequent);
      if (!same)
        throw fail("stated sequent [" + print(d->sequent) +
                   "] differs from the rule's conclusion [" + print(computed) + "]");
    }

    // Sidetrack discharge bookkeeping.
    if (is_sidetrack(d->rule)) {
      auto pr = d->params.principal;
      std::string y;
      try {
        y = need_eigen(d->params, rule_name(d->rule).c_str());
      } catch (const RuleError& e) {
        throw fail(e.what());
      }
      FormulaPtr inst;
      try {
        inst = instance(pr, mk_var(y));
      } catch (const CaptureError& e) {
        throw fail(std::string("capture: ") + e.what());
      }
      Sequent schema;
      if (d->rule == RuleId::ExRE)
        schema = Sequent{premises[0].ante,
                         ms_add(ms_remove(premises[0].succ, pr, 1), inst)};
      else
        schema = Sequent{ms_add(ms_remove(premises[0].ante, pr, 1), inst),
                         premises[0].succ};
      Sequent major_ctx = d->rule == RuleId::ExRE
                              ? Sequent{premises[0].ante, ms_remove(premises[0].succ, pr, 1)}
                              : Sequent{ms_remove(premises[0].ante, pr, 1), premises[0].succ};

      for (auto& [label, seq] : subs[0].pending)
        if (label == d->binds)
          throw fail("label " + label + " discharged outside the minor premise");

      std::vector<std::pair<std::string, Sequent>> remaining;
      for (auto& entry : subs[1].pending) {
        if (entry.first != d->binds) {
          remaining.push_back(entry);
          continue;
        }
        if (!ms_equal(entry.second, schema))
          throw fail("discharged assumption [" + print(entry.second) +
                     "] does not match the schema [" + print(schema) + "]");
      }
      subs[1].pending = std::move(remaining);

      // Eigenvariable conditions: y must stay out of the undischarged
      // premises of the minor subderivation, the major context, the
      // conclusion, and the principal formula.
      for (auto& o : subs[1].opens)
        if (eigen_free_in(y, o.sequent))
          throw fail("eigenvariable " + y + " free in open premise " + o.label);
      for (auto& pnd : subs[1].pending)
        if (eigen_free_in(y, pnd.second))
          throw fail("eigenvariable " + y + " free in assumption " + pnd.first);
      if (eigen_free_in(y, major_ctx))
        throw fail("eigenvariable " + y + " free in the major premise context");
      if (eigen_free_in(y, d->sequent))
        throw fail("eigenvariable " + y + " free in the conclusion");
      if (free_vars(pr).count(y))
        throw fail("eigenvariable " + y + " free in the principal formula");
    }

    // Plain eigenvariable rules: fresh for the conclusion and for every
    // undischarged premise of the subderivation.
    if (d->rule == RuleId::AllR || d->rule == RuleId::ExL ||
        d->rule == RuleId::AllRI || d->rule == RuleId::ExLI) {
      const std::string& y = d->params.eigen;
      if (eigen_free_in(y, d->sequent))
        throw fail("eigenvariable " + y + " free in the conclusion");
      for (auto& o : subs[0].opens)
        if (eigen_free_in(y, o.sequent))
          throw fail("eigenvariable " + y + " free in open premise " + o.label);
      for (auto& pnd : subs[0].pending)
        if (eigen_free_in(y, pnd.second))
          throw fail("eigenvariable " + y + " free in assumption " + pnd.first);
    }

    for (auto& s : subs) out.merge(std::move(s));
    return out;
  }
};

}  // namespace

CheckReport check(const DerivPtr& d, CalculusId cal) {
  Checker ck{cal, is_multiset(cal)};
  std::vector<int> path;
  Sub sub = ck.walk(d, path, 1);
  if (!sub.pending.empty())
    throw RuleViolation({}, "assumption label " + sub.pending.front().first +
                                " is never discharged");
  CheckReport rep;
  rep.conclusion = d->sequent;
  rep.open_premises = std::move(sub.opens);
  rep.calculus = cal;
  rep.node_count = ck.nodes;
  rep.max_depth = ck.maxd;
  return rep;
}

}  // namespace stp
