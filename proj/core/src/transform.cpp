#include "stproof/transform.hpp"

#include <algorithm>

namespace stp {
namespace {

constexpr CalculusId MQ = CalculusId::MQST;
constexpr CalculusId HC = CalculusId::STHC;

FormulaPtr instance(const FormulaPtr& quant, const TermPtr& t) {
  return substitute(quant->lhs, quant->name, t);
}

TermPtr wa_of(const FormulaPtr& pr) { return mk_uwitness(pr->name, pr->lhs); }
TermPtr we_of(const FormulaPtr& pr) { return mk_ewitness(pr->name, pr->lhs); }

void side_vars(const std::vector<FormulaPtr>& side, std::set<std::string>& out) {
  for (auto& f : side)
    for (auto& v : all_vars(f)) out.insert(v);
}

void node_vars(const DerivPtr& d, std::set<std::string>& out) {
  side_vars(d->sequent.ante, out);
  side_vars(d->sequent.succ, out);
  if (d->params.term)
    for (auto& v : all_vars(d->params.term)) out.insert(v);
  if (d->params.principal)
    for (auto& v : all_vars(d->params.principal)) out.insert(v);
  if (!d->params.eigen.empty()) out.insert(d->params.eigen);
  for (auto& c : d->children) node_vars(c, out);
}

std::set<std::string> deriv_vars(const DerivPtr& d) { return derivation_vars(d); }

bool has_eigen(RuleId r) {
  return r == RuleId::AllR || r == RuleId::ExL || r == RuleId::AllRI ||
         r == RuleId::ExLI || r == RuleId::ExRE || r == RuleId::AllLE;
}

void open_sequents(const DerivPtr& d, std::vector<Sequent>& out) {
  if (d->kind == NodeKind::Assumption) {
    out.push_back(d->sequent);
    return;
  }
  for (auto& c : d->children) open_sequents(c, out);
}

// Renames free x to z without the public freshness walk; callers guarantee
// that z is globally fresh.
DerivPtr rename_unchecked(const DerivPtr& d, const std::string& x,
                          const TermPtr& z, CalculusId cal) {
  if (d->kind == NodeKind::Assumption)
    return mk_assumption(d->label, substitute(d->sequent, x, z));
  if (d->kind == NodeKind::Discharged)
    return mk_discharged(d->label, substitute(d->sequent, x, z));
  if (d->rule == RuleId::GID)
    return mk_gid(substitute(d->sequent, x, z), substitute(d->params.principal, x, z));
  std::vector<DerivPtr> ch;
  for (auto& c : d->children) ch.push_back(rename_unchecked(c, x, z, cal));
  RuleParams p = d->params;
  if (p.term) p.term = substitute(p.term, x, z);
  if (p.principal) p.principal = substitute(p.principal, x, z);
  if (p.eigen == x) {
    if (z->tag != Term::Tag::Var)
      throw TransformError("cannot substitute a non-variable for the eigenvariable " + x);
    p.eigen = z->name;
  }
  return mk_rule(cal, d->rule, std::move(ch), std::move(p), d->binds);
}

// Renames eigenvariables listed in `clash` to names fresh for `avoid`,
// which grows with every chosen name. Children first, so nested clashes are
// gone before the enclosing application is rebuilt.
DerivPtr re_eigen(const DerivPtr& d, const std::set<std::string>& clash,
                  std::set<std::string>& avoid, CalculusId cal) {
  if (d->kind != NodeKind::Rule) return d;
  if (d->rule == RuleId::GID) return d;
  std::vector<DerivPtr> ch;
  for (auto& c : d->children) ch.push_back(re_eigen(c, clash, avoid, cal));
  RuleParams p = d->params;
  if (has_eigen(d->rule) && clash.count(p.eigen)) {
    std::string z = fresh_var(p.eigen, avoid);
    avoid.insert(z);
    // The eigenvariable lives in the premise subtree: the single premise of
    // the plain rules, the minor premise of the sidetrack rules.
    size_t slot = is_sidetrack(d->rule) ? 1 : 0;
    ch[slot] = rename_unchecked(ch[slot], p.eigen, mk_var(z), cal);
    p.eigen = z;
  }
  return mk_rule(cal, d->rule, std::move(ch), std::move(p), d->binds);
}

// Joins `extra` onto every sequent of a multiset-flavor tree. Sound because
// every MQST rule passes its context through unchanged and GID absorbs an
// arbitrary context; eigenvariables must already avoid the extras.
DerivPtr side_join_mqst(const DerivPtr& d, const Sequent& extra) {
  if (d->kind == NodeKind::Assumption)
    return mk_assumption(d->label, sequent_join(d->sequent, extra, true));
  if (d->kind == NodeKind::Discharged)
    return mk_discharged(d->label, sequent_join(d->sequent, extra, true));
  if (d->rule == RuleId::GID)
    return mk_gid(sequent_join(d->sequent, extra, true), d->params.principal);
  std::vector<DerivPtr> ch;
  for (auto& c : d->children) ch.push_back(side_join_mqst(c, extra));
  return mk_rule(MQ, d->rule, std::move(ch), d->params, d->binds);
}

DerivPtr graft_mqst(const DerivPtr& d, const Sequent& at, const DerivPtr& repl) {
  if (d->kind == NodeKind::Assumption)
    return ms_equal(d->sequent, at) ? repl : d;
  if (d->kind != NodeKind::Rule || d->rule == RuleId::GID) return d;
  std::vector<DerivPtr> ch;
  for (auto& c : d->children) ch.push_back(graft_mqst(c, at, repl));
  return mk_rule(MQ, d->rule, std::move(ch), d->params, d->binds);
}

std::vector<FormulaPtr> sorted_side(std::vector<FormulaPtr> side) {
  std::stable_sort(side.begin(), side.end(),
                   [](const FormulaPtr& a, const FormulaPtr& b) {
                     return print(a) < print(b);
                   });
  return side;
}

RuleParams with_principal(FormulaPtr pr) {
  RuleParams p;
  p.principal = std::move(pr);
  return p;
}

RuleParams with_term(FormulaPtr pr, TermPtr t) {
  RuleParams p;
  p.principal = std::move(pr);
  p.term = std::move(t);
  return p;
}

RuleParams with_select(FormulaPtr pr, int sel) {
  RuleParams p;
  p.principal = std::move(pr);
  p.select = sel;
  return p;
}

DerivPtr rule1(CalculusId cal, RuleId r, DerivPtr c, RuleParams p) {
  std::vector<DerivPtr> ch{std::move(c)};
  return mk_rule(cal, r, std::move(ch), std::move(p));
}

DerivPtr rule2(CalculusId cal, RuleId r, DerivPtr a, DerivPtr b, RuleParams p) {
  std::vector<DerivPtr> ch{std::move(a), std::move(b)};
  return mk_rule(cal, r, std::move(ch), std::move(p));
}

DerivPtr id_node(CalculusId cal, const FormulaPtr& f) {
  return mk_rule(cal, RuleId::ID, {}, with_principal(f));
}

}  // namespace

// ---------------------------------------------------------------------------
// GID expansion.

namespace {

DerivPtr gid_expand(const FormulaPtr& pr, const std::vector<FormulaPtr>& ctxL,
                    const std::vector<FormulaPtr>& ctxR,
                    std::set<std::string>& avoid) {
  switch (pr->tag) {
    case Formula::Tag::Atom:
      return mk_gid(Sequent{ms_add(ctxL, pr), ms_add(ctxR, pr)}, pr);
    case Formula::Tag::Neg: {
      auto e = gid_expand(pr->lhs, ctxL, ctxR, avoid);
      auto r = rule1(MQ, RuleId::NegRI, std::move(e), with_principal(pr));
      return rule1(MQ, RuleId::NegLI, std::move(r), with_principal(pr));
    }
    case Formula::Tag::Conj: {
      auto e1 = gid_expand(pr->lhs, ms_add(ctxL, pr->rhs), ctxR, avoid);
      auto l1 = rule1(MQ, RuleId::AndLI, std::move(e1), with_principal(pr));
      auto e2 = gid_expand(pr->rhs, ms_add(ctxL, pr->lhs), ctxR, avoid);
      auto l2 = rule1(MQ, RuleId::AndLI, std::move(e2), with_principal(pr));
      return rule2(MQ, RuleId::AndRI, std::move(l1), std::move(l2), with_principal(pr));
    }
    case Formula::Tag::Disj: {
      auto e1 = gid_expand(pr->lhs, ctxL, ms_add(ctxR, pr->rhs), avoid);
      auto r1 = rule1(MQ, RuleId::OrRI, std::move(e1), with_principal(pr));
      auto e2 = gid_expand(pr->rhs, ctxL, ms_add(ctxR, pr->lhs), avoid);
      auto r2 = rule1(MQ, RuleId::OrRI, std::move(e2), with_principal(pr));
      return rule2(MQ, RuleId::OrLI, std::move(r1), std::move(r2), with_principal(pr));
    }
    case Formula::Tag::Forall: {
      std::string y = fresh_var("y", avoid);
      avoid.insert(y);
      auto e = gid_expand(instance(pr, mk_var(y)), ctxL, ctxR, avoid);
      auto l = rule1(MQ, RuleId::AllLI, std::move(e), with_term(pr, mk_var(y)));
      RuleParams p = with_principal(pr);
      p.eigen = y;
      return rule1(MQ, RuleId::AllRI, std::move(l), std::move(p));
    }
    case Formula::Tag::Exists: {
      std::string y = fresh_var("y", avoid);
      avoid.insert(y);
      auto e = gid_expand(instance(pr, mk_var(y)), ctxL, ctxR, avoid);
      auto r = rule1(MQ, RuleId::ExRI, std::move(e), with_term(pr, mk_var(y)));
      RuleParams p = with_principal(pr);
      p.eigen = y;
      return rule1(MQ, RuleId::ExLI, std::move(r), std::move(p));
    }
  }
  throw TransformError("unreachable formula tag");
}

DerivPtr expand_rec(const DerivPtr& d, std::set<std::string>& avoid) {
  if (d->kind != NodeKind::Rule) return d;
  if (d->rule == RuleId::GID) {
    if (d->params.principal->tag == Formula::Tag::Atom) return d;
    auto ctxL = ms_remove(d->sequent.ante, d->params.principal, 1);
    auto ctxR = ms_remove(d->sequent.succ, d->params.principal, 1);
    return gid_expand(d->params.principal, ctxL, ctxR, avoid);
  }
  std::vector<DerivPtr> ch;
  for (auto& c : d->children) ch.push_back(expand_rec(c, avoid));
  return mk_rule(MQ, d->rule, std::move(ch), d->params, d->binds);
}

}  // namespace

std::set<std::string> derivation_vars(const DerivPtr& d) {
  std::set<std::string> out;
  node_vars(d, out);
  return out;
}

DerivPtr expand_atomic_gid(const DerivPtr& d) {
  auto avoid = deriv_vars(d);
  return expand_rec(d, avoid);
}

// ---------------------------------------------------------------------------
// Renaming, weakening, substitution.

DerivPtr rename_free(const DerivPtr& d, const std::string& x, const std::string& z,
                     CalculusId cal) {
  if (deriv_vars(d).count(z))
    throw TransformError("variable " + z + " already occurs in the derivation");
  return rename_unchecked(d, x, mk_var(z), cal);
}

DerivPtr weaken_derivation(const DerivPtr& d, const std::vector<FormulaPtr>& extraL,
                           const std::vector<FormulaPtr>& extraR) {
  if (extraL.empty() && extraR.empty()) return d;
  Sequent extra{extraL, extraR};
  std::set<std::string> clash = free_vars(extra);
  auto avoid = deriv_vars(d);
  for (auto& v : clash) avoid.insert(v);
  auto safe = re_eigen(d, clash, avoid, MQ);
  return side_join_mqst(safe, extra);
}

DerivPtr substitute_in_derivation(const DerivPtr& d, const std::string& x,
                                  const TermPtr& t) {
  std::set<std::string> clash = free_vars(t);
  clash.insert(x);
  auto avoid = deriv_vars(d);
  for (auto& v : clash) avoid.insert(v);
  auto safe = re_eigen(d, clash, avoid, MQ);
  return rename_unchecked(safe, x, t, MQ);
}

// ---------------------------------------------------------------------------
// Joining two derivations over a shared conclusion.

namespace {

// Inserts WL/WR nodes until every formula of `extra` is present.
DerivPtr sth_bridge(DerivPtr cur, const Sequent& extra) {
  for (auto& f : extra.ante)
    if (!set_member(cur->sequent.ante, f))
      cur = rule1(CalculusId::STH, RuleId::WL, std::move(cur), with_principal(f));
  for (auto& f : extra.succ)
    if (!set_member(cur->sequent.succ, f))
      cur = rule1(CalculusId::STH, RuleId::WR, std::move(cur), with_principal(f));
  return cur;
}

// Rebuilds an STH tree so that each node concludes its old sequent joined
// with `extra`. Assumption leaves equal to `prem` are replaced by `premRepl`;
// other assumption leaves stay open and are bridged with WL/WR.
DerivPtr sth_join(const DerivPtr& d, const Sequent& extra, const Sequent& prem,
                  const DerivPtr& premRepl) {
  Sequent target = sequent_join(d->sequent, extra, false);
  if (d->kind == NodeKind::Assumption) {
    if (set_equal(d->sequent, prem)) return premRepl;
    return sth_bridge(mk_assumption(d->label, d->sequent), extra);
  }
  DerivPtr out;
  try {
    if (d->rule == RuleId::ID) {
      out = id_node(CalculusId::STH, d->params.principal);
    } else {
      std::vector<DerivPtr> ch;
      for (auto& c : d->children) ch.push_back(sth_join(c, extra, prem, premRepl));
      out = mk_rule(CalculusId::STH, d->rule, std::move(ch), d->params, d->binds);
    }
  } catch (const RuleError& e) {
    throw TransformError(std::string("join blocked at a ") + rule_name(d->rule) +
                         " node: " + e.what());
  }
  out = sth_bridge(std::move(out), target);
  if (!set_equal(out->sequent, target))
    throw TransformError("join produced a wrong sequent at a " +
                         rule_name(d->rule) + " node");
  return out;
}

DerivPtr join_mqst(const DerivPtr& d1, const Sequent& s1, const DerivPtr& d2,
                   const Sequent& s2) {
  Sequent S = d1->sequent;
  std::set<std::string> avoid = deriv_vars(d1);
  for (auto& v : deriv_vars(d2)) avoid.insert(v);

  // Side-join a freshened copy of `extra` onto every sequent of d, then
  // substitute the original variables back.
  auto joined_with = [&avoid](const DerivPtr& d, const Sequent& extra) {
    std::vector<std::pair<std::string, std::string>> ren;
    Sequent fresh = extra;
    for (auto& v : free_vars(extra)) {
      std::string z = fresh_var(v, avoid);
      avoid.insert(z);
      fresh = substitute(fresh, v, mk_var(z));
      ren.emplace_back(v, z);
    }
    DerivPtr out = side_join_mqst(d, fresh);
    for (auto& [v, z] : ren) out = substitute_in_derivation(out, z, mk_var(v));
    return out;
  };

  DerivPtr left = joined_with(d1, s2);  // X + s2, s1 + s2 |- S + s2

  // Eigenvariables of d2 must stay clear of the open premises grafted in
  // from the left tree.
  std::vector<Sequent> opens1;
  open_sequents(d1, opens1);
  std::set<std::string> clash;
  for (auto& s : opens1)
    for (auto& v : free_vars(s)) clash.insert(v);
  for (auto& v : free_vars(s1)) clash.insert(v);
  for (auto& v : free_vars(s2)) clash.insert(v);
  for (auto& v : free_vars(S)) clash.insert(v);
  DerivPtr d2safe = re_eigen(d2, clash, avoid, MQ);

  DerivPtr right = joined_with(d2safe, S);  // X + S, s2 + S |- S + S
  right = graft_mqst(right, sequent_join(s2, S, true), left);

  for (auto& f : S.ante)
    right = rule1(MQ, RuleId::CL, std::move(right), with_principal(f));
  for (auto& f : S.succ)
    right = rule1(MQ, RuleId::CR, std::move(right), with_principal(f));
  if (!ms_equal(right->sequent, S))
    throw TransformError("join failed to contract back to the conclusion");
  return right;
}

}  // namespace

DerivPtr join_derivations(const DerivPtr& d1, const Sequent& s1, const DerivPtr& d2,
                          const Sequent& s2, CalculusId cal) {
  bool ms = is_multiset(cal);
  if (cal != CalculusId::STH && cal != MQ)
    throw TransformError("join is defined for STH and MQST only");
  auto eq = [ms](const Sequent& a, const Sequent& b) {
    return ms ? ms_equal(a, b) : set_equal(a, b);
  };
  if (!eq(d1->sequent, d2->sequent))
    throw TransformError("joined derivations must share their conclusion");
  if (ms) return join_mqst(d1, s1, d2, s2);

  Sequent S = d1->sequent;
  Sequent both = sequent_join(s1, s2, false);
  DerivPtr left = sth_join(d1, s2, s1, mk_assumption("joined", both));
  // The left tree concludes S + s2, which is where d2 consumed its premise.
  DerivPtr out = sth_join(d2, S, s2, left);
  if (!set_equal(out->sequent, S))
    throw TransformError("join failed to collapse back to the conclusion");
  return out;
}

// ---------------------------------------------------------------------------
// tau interderivability and premise bundling.

DerivationPair tau_interderive(const Sequent& s, CalculusId cal, const Signature& sig) {
  if (cal != CalculusId::STH && cal != MQ)
    throw TransformError("tau interderivability is defined for STH and MQST only");
  bool ms = is_multiset(cal);
  Sequent cs = ms ? ms_canon(s) : set_canon(s);
  if (cs.ante.empty() && cs.succ.empty())
    throw TransformError(
        "the empty sequent is not interderivable with its formula translation");
  auto gammas = sorted_side(cs.ante);
  auto deltas = sorted_side(cs.succ);
  std::vector<FormulaPtr> parts;
  for (auto& g : gammas) parts.push_back(mk_neg(g));
  for (auto& d : deltas) parts.push_back(d);

  DerivPtr fwd = mk_assumption("s", cs);
  for (auto& g : gammas)
    fwd = rule1(cal, RuleId::NegRI, std::move(fwd), with_principal(mk_neg(g)));
  FormulaPtr acc = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) {
    acc = mk_disj(acc, parts[i]);
    fwd = rule1(cal, RuleId::OrRI, std::move(fwd), with_principal(acc));
  }
  FormulaPtr t = tau(cs, sig);
  if (!equal(acc, t)) throw TransformError("tau fold mismatch");
  Sequent taus{{}, {t}};

  DerivPtr bwd = mk_assumption("tau", taus);
  std::vector<FormulaPtr> stack;
  for (FormulaPtr a = t; stack.size() + 1 < parts.size(); a = a->lhs) stack.push_back(a);
  for (auto it = stack.begin(); it != stack.end(); ++it)
    bwd = rule1(cal, RuleId::OrRE, std::move(bwd), with_principal(*it));
  for (auto& g : gammas)
    bwd = rule1(cal, RuleId::NegRE, std::move(bwd), with_principal(mk_neg(g)));
  bool ok = ms ? ms_equal(bwd->sequent, cs) : set_equal(bwd->sequent, cs);
  if (!ok) throw TransformError("tau unfold mismatch");
  return {std::move(fwd), std::move(bwd)};
}

BundlePair bundle_interderive(const std::vector<Sequent>& xs, CalculusId cal) {
  if (cal != CalculusId::STH && cal != MQ)
    throw TransformError("bundling is defined for STH and MQST only");
  if (xs.empty()) throw TransformError("bundling needs at least one sequent");
  std::vector<FormulaPtr> phis;
  for (auto& s : xs) {
    if (!s.ante.empty() || s.succ.size() != 1)
      throw TransformError("bundling expects sequents with exactly one succedent");
    phis.push_back(s.succ[0]);
  }
  DerivPtr fwd = mk_assumption("s1", xs[0]);
  FormulaPtr acc = phis[0];
  for (size_t i = 1; i < phis.size(); ++i) {
    acc = mk_conj(acc, phis[i]);
    fwd = rule2(cal, RuleId::AndRI, std::move(fwd),
                mk_assumption("s" + std::to_string(i + 1), xs[i]), with_principal(acc));
  }
  Sequent big{{}, {acc}};
  std::vector<DerivPtr> bwd;
  for (size_t i = 0; i < phis.size(); ++i) {
    DerivPtr cur = mk_assumption("bundle", big);
    // Peel the left-associated conjunction down to member i.
    FormulaPtr node = acc;
    for (size_t level = phis.size(); level - 1 > i && level > 1; --level) {
      cur = rule1(cal, RuleId::AndRE, std::move(cur), with_select(node, 1));
      node = node->lhs;
    }
    if (i > 0) cur = rule1(cal, RuleId::AndRE, std::move(cur), with_select(node, 2));
    if (!equal(cur->sequent.succ[0], phis[i]) || cur->sequent.succ.size() != 1)
      throw TransformError("bundle projection mismatch");
    bwd.push_back(std::move(cur));
  }
  return {std::move(fwd), std::move(bwd)};
}

// ---------------------------------------------------------------------------
// Alpha interderivability in STH.

namespace {

constexpr CalculusId H = CalculusId::STH;

DerivPtr alpha_right(DerivPtr d, const FormulaPtr& a, const FormulaPtr& b);

DerivPtr alpha_left(DerivPtr d, const FormulaPtr& a, const FormulaPtr& b) {
  if (equal(a, b)) return d;
  switch (a->tag) {
    case Formula::Tag::Neg: {
      d = rule1(H, RuleId::NegLE, std::move(d), with_principal(a));
      d = alpha_right(std::move(d), a->lhs, b->lhs);
      return rule1(H, RuleId::NegLI, std::move(d), with_principal(b));
    }
    case Formula::Tag::Conj: {
      d = rule1(H, RuleId::AndLE, std::move(d), with_principal(a));
      d = alpha_left(std::move(d), a->lhs, b->lhs);
      d = alpha_left(std::move(d), a->rhs, b->rhs);
      return rule1(H, RuleId::AndLI, std::move(d), with_principal(b));
    }
    case Formula::Tag::Disj: {
      auto l = rule1(H, RuleId::OrLE, d, with_select(a, 1));
      l = alpha_left(std::move(l), a->lhs, b->lhs);
      auto r = rule1(H, RuleId::OrLE, std::move(d), with_select(a, 2));
      r = alpha_left(std::move(r), a->rhs, b->rhs);
      return rule2(H, RuleId::OrLI, std::move(l), std::move(r), with_principal(b));
    }
    case Formula::Tag::Forall: {
      // Expose the witness instance, rename inside it, trade the witness
      // term of a for the witness term of b, close the quantifier again.
      auto wa = wa_of(a);
      d = rule1(H, RuleId::AllLWE, std::move(d), with_principal(a));
      d = alpha_left(std::move(d), instance(a, wa), instance(b, wa));
      d = rule1(H, RuleId::UWI, std::move(d), with_term(b, wa));
      return rule1(H, RuleId::AllLWI, std::move(d), with_principal(b));
    }
    case Formula::Tag::Exists: {
      auto wb = we_of(b);
      d = rule1(H, RuleId::ExLWE, std::move(d), with_principal(a));
      d = rule1(H, RuleId::EWE, std::move(d), with_term(a, wb));
      d = alpha_left(std::move(d), instance(a, wb), instance(b, wb));
      return rule1(H, RuleId::ExLWI, std::move(d), with_principal(b));
    }
    case Formula::Tag::Atom:
      throw TransformError("atoms differ beyond a bound renaming: " + print(a) +
                           " vs " + print(b));
  }
  throw TransformError("unreachable formula tag");
}

DerivPtr alpha_right(DerivPtr d, const FormulaPtr& a, const FormulaPtr& b) {
  if (equal(a, b)) return d;
  switch (a->tag) {
    case Formula::Tag::Neg: {
      d = rule1(H, RuleId::NegRE, std::move(d), with_principal(a));
      d = alpha_left(std::move(d), a->lhs, b->lhs);
      return rule1(H, RuleId::NegRI, std::move(d), with_principal(b));
    }
    case Formula::Tag::Conj: {
      auto l = rule1(H, RuleId::AndRE, d, with_select(a, 1));
      l = alpha_right(std::move(l), a->lhs, b->lhs);
      auto r = rule1(H, RuleId::AndRE, std::move(d), with_select(a, 2));
      r = alpha_right(std::move(r), a->rhs, b->rhs);
      return rule2(H, RuleId::AndRI, std::move(l), std::move(r), with_principal(b));
    }
    case Formula::Tag::Disj: {
      d = rule1(H, RuleId::OrRE, std::move(d), with_principal(a));
      d = alpha_right(std::move(d), a->lhs, b->lhs);
      d = alpha_right(std::move(d), a->rhs, b->rhs);
      return rule1(H, RuleId::OrRI, std::move(d), with_principal(b));
    }
    case Formula::Tag::Forall: {
      auto wb = wa_of(b);
      d = rule1(H, RuleId::AllRWE, std::move(d), with_principal(a));
      d = rule1(H, RuleId::UWE, std::move(d), with_term(a, wb));
      d = alpha_right(std::move(d), instance(a, wb), instance(b, wb));
      return rule1(H, RuleId::AllRWI, std::move(d), with_principal(b));
    }
    case Formula::Tag::Exists: {
      auto wa = we_of(a);
      d = rule1(H, RuleId::ExRWE, std::move(d), with_principal(a));
      d = alpha_right(std::move(d), instance(a, wa), instance(b, wa));
      d = rule1(H, RuleId::EWI, std::move(d), with_term(b, wa));
      return rule1(H, RuleId::ExRWI, std::move(d), with_principal(b));
    }
    case Formula::Tag::Atom:
      throw TransformError("atoms differ beyond a bound renaming: " + print(a) +
                           " vs " + print(b));
  }
  throw TransformError("unreachable formula tag");
}

// Pairs each formula of `from` with an equal or alpha-equal partner in `to`.
std::vector<std::pair<FormulaPtr, FormulaPtr>> alpha_match(
    const std::vector<FormulaPtr>& from, const std::vector<FormulaPtr>& to) {
  if (from.size() != to.size())
    throw TransformError("sequents differ in size, not alpha-equivalent");
  std::vector<bool> used(to.size(), false);
  std::vector<std::pair<FormulaPtr, FormulaPtr>> out;
  for (auto& a : from) {
    int pick = -1;
    for (size_t j = 0; j < to.size(); ++j)
      if (!used[j] && equal(a, to[j])) { pick = static_cast<int>(j); break; }
    if (pick < 0)
      for (size_t j = 0; j < to.size(); ++j)
        if (!used[j] && alpha_equal(a, to[j])) { pick = static_cast<int>(j); break; }
    if (pick < 0)
      throw TransformError("no alpha-equivalent partner for " + print(a));
    used[pick] = true;
    out.emplace_back(a, to[pick]);
  }
  return out;
}

DerivPtr alpha_direction(const Sequent& from, const Sequent& to) {
  auto anteP = alpha_match(from.ante, to.ante);
  auto succP = alpha_match(from.succ, to.succ);
  DerivPtr cur = mk_assumption("s", from);
  try {
    for (auto& [a, b] : anteP) cur = alpha_left(std::move(cur), a, b);
    for (auto& [a, b] : succP) cur = alpha_right(std::move(cur), a, b);
  } catch (const RuleError& e) {
    throw TransformError(std::string("alpha renaming blocked: ") + e.what());
  }
  if (!set_equal(cur->sequent, to))
    throw TransformError("alpha renaming collapsed a context formula");
  return cur;
}

}  // namespace

DerivationPair alpha_interderive_sth(const Sequent& s, const Sequent& sp) {
  Sequent a = set_canon(s), b = set_canon(sp);
  return {alpha_direction(a, b), alpha_direction(b, a)};
}

// ---------------------------------------------------------------------------
// Derived eliminations and the STH -> STHC embedding.

namespace {

DerivPtr derived_elim_core(RuleId rule, DerivPtr prem, const RuleParams& params) {
  const FormulaPtr& pr = params.principal;
  if (!pr) throw TransformError(rule_name(rule) + " needs a principal formula");
  auto idh = [](const FormulaPtr& f) { return id_node(HC, f); };
  switch (rule) {
    case RuleId::AndLE: {
      auto a1 = rule1(HC, RuleId::WL, idh(pr->lhs), with_principal(pr->rhs));
      auto a2 = rule1(HC, RuleId::WL, idh(pr->rhs), with_principal(pr->lhs));
      auto ax = rule2(HC, RuleId::AndRI, std::move(a1), std::move(a2), with_principal(pr));
      return rule2(HC, RuleId::Cut, std::move(ax), std::move(prem), with_principal(pr));
    }
    case RuleId::AndRE: {
      auto sub = params.select == 2 ? pr->rhs : pr->lhs;
      auto other = params.select == 2 ? pr->lhs : pr->rhs;
      auto ax = rule1(HC, RuleId::AndLI,
                      rule1(HC, RuleId::WL, idh(sub), with_principal(other)),
                      with_principal(pr));
      return rule2(HC, RuleId::Cut, std::move(prem), std::move(ax), with_principal(pr));
    }
    case RuleId::OrLE: {
      auto sub = params.select == 2 ? pr->rhs : pr->lhs;
      auto other = params.select == 2 ? pr->lhs : pr->rhs;
      auto ax = rule1(HC, RuleId::OrRI,
                      rule1(HC, RuleId::WR, idh(sub), with_principal(other)),
                      with_principal(pr));
      return rule2(HC, RuleId::Cut, std::move(ax), std::move(prem), with_principal(pr));
    }
    case RuleId::OrRE: {
      auto b1 = rule1(HC, RuleId::WR, idh(pr->lhs), with_principal(pr->rhs));
      auto b2 = rule1(HC, RuleId::WR, idh(pr->rhs), with_principal(pr->lhs));
      auto ax = rule2(HC, RuleId::OrLI, std::move(b1), std::move(b2), with_principal(pr));
      return rule2(HC, RuleId::Cut, std::move(prem), std::move(ax), with_principal(pr));
    }
    case RuleId::NegLE: {
      auto ax = rule1(HC, RuleId::NegRI, idh(pr->lhs), with_principal(pr));
      return rule2(HC, RuleId::Cut, std::move(ax), std::move(prem), with_principal(pr));
    }
    case RuleId::NegRE: {
      auto ax = rule1(HC, RuleId::NegLI, idh(pr->lhs), with_principal(pr));
      return rule2(HC, RuleId::Cut, std::move(prem), std::move(ax), with_principal(pr));
    }
    case RuleId::UWE: {
      if (!params.term) throw TransformError("UWE needs a target term");
      auto ax = rule1(HC, RuleId::UWI, idh(instance(pr, params.term)),
                      with_term(pr, params.term));
      return rule2(HC, RuleId::Cut, std::move(prem), std::move(ax),
                   with_principal(instance(pr, wa_of(pr))));
    }
    case RuleId::EWE: {
      if (!params.term) throw TransformError("EWE needs a target term");
      auto ax = rule1(HC, RuleId::EWI, idh(instance(pr, params.term)),
                      with_term(pr, params.term));
      return rule2(HC, RuleId::Cut, std::move(ax), std::move(prem),
                   with_principal(instance(pr, we_of(pr))));
    }
    case RuleId::AllLWE: {
      auto ax = rule1(HC, RuleId::AllRWI, idh(instance(pr, wa_of(pr))),
                      with_principal(pr));
      return rule2(HC, RuleId::Cut, std::move(ax), std::move(prem), with_principal(pr));
    }
    case RuleId::AllRWE: {
      auto ax = rule1(HC, RuleId::AllLWI, idh(instance(pr, wa_of(pr))),
                      with_principal(pr));
      return rule2(HC, RuleId::Cut, std::move(prem), std::move(ax), with_principal(pr));
    }
    case RuleId::ExLWE: {
      auto ax = rule1(HC, RuleId::ExRWI, idh(instance(pr, we_of(pr))),
                      with_principal(pr));
      return rule2(HC, RuleId::Cut, std::move(ax), std::move(prem), with_principal(pr));
    }
    case RuleId::ExRWE: {
      auto ax = rule1(HC, RuleId::ExLWI, idh(instance(pr, we_of(pr))),
                      with_principal(pr));
      return rule2(HC, RuleId::Cut, std::move(prem), std::move(ax), with_principal(pr));
    }
    default:
      throw TransformError(rule_name(rule) + " is not an STH elimination rule");
  }
}

}  // namespace

DerivPtr derived_elim_sthc(RuleId rule, const Sequent& premise, const RuleParams& params) {
  if (!is_elimination(rule) || is_sidetrack(rule))
    throw TransformError(rule_name(rule) + " is not an STH elimination rule");
  Sequent expected;
  try {
    expected = apply_rule(CalculusId::STH, rule, {premise}, params);
  } catch (const RuleError& e) {
    throw TransformError(std::string("premise does not fit ") + rule_name(rule) +
                         ": " + e.what());
  }
  auto out = derived_elim_core(rule, mk_assumption("premise", premise), params);
  if (!set_equal(out->sequent, expected))
    throw TransformError("derived elimination produced a wrong conclusion");
  return out;
}

DerivPtr embed_sth_in_sthc(const DerivPtr& d) {
  if (d->kind == NodeKind::Assumption) return d;
  if (d->kind != NodeKind::Rule)
    throw TransformError("discharge nodes do not occur in STH");
  if (is_elimination(d->rule))
    return derived_elim_core(d->rule, embed_sth_in_sthc(d->children[0]), d->params);
  std::vector<DerivPtr> ch;
  for (auto& c : d->children) ch.push_back(embed_sth_in_sthc(c));
  return mk_rule(HC, d->rule, std::move(ch), d->params, d->binds);
}

// ---------------------------------------------------------------------------
// Epsilon translations.

DerivPtr derivation_to_epsilon(const DerivPtr& d) {
  constexpr CalculusId E = CalculusId::E;
  if (d->kind == NodeKind::Assumption)
    return mk_assumption(d->label, to_epsilon(d->sequent));
  if (d->kind != NodeKind::Rule)
    throw TransformError("discharge nodes do not occur in STHC");
  FormulaPtr prE = d->params.principal ? to_epsilon(d->params.principal) : nullptr;
  switch (d->rule) {
    case RuleId::ID:
      return id_node(E, prE);
    case RuleId::WL: case RuleId::WR:
    case RuleId::AndLI: case RuleId::AndRI: case RuleId::OrLI:
    case RuleId::OrRI: case RuleId::NegLI: case RuleId::NegRI:
    case RuleId::Cut: {
      std::vector<DerivPtr> ch;
      for (auto& c : d->children) ch.push_back(derivation_to_epsilon(c));
      return mk_rule(E, d->rule, std::move(ch), with_principal(prE));
    }
    case RuleId::WExchLI: case RuleId::WExchLE:
    case RuleId::WExchRI: case RuleId::WExchRE:
      // Both sides of an exchange share one epsilon image.
      return derivation_to_epsilon(d->children[0]);
    case RuleId::EWI: {
      auto c = derivation_to_epsilon(d->children[0]);
      auto p1 = rule1(E, RuleId::ExREps, std::move(c),
                      with_term(prE, to_epsilon(d->params.term)));
      auto instE = instance(prE, mk_eps(prE->name, prE->lhs));
      auto p2 = rule1(E, RuleId::ExLEps, id_node(E, instE), with_principal(prE));
      return rule2(E, RuleId::Cut, std::move(p1), std::move(p2), with_principal(prE));
    }
    case RuleId::UWI: {
      auto c = derivation_to_epsilon(d->children[0]);
      auto p2 = rule1(E, RuleId::AllLEps, std::move(c),
                      with_term(prE, to_epsilon(d->params.term)));
      auto instE = instance(prE, mk_eps(prE->name, mk_neg(prE->lhs)));
      auto p1 = rule1(E, RuleId::AllREps, id_node(E, instE), with_principal(prE));
      return rule2(E, RuleId::Cut, std::move(p1), std::move(p2), with_principal(prE));
    }
    case RuleId::ExLWI:
      return rule1(E, RuleId::ExLEps, derivation_to_epsilon(d->children[0]),
                   with_principal(prE));
    case RuleId::ExRWI:
      return rule1(E, RuleId::ExREps, derivation_to_epsilon(d->children[0]),
                   with_term(prE, mk_eps(prE->name, prE->lhs)));
    case RuleId::AllLWI:
      return rule1(E, RuleId::AllLEps, derivation_to_epsilon(d->children[0]),
                   with_term(prE, mk_eps(prE->name, mk_neg(prE->lhs))));
    case RuleId::AllRWI:
      return rule1(E, RuleId::AllREps, derivation_to_epsilon(d->children[0]),
                   with_principal(prE));
    default:
      throw TransformError(rule_name(d->rule) + " is not an STHC rule");
  }
}

DerivPtr derivation_to_sthc(const DerivPtr& d) {
  if (d->kind == NodeKind::Assumption)
    return mk_assumption(d->label, to_henkin(d->sequent));
  if (d->kind != NodeKind::Rule)
    throw TransformError("discharge nodes do not occur in the epsilon calculus");
  FormulaPtr prW = d->params.principal ? to_henkin(d->params.principal) : nullptr;
  switch (d->rule) {
    case RuleId::ID:
      return id_node(HC, prW);
    case RuleId::WL: case RuleId::WR:
    case RuleId::AndLI: case RuleId::AndRI: case RuleId::OrLI:
    case RuleId::OrRI: case RuleId::NegLI: case RuleId::NegRI:
    case RuleId::Cut: {
      std::vector<DerivPtr> ch;
      for (auto& c : d->children) ch.push_back(derivation_to_sthc(c));
      return mk_rule(HC, d->rule, std::move(ch), with_principal(prW));
    }
    case RuleId::ExREps: {
      auto e = rule1(HC, RuleId::EWI, derivation_to_sthc(d->children[0]),
                     with_term(prW, to_henkin(d->params.term)));
      return rule1(HC, RuleId::ExRWI, std::move(e), with_principal(prW));
    }
    case RuleId::ExLEps:
      return rule1(HC, RuleId::ExLWI, derivation_to_sthc(d->children[0]),
                   with_principal(prW));
    case RuleId::AllLEps: {
      auto u = rule1(HC, RuleId::UWI, derivation_to_sthc(d->children[0]),
                     with_term(prW, to_henkin(d->params.term)));
      return rule1(HC, RuleId::AllLWI, std::move(u), with_principal(prW));
    }
    case RuleId::AllREps: {
      // The epsilon instance comes back as an existential witness; exchange
      // it for the universal witness before closing the quantifier.
      auto we = mk_ewitness(prW->name, mk_neg(prW->lhs));
      auto w = rule1(HC, RuleId::WExchRE, derivation_to_sthc(d->children[0]),
                     with_term(instance(prW, we), wa_of(prW)));
      return rule1(HC, RuleId::AllRWI, std::move(w), with_principal(prW));
    }
    default:
      throw TransformError(rule_name(d->rule) + " is not an epsilon calculus rule");
  }
}

// ---------------------------------------------------------------------------
// The EW round trip on formulas.

namespace {

// First universal witness subterm sitting at a position where none of its
// free variables are bound, in preorder.
TermPtr first_free_uwitness(const TermPtr& t, const std::set<std::string>& bound);

TermPtr first_free_uwitness(const FormulaPtr& f, std::set<std::string> bound) {
  switch (f->tag) {
    case Formula::Tag::Atom:
      for (auto& a : f->args)
        if (auto w = first_free_uwitness(a, bound)) return w;
      return nullptr;
    case Formula::Tag::Neg:
      return first_free_uwitness(f->lhs, std::move(bound));
    case Formula::Tag::Conj:
    case Formula::Tag::Disj:
      if (auto w = first_free_uwitness(f->lhs, bound)) return w;
      return first_free_uwitness(f->rhs, std::move(bound));
    case Formula::Tag::Forall:
    case Formula::Tag::Exists:
      bound.insert(f->name);
      return first_free_uwitness(f->lhs, std::move(bound));
  }
  return nullptr;
}

TermPtr first_free_uwitness(const TermPtr& t, const std::set<std::string>& bound) {
  switch (t->tag) {
    case Term::Tag::Var:
      return nullptr;
    case Term::Tag::App:
      for (auto& a : t->args)
        if (auto w = first_free_uwitness(a, bound)) return w;
      return nullptr;
    case Term::Tag::UWitness: {
      bool captured = false;
      for (auto& v : free_vars(t))
        if (bound.count(v)) captured = true;
      if (!captured) return t;
      auto inner = bound;
      inner.insert(t->bound);
      return first_free_uwitness(t->body, std::move(inner));
    }
    case Term::Tag::EWitness: case Term::Tag::Eps: {
      auto inner = bound;
      inner.insert(t->bound);
      return first_free_uwitness(t->body, std::move(inner));
    }
  }
  return nullptr;
}

}  // namespace

DerivationPair ew_roundtrip(const FormulaPtr& phi) {
  FormulaPtr target = to_henkin(to_epsilon(phi));
  if (equal(phi, target)) return {id_node(HC, phi), id_node(HC, phi)};
  TermPtr w = first_free_uwitness(phi, {});
  if (!w)
    throw TransformError(
        "a universal witness sits in a bound position; no exchange rule reaches it");
  TermPtr we = mk_ewitness(w->bound, mk_neg(w->body));
  FormulaPtr phi2 = replace_term(phi, w, we);
  DerivationPair ih = ew_roundtrip(phi2);
  auto fwd = rule2(HC, RuleId::Cut,
                   rule1(HC, RuleId::WExchRI, id_node(HC, phi), with_term(phi, w)),
                   ih.forward, with_principal(phi2));
  auto bwd = rule2(HC, RuleId::Cut, ih.backward,
                   rule1(HC, RuleId::WExchLI, id_node(HC, phi), with_term(phi, w)),
                   with_principal(phi2));
  return {std::move(fwd), std::move(bwd)};
}

}  // namespace stp
