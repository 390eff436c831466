#include "stproof/interpolate.hpp"

#include <algorithm>
#include <map>

namespace stp {
namespace {

constexpr CalculusId MQ = CalculusId::MQST;
using R = RuleId;

[[noreturn]] void internal(const std::string& m) {
  throw TransformError("interpolate: internal error: " + m);
}
void require(bool ok, const char* m) {
  if (!ok) internal(m);
}

// ---------------------------------------------------------------------------
// Tree access and rebuilding.

const Derivation* get_node(const DerivPtr& d, const NodePath& p) {
  const Derivation* n = d.get();
  for (int i : p) {
    require(i >= 0 && i < static_cast<int>(n->children.size()), "bad node path");
    n = n->children[i].get();
  }
  return n;
}

DerivPtr replace_node(const DerivPtr& d, const NodePath& p, const DerivPtr& nn,
                      size_t at = 0) {
  if (at == p.size()) return nn;
  int i = p[at];
  std::vector<DerivPtr> kids = d->children;
  require(i >= 0 && i < static_cast<int>(kids.size()), "bad node path");
  kids[i] = replace_node(kids[i], p, nn, at + 1);
  return mk_rule(MQ, d->rule, std::move(kids), d->params, d->binds);
}

template <class F>
DerivPtr map_asms(const DerivPtr& n, const F& f) {
  if (n->kind == NodeKind::Assumption) return f(n);
  if (n->kind != NodeKind::Rule || n->children.empty()) return n;
  bool changed = false;
  std::vector<DerivPtr> kids;
  kids.reserve(n->children.size());
  for (auto& c : n->children) {
    DerivPtr nc = map_asms(c, f);
    changed = changed || nc != c;
    kids.push_back(std::move(nc));
  }
  if (!changed) return n;
  return mk_rule(MQ, n->rule, std::move(kids), n->params, n->binds);
}

// Replaces every open assumption carrying the label by the replacement tree.
DerivPtr replace_asm(const DerivPtr& d, const std::string& label, const DerivPtr& repl) {
  return map_asms(d, [&](const DerivPtr& n) -> DerivPtr {
    if (n->label != label) return n;
    require(ms_equal(n->sequent, repl->sequent), "replacement changes the premise");
    return repl;
  });
}

// Turns every open assumption carrying the label into a discharged leaf with
// the same sequent.
DerivPtr discharge_asm(const DerivPtr& d, const std::string& label, const std::string& dl) {
  return map_asms(d, [&](const DerivPtr& n) -> DerivPtr {
    return n->label == label ? mk_discharged(dl, n->sequent) : n;
  });
}

DerivPtr relabel_asms(const DerivPtr& d, const std::string& nl) {
  return map_asms(d, [&](const DerivPtr& n) -> DerivPtr {
    return mk_assumption(nl, n->sequent);
  });
}

// Grafts repl over every open assumption (used for the tau-pair trees, whose
// only open premises are the sequent being rewritten).
DerivPtr graft_all(const DerivPtr& d, const DerivPtr& repl) {
  return map_asms(d, [&](const DerivPtr& n) -> DerivPtr {
    require(ms_equal(n->sequent, repl->sequent), "graft changes the premise");
    return repl;
  });
}

DerivPtr replace_asm_map(const DerivPtr& d, const std::map<std::string, DerivPtr>& m) {
  return map_asms(d, [&](const DerivPtr& n) -> DerivPtr {
    auto it = m.find(n->label);
    if (it == m.end()) return n;
    require(ms_equal(n->sequent, it->second->sequent), "replacement changes the premise");
    return it->second;
  });
}

bool has_asm(const DerivPtr& n, const std::string& label) {
  if (n->kind == NodeKind::Assumption) return n->label == label;
  for (auto& c : n->children)
    if (has_asm(c, label)) return true;
  return false;
}

// Opens every discharged leaf that the enclosing sidetrack application with
// the given label would consume, skipping minors of inner applications that
// rebind the same label.
DerivPtr open_consumed(const DerivPtr& n, const std::string& binds, const std::string& nl) {
  if (n->kind == NodeKind::Discharged)
    return n->label == binds ? mk_assumption(nl, n->sequent) : n;
  if (n->kind != NodeKind::Rule || n->children.empty()) return n;
  std::vector<DerivPtr> kids;
  kids.reserve(n->children.size());
  for (size_t i = 0; i < n->children.size(); ++i) {
    bool shadowed = is_sidetrack(n->rule) && i == 1 && n->binds == binds;
    kids.push_back(shadowed ? n->children[i] : open_consumed(n->children[i], binds, nl));
  }
  return mk_rule(MQ, n->rule, std::move(kids), n->params, n->binds);
}

void collect_opens(const DerivPtr& n, std::vector<const Derivation*>& out) {
  if (n->kind == NodeKind::Assumption) {
    out.push_back(n.get());
    return;
  }
  for (auto& c : n->children) collect_opens(c, out);
}

void collect_labels(const DerivPtr& n, std::set<std::string>& out) {
  if (!n->label.empty()) out.insert(n->label);
  if (!n->binds.empty()) out.insert(n->binds);
  for (auto& c : n->children) collect_labels(c, out);
}

// ---------------------------------------------------------------------------
// Recursion state.

struct Ctx {
  const Signature& sig;
  std::map<std::string, SplitSide> tag;
  std::set<std::string> vavoid;
  std::set<std::string> lavoid;
  int vc = 0;
  int lc = 0;

  std::string fresh_v() {
    std::string s;
    do s = "w" + std::to_string(++vc);
    while (vavoid.count(s));
    vavoid.insert(s);
    return s;
  }
  std::string fresh_l() {
    std::string s;
    do s = "i" + std::to_string(++lc);
    while (lavoid.count(s));
    lavoid.insert(s);
    return s;
  }
  SplitSide side_of(const std::string& label) const {
    auto it = tag.find(label);
    require(it != tag.end(), "premise without a side assignment");
    return it->second;
  }
};

// Interpolating set with certificates for the subderivation at hand:
// left[i] derives I[i] from the X1-side premises; right derives the
// conclusion from X2-side premises plus one open assumption labeled
// labels[i] per member.
struct Res {
  std::vector<Sequent> I;
  std::vector<std::string> labels;
  std::vector<DerivPtr> left;
  DerivPtr right;
};

std::set<std::string> side_frees(const DerivPtr& d, const Ctx& ctx, SplitSide side) {
  std::vector<const Derivation*> opens;
  collect_opens(d, opens);
  std::set<std::string> out;
  for (auto* o : opens)
    if (ctx.side_of(o->label) == side)
      for (auto& v : free_vars(o->sequent)) out.insert(v);
  return out;
}

// ---------------------------------------------------------------------------
// Member rewrites: tau form, bundling, quantification.

bool tau_trivial(const Sequent& s) { return s.ante.empty() && s.succ.size() == 1; }

// Rewrites member i into its single-formula form, updating both certificates.
void ensure_tau(Res& r, size_t i, Ctx& ctx) {
  if (tau_trivial(r.I[i])) return;
  DerivationPair pr = tau_interderive(r.I[i], MQ, ctx.sig);
  r.left[i] = graft_all(pr.forward, r.left[i]);
  r.right = replace_asm(r.right, r.labels[i], relabel_asms(pr.backward, r.labels[i]));
  r.I[i] = pr.forward->sequent;
}

// Combines the given members (at least two) into their conjunction bundle so
// that a shared variable can be bound by a single quantifier.
void merge_members(Res& r, const std::vector<size_t>& idxs, Ctx& ctx) {
  for (size_t i : idxs) ensure_tau(r, i, ctx);
  std::vector<Sequent> xs;
  for (size_t i : idxs) xs.push_back(r.I[i]);
  BundlePair bp = bundle_interderive(xs, MQ);
  std::map<std::string, DerivPtr> grafts;
  for (size_t k = 0; k < idxs.size(); ++k)
    grafts["s" + std::to_string(k + 1)] = r.left[idxs[k]];
  DerivPtr fl = replace_asm_map(bp.forward, grafts);
  std::string nl = ctx.fresh_l();
  for (size_t k = 0; k < idxs.size(); ++k)
    r.right = replace_asm(r.right, r.labels[idxs[k]], relabel_asms(bp.backward[k], nl));
  size_t keep = idxs[0];
  r.I[keep] = bp.forward->sequent;
  r.labels[keep] = nl;
  r.left[keep] = fl;
  for (size_t k = idxs.size(); k-- > 1;) {
    r.I.erase(r.I.begin() + idxs[k]);
    r.labels.erase(r.labels.begin() + idxs[k]);
    r.left.erase(r.left.begin() + idxs[k]);
  }
}

std::vector<size_t> members_with(const Res& r, const std::string& v) {
  std::vector<size_t> out;
  for (size_t i = 0; i < r.I.size(); ++i)
    if (free_vars(r.I[i]).count(v)) out.push_back(i);
  return out;
}

// Universally binds v in member i. Left gains the eigenvariable step, right
// recovers the instance from the quantified premise.
void bind_univ(Res& r, size_t i, const std::string& v, Ctx& ctx) {
  ensure_tau(r, i, ctx);
  FormulaPtr phi = r.I[i].succ[0];
  FormulaPtr pr = mk_forall(v, phi);
  Sequent qs{{}, {pr}};
  RuleParams lp;
  lp.eigen = v;
  lp.principal = pr;
  r.left[i] = mk_rule(MQ, R::AllRI, {r.left[i]}, lp);
  RuleParams rp;
  rp.term = mk_var(v);
  rp.principal = pr;
  r.right = replace_asm(r.right, r.labels[i],
                        mk_rule(MQ, R::AllRE, {mk_assumption(r.labels[i], qs)}, rp));
  r.I[i] = qs;
}

// Universally quantifies, member by member in index order and variable by
// variable in lexicographic order, every member variable outside avoid.
void univ_stage(Res& r, const std::set<std::string>& avoid, Ctx& ctx) {
  for (size_t i = 0; i < r.I.size(); ++i)
    for (const std::string& v : free_vars(r.I[i]))
      if (!avoid.count(v)) bind_univ(r, i, v, ctx);
}

// Existential binding on the right side works by consuming the instance
// premises with a sidetrack application wrapped around the whole right
// certificate. When the enclosing step still has to add a rule below the
// current right conclusion (the quantifier introduction cases), the wraps
// are planned first and applied after that rule, so that the eigenvariable
// conditions are evaluated against the final conclusion.
struct ChainLink {
  std::string v;
  FormulaPtr pr;
  std::string dl;
};

// One chain per member, links in binding order (innermost first).
using ExistPlan = std::map<size_t, std::vector<ChainLink>>;

ExistPlan exist_plan(Res& r, const std::set<std::string>& avoid, Ctx& ctx) {
  std::set<std::string> vars;
  for (auto& m : r.I)
    for (auto& v : free_vars(m))
      if (!avoid.count(v)) vars.insert(v);
  // A variable shared between members must be bound by one quantifier, so
  // the members sharing it are bundled into a single conjunction first.
  for (const std::string& v : vars) {
    std::vector<size_t> idxs = members_with(r, v);
    if (idxs.size() > 1) merge_members(r, idxs, ctx);
  }
  ExistPlan plan;
  for (const std::string& v : vars) {
    std::vector<size_t> idxs = members_with(r, v);
    if (idxs.empty()) continue;
    size_t i = idxs[0];
    ensure_tau(r, i, ctx);
    FormulaPtr phi = r.I[i].succ[0];
    FormulaPtr pr = mk_exists(v, phi);
    RuleParams lp;
    lp.term = mk_var(v);
    lp.principal = pr;
    r.left[i] = mk_rule(MQ, R::ExRI, {r.left[i]}, lp);
    std::string dl = ctx.fresh_l();
    if (plan[i].empty()) r.right = discharge_asm(r.right, r.labels[i], dl);
    plan[i].push_back({v, pr, dl});
    r.I[i] = Sequent{{}, {pr}};
  }
  return plan;
}

void exist_apply(Res& r, const ExistPlan& plan, Ctx& ctx) {
  for (auto& [member, links] : plan) {
    for (size_t k = 0; k < links.size(); ++k) {
      Sequent ms{{}, {links[k].pr}};
      DerivPtr major = k + 1 < links.size()
                           ? mk_discharged(links[k + 1].dl, ms)
                           : mk_assumption(r.labels[member], ms);
      // Member rewrites at later steps may land new leaves inside this
      // binder's scope, so its eigenvariable must be one that no member can
      // ever mention: rename to a globally fresh name.
      std::string z = ctx.fresh_v();
      DerivPtr minor = rename_free(r.right, links[k].v, z, MQ);
      RuleParams p;
      p.eigen = z;
      p.principal = links[k].pr;
      r.right = mk_rule(MQ, R::ExRE, {std::move(major), minor}, p, links[k].dl);
    }
  }
}

// Immediate existential binding of one variable; used ahead of the sidetrack
// fix-up, where the right certificate already has its final conclusion.
void exist_var_now(Res& r, const std::string& v, Ctx& ctx) {
  std::vector<size_t> idxs = members_with(r, v);
  if (idxs.empty()) return;
  if (idxs.size() > 1) {
    merge_members(r, idxs, ctx);
    idxs = members_with(r, v);
    require(idxs.size() == 1, "merge lost the shared variable");
  }
  size_t i = idxs[0];
  ensure_tau(r, i, ctx);
  FormulaPtr phi = r.I[i].succ[0];
  FormulaPtr pr = mk_exists(v, phi);
  RuleParams lp;
  lp.term = mk_var(v);
  lp.principal = pr;
  r.left[i] = mk_rule(MQ, R::ExRI, {r.left[i]}, lp);
  Sequent qs{{}, {pr}};
  std::string dl = ctx.fresh_l();
  RuleParams p;
  p.eigen = v;
  p.principal = pr;
  r.right = mk_rule(MQ, R::ExRE,
                    {mk_assumption(r.labels[i], qs), discharge_asm(r.right, r.labels[i], dl)},
                    p, dl);
  r.I[i] = qs;
}

// ---------------------------------------------------------------------------
// The recursion.

Res go(const DerivPtr& d, Ctx& ctx);

// Root elimination: split off the topmost elimination of the main branch,
// recurse on the remainder with a fresh premise in its place, and mend the
// certificates so that the terminal assumption itself becomes the premise.
Res peel(DerivPtr d, Ctx& ctx) {
  std::vector<NodePath> mb = main_branch(d);
  require(mb.size() >= 2, "main branch too short");
  size_t ei = mb.size() - 2;
  while (!is_elimination(get_node(d, mb[ei])->rule)) {
    const Derivation* n = get_node(d, mb[ei]);
    require(n->rule == R::CL || n->rule == R::CR,
            "unexpected rule between the terminal premise and the elimination");
    require(ei > 0, "main branch without elimination");
    --ei;
  }
  const NodePath& pE = mb[ei];

  // Rename a sidetrack eigenvariable to a globally fresh one so that the
  // quantification stages and the fix-up wraps never collide with it.
  std::string z;
  if (is_sidetrack(get_node(d, pE)->rule)) {
    const Derivation* e = get_node(d, pE);
    z = ctx.fresh_v();
    DerivPtr minor = rename_free(e->children[1], e->params.eigen, z, MQ);
    RuleParams np = e->params;
    np.eigen = z;
    d = replace_node(d, pE, mk_rule(MQ, e->rule, {e->children[0], minor}, np, e->binds));
  }
  const Derivation* e = get_node(d, pE);
  const Derivation* a = get_node(d, mb.back());
  require(a->kind == NodeKind::Assumption, "main branch terminal is not open");
  SplitSide sa = ctx.side_of(a->label);
  bool side1 = sa == SplitSide::X1;

  // Contractions between the terminal assumption and the elimination,
  // topmost first; the bridge rebuilds them over a fresh assumption leaf.
  std::vector<const Derivation*> cchain;
  for (size_t j = mb.size() - 2; j > ei; --j) cchain.push_back(get_node(d, mb[j]));
  auto bridge = [&]() {
    DerivPtr b = mk_assumption(a->label, a->sequent);
    for (auto* c : cchain) b = mk_rule(MQ, c->rule, {b}, c->params);
    return b;
  };

  std::string lstar = ctx.fresh_l();
  ctx.tag[lstar] = sa;
  std::set<std::string> avoid_u = side_frees(d, ctx, SplitSide::X1);
  std::set<std::string> avoid_e = side_frees(d, ctx, SplitSide::X2);
  for (auto& v : free_vars(d->sequent)) avoid_e.insert(v);

  if (!is_sidetrack(e->rule)) {
    DerivPtr dnext = replace_node(d, pE, mk_assumption(lstar, e->sequent));
    Res r = go(dnext, ctx);
    DerivPtr fix = mk_rule(MQ, e->rule, {bridge()}, e->params);
    if (side1)
      for (auto& l : r.left) l = replace_asm(l, lstar, fix);
    else
      r.right = replace_asm(r.right, lstar, fix);
    if (e->rule == R::AllRE || e->rule == R::ExLE) {
      // The instantiating term vanishes from the premise; requantify so the
      // members only mention what both sides still share.
      univ_stage(r, avoid_u, ctx);
      ExistPlan plan = exist_plan(r, avoid_e, ctx);
      exist_apply(r, plan, ctx);
    }
    return r;
  }

  // Sidetrack elimination: the recursion continues into the minor premise
  // with the consumed leaves opened up; afterwards a copy of the application
  // over the terminal assumption discharges them again.
  DerivPtr dnext = replace_node(d, pE, open_consumed(e->children[1], e->binds, lstar));
  Res r = go(dnext, ctx);
  exist_var_now(r, z, ctx);
  DerivPtr major = bridge();
  auto wrap = [&](const DerivPtr& cert) {
    if (!has_asm(cert, lstar)) return cert;
    std::string dl = ctx.fresh_l();
    return mk_rule(MQ, e->rule, {major, discharge_asm(cert, lstar, dl)}, e->params, dl);
  };
  if (side1)
    for (auto& l : r.left) l = wrap(l);
  else
    r.right = wrap(r.right);
  univ_stage(r, avoid_u, ctx);
  ExistPlan plan = exist_plan(r, avoid_e, ctx);
  exist_apply(r, plan, ctx);
  return r;
}

Res go(const DerivPtr& d, Ctx& ctx) {
  if (d->kind == NodeKind::Assumption) {
    Res r;
    if (ctx.side_of(d->label) == SplitSide::X1) {
      r.I = {d->sequent};
      r.labels = {ctx.fresh_l()};
      r.left = {mk_assumption(d->label, d->sequent)};
      r.right = mk_assumption(r.labels[0], d->sequent);
    } else {
      r.right = d;
    }
    return r;
  }
  require(d->kind == NodeKind::Rule, "dangling discharged assumption");
  if (d->rule == R::GID) {
    Res r;
    r.right = d;
    return r;
  }
  switch (d->rule) {
    case R::CL:
    case R::CR:
    case R::NegLI:
    case R::NegRI:
    case R::AndLI:
    case R::OrRI: {
      // Vocabulary-preserving single-premise steps pass the set through.
      Res r = go(d->children[0], ctx);
      r.right = mk_rule(MQ, d->rule, {r.right}, d->params);
      return r;
    }
    case R::AndRI:
    case R::OrLI: {
      Res a = go(d->children[0], ctx);
      Res b = go(d->children[1], ctx);
      a.I.insert(a.I.end(), b.I.begin(), b.I.end());
      a.labels.insert(a.labels.end(), b.labels.begin(), b.labels.end());
      a.left.insert(a.left.end(), b.left.begin(), b.left.end());
      a.right = mk_rule(MQ, d->rule, {a.right, b.right}, d->params);
      return a;
    }
    case R::AllLI:
    case R::ExRI:
    case R::AllRI:
    case R::ExLI: {
      // A term or eigenvariable disappears from the conclusion; close the
      // members over everything the sides no longer share. The existential
      // wraps go outside the introduction so its conclusion, not the
      // premise, constrains their eigenvariables.
      Res r = go(d->children[0], ctx);
      std::set<std::string> avoid_u = side_frees(d, ctx, SplitSide::X1);
      std::set<std::string> avoid_e = side_frees(d, ctx, SplitSide::X2);
      for (auto& v : free_vars(d->sequent)) avoid_e.insert(v);
      univ_stage(r, avoid_u, ctx);
      ExistPlan plan = exist_plan(r, avoid_e, ctx);
      RuleParams np = d->params;
      DerivPtr child = r.right;
      if (!np.eigen.empty()) {
        // The replayed binder gets a fresh eigenvariable for the same reason
        // as the existential wraps: later member rewrites inside its scope
        // must never be able to mention it.
        std::string z = ctx.fresh_v();
        child = rename_free(child, np.eigen, z, MQ);
        for (auto& [m, links] : plan)
          for (auto& lk : links)
            if (lk.v == np.eigen) lk.v = z;
        np.eigen = z;
      }
      r.right = mk_rule(MQ, d->rule, {child}, np);
      exist_apply(r, plan, ctx);
      return r;
    }
    default:
      require(is_elimination(d->rule), "unexpected rule in a normal derivation");
      return peel(d, ctx);
  }
}

void dedupe(Res& r) {
  for (size_t i = 0; i < r.I.size(); ++i)
    for (size_t j = i + 1; j < r.I.size();) {
      if (ms_equal(r.I[i], r.I[j])) {
        r.right = replace_asm(r.right, r.labels[j], mk_assumption(r.labels[i], r.I[i]));
        r.I.erase(r.I.begin() + j);
        r.labels.erase(r.labels.begin() + j);
        r.left.erase(r.left.begin() + j);
      } else {
        ++j;
      }
    }
}

// ---------------------------------------------------------------------------
// Vocabulary.

void rels_formula(const FormulaPtr& f, std::set<std::string>& out);

void rels_term(const TermPtr& t, std::set<std::string>& out) {
  if (t->body) rels_formula(t->body, out);
  for (auto& a : t->args) rels_term(a, out);
}

void rels_formula(const FormulaPtr& f, std::set<std::string>& out) {
  switch (f->tag) {
    case Formula::Tag::Atom:
      out.insert(f->name);
      for (auto& a : f->args) rels_term(a, out);
      return;
    case Formula::Tag::Neg:
    case Formula::Tag::Forall:
    case Formula::Tag::Exists:
      rels_formula(f->lhs, out);
      return;
    case Formula::Tag::Conj:
    case Formula::Tag::Disj:
      rels_formula(f->lhs, out);
      rels_formula(f->rhs, out);
      return;
  }
}

std::set<std::string> rels_side(const std::vector<Sequent>& xs) {
  std::set<std::string> out;
  for (auto& s : xs)
    for (auto& r : relation_symbols(s)) out.insert(r);
  return out;
}

std::set<std::string> fvs_side(const std::vector<Sequent>& xs) {
  std::set<std::string> out;
  for (auto& s : xs)
    for (auto& v : free_vars(s)) out.insert(v);
  return out;
}

}  // namespace

std::set<std::string> relation_symbols(const Sequent& s) {
  std::set<std::string> out;
  for (auto& f : s.ante) rels_formula(f, out);
  for (auto& f : s.succ) rels_formula(f, out);
  return out;
}

Sequent quantify_sequent(const Sequent& s, const std::string& x, bool universal,
                         const Signature& sig) {
  if (!free_vars(s).count(x)) return s;
  FormulaPtr t = tau(s, sig);
  return Sequent{{}, {universal ? mk_forall(x, t) : mk_exists(x, t)}};
}

InterpolationResult interpolate(const DerivPtr& d, const Split& split,
                                const Signature& sig) {
  if (!d) throw TransformError("interpolate: empty derivation");
  CheckReport rep = check(d, MQ);
  if (!is_normal(d))
    throw TransformError("interpolate: the derivation is not normal");
  for (auto& op : rep.open_premises)
    if (!split.count(op.label))
      throw TransformError("interpolate: open premise '" + op.label +
                           "' has no side assignment");

  Ctx ctx{sig, {}, {}, {}};
  for (auto& [l, s] : split) ctx.tag[l] = s;
  ctx.vavoid = derivation_vars(d);
  for (auto& [k, v] : sig.relations) ctx.vavoid.insert(k);
  for (auto& [k, v] : sig.functions) ctx.vavoid.insert(k);
  collect_labels(d, ctx.lavoid);

  Res r = go(d, ctx);
  dedupe(r);

  std::vector<Sequent> x1, x2;
  for (auto& op : rep.open_premises)
    (split.at(op.label) == SplitSide::X1 ? x1 : x2).push_back(op.sequent);

  InterpolationResult out;
  out.interpolant = r.I;
  out.d_left = r.left;
  out.d_right = r.right;
  std::vector<Sequent> rhs = x2;
  rhs.push_back(rep.conclusion);
  for (auto& s : rels_side(x1))
    if (rels_side(rhs).count(s)) out.shared_relations.insert(s);
  for (auto& v : fvs_side(x1))
    if (fvs_side(rhs).count(v)) out.shared_free_vars.insert(v);

  std::vector<std::string> fails;
  if (!verify_interpolation(out, x1, x2, rep.conclusion, &fails))
    internal("certificate verification failed: " + (fails.empty() ? "?" : fails[0]));
  return out;
}

bool verify_interpolation(const InterpolationResult& r, const std::vector<Sequent>& x1,
                          const std::vector<Sequent>& x2, const Sequent& s,
                          std::vector<std::string>* failures) {
  std::vector<std::string> f;
  auto member_of = [](const Sequent& q, const std::vector<Sequent>& xs) {
    for (auto& x : xs)
      if (ms_equal(q, x)) return true;
    return false;
  };

  if (r.d_left.size() != r.interpolant.size()) {
    f.push_back("one left certificate per interpolant member is required");
  } else {
    for (size_t i = 0; i < r.d_left.size(); ++i) {
      if (!r.d_left[i]) {
        f.push_back("left certificate " + std::to_string(i) + " is missing");
        continue;
      }
      try {
        CheckReport rep = check(r.d_left[i], CalculusId::MQST);
        if (!ms_equal(rep.conclusion, r.interpolant[i]))
          f.push_back("left certificate " + std::to_string(i) +
                      " does not conclude its member");
        for (auto& op : rep.open_premises)
          if (!member_of(op.sequent, x1))
            f.push_back("left certificate " + std::to_string(i) +
                        " uses a premise outside X1: " + print(op.sequent));
      } catch (const RuleViolation& e) {
        f.push_back("left certificate " + std::to_string(i) +
                    " does not check: " + e.what());
      }
    }
  }

  if (!r.d_right) {
    f.push_back("right certificate is missing");
  } else {
    try {
      CheckReport rep = check(r.d_right, CalculusId::MQST);
      if (!ms_equal(rep.conclusion, s))
        f.push_back("right certificate does not conclude the sequent");
      for (auto& op : rep.open_premises)
        if (!member_of(op.sequent, x2) && !member_of(op.sequent, r.interpolant))
          f.push_back("right certificate uses a premise outside X2 and the interpolant: " +
                      print(op.sequent));
    } catch (const RuleViolation& e) {
      f.push_back(std::string("right certificate does not check: ") + e.what());
    }
  }

  std::vector<Sequent> rhs = x2;
  rhs.push_back(s);
  std::set<std::string> rel1 = rels_side(x1), rel2 = rels_side(rhs);
  std::set<std::string> fv1 = fvs_side(x1), fv2 = fvs_side(rhs);
  for (auto& m : r.interpolant) {
    for (auto& rl : relation_symbols(m)) {
      if (!rel1.count(rl))
        f.push_back("relation " + rl + " does not occur in X1");
      if (!rel2.count(rl))
        f.push_back("relation " + rl + " does not occur in X2 or the conclusion");
    }
    for (auto& v : free_vars(m)) {
      if (!fv1.count(v)) f.push_back("variable " + v + " is not free in X1");
      if (!fv2.count(v))
        f.push_back("variable " + v + " is not free in X2 or the conclusion");
    }
  }

  if (failures) *failures = f;
  return f.empty();
}

}  // namespace stp
