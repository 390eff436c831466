#include "stproof/normalize.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace stp {
namespace {

constexpr CalculusId MQ = CalculusId::MQST;

[[noreturn]] void internal(const std::string& msg) {
  throw TransformError("normalize: internal error: " + msg);
}

void require(bool ok, const std::string& msg) {
  if (!ok) internal(msg);
}

std::string path_str(const NodePath& p) {
  if (p.empty()) return "root";
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

const DerivPtr& get_node(const DerivPtr& root, const NodePath& p) {
  const DerivPtr* cur = &root;
  for (int i : p) cur = &(*cur)->children.at(i);
  return *cur;
}

DerivPtr replace_at(const DerivPtr& root, const NodePath& p, size_t i,
                    const DerivPtr& sub) {
  if (i == p.size()) return sub;
  auto ch = root->children;
  ch.at(p[i]) = replace_at(ch.at(p[i]), p, i + 1, sub);
  return mk_rule(MQ, root->rule, std::move(ch), root->params, root->binds);
}

DerivPtr replace_node(const DerivPtr& root, const NodePath& p, const DerivPtr& sub) {
  return replace_at(root, p, 0, sub);
}

NodePath parent_of(const NodePath& p) { return NodePath(p.begin(), p.end() - 1); }

bool is_contraction(RuleId r) { return r == RuleId::CL || r == RuleId::CR; }

FormulaPtr qinstance(const FormulaPtr& quant, const TermPtr& t) {
  return substitute(quant->lhs, quant->name, t);
}

// ---------------------------------------------------------------------------
// Discharge bookkeeping: which discharged leaves each sidetrack node consumes.

struct PendEntry {
  std::string label;
  NodePath path;
};

void pend_walk(const DerivPtr& d, NodePath& path,
               std::map<NodePath, std::vector<NodePath>>& consumed,
               std::vector<PendEntry>& out) {
  if (d->kind == NodeKind::Discharged) {
    out.push_back({d->label, path});
    return;
  }
  if (d->kind == NodeKind::Assumption) return;
  if (is_sidetrack(d->rule)) {
    std::vector<PendEntry> major, minor;
    path.push_back(0);
    pend_walk(d->children[0], path, consumed, major);
    path.pop_back();
    path.push_back(1);
    pend_walk(d->children[1], path, consumed, minor);
    path.pop_back();
    auto& bucket = consumed[path];
    for (auto& e : minor) {
      if (e.label == d->binds)
        bucket.push_back(e.path);
      else
        out.push_back(std::move(e));
    }
    for (auto& e : major) out.push_back(std::move(e));
    return;
  }
  for (size_t i = 0; i < d->children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    pend_walk(d->children[i], path, consumed, out);
    path.pop_back();
  }
}

std::map<NodePath, std::vector<NodePath>> sidetrack_consumption(const DerivPtr& d) {
  std::map<NodePath, std::vector<NodePath>> consumed;
  NodePath path;
  std::vector<PendEntry> out;
  pend_walk(d, path, consumed, out);
  return consumed;
}

void collect_labels_rec(const DerivPtr& d, std::set<std::string>& out) {
  if (!d->label.empty()) out.insert(d->label);
  if (!d->binds.empty()) out.insert(d->binds);
  for (auto& c : d->children) collect_labels_rec(c, out);
}

std::set<std::string> collect_labels(const DerivPtr& d) {
  std::set<std::string> out;
  collect_labels_rec(d, out);
  return out;
}

void discharged_labels_rec(const DerivPtr& d, std::set<std::string>& out) {
  if (d->kind == NodeKind::Discharged) out.insert(d->label);
  for (auto& c : d->children) discharged_labels_rec(c, out);
}

std::set<std::string> discharged_labels(const DerivPtr& d) {
  std::set<std::string> out;
  discharged_labels_rec(d, out);
  return out;
}

std::string fresh_label(const std::string& base, const std::set<std::string>& avoid) {
  for (int i = 1;; ++i) {
    auto cand = base + "_" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

// Renames a sidetrack node's binds label together with the discharged
// leaves it consumes. `sub` is the sidetrack node itself.
DerivPtr relabel_sidetrack(const DerivPtr& sub, const std::string& label) {
  auto cons = sidetrack_consumption(sub);
  auto it = cons.find(NodePath{});
  require(it != cons.end(), "relabel target is not a sidetrack application");
  DerivPtr out = sub;
  for (auto& lp : it->second) {
    auto leaf = get_node(out, lp);
    out = replace_node(out, lp, mk_discharged(label, leaf->sequent));
  }
  return mk_rule(MQ, out->rule, out->children, out->params, label);
}

std::set<std::string> params_free_vars(const RuleParams& p) {
  std::set<std::string> out;
  if (p.term)
    for (auto& v : free_vars(p.term)) out.insert(v);
  if (p.principal)
    for (auto& v : free_vars(p.principal)) out.insert(v);
  if (!p.eigen.empty()) out.insert(p.eigen);
  return out;
}

// Renames the eigenvariable of the rule node at `path` to a globally fresh
// name; the tree keeps its shape, so node paths stay valid.
DerivPtr refresh_eigen(const DerivPtr& root, const NodePath& path) {
  auto n = get_node(root, path);
  const std::string& y = n->params.eigen;
  require(!y.empty(), "eigenvariable refresh on a rule without one");
  auto avoid = derivation_vars(root);
  std::string z = fresh_var(y, avoid);
  size_t slot = is_sidetrack(n->rule) ? 1 : 0;
  auto ch = n->children;
  ch[slot] = rename_free(ch[slot], y, z, MQ);
  RuleParams p = n->params;
  p.eigen = z;
  return replace_node(root, path, mk_rule(MQ, n->rule, std::move(ch), std::move(p), n->binds));
}

RuleId matching_elim(RuleId intro) {
  switch (intro) {
    case RuleId::AndLI: return RuleId::AndLE;
    case RuleId::AndRI: return RuleId::AndRE;
    case RuleId::OrLI: return RuleId::OrLE;
    case RuleId::OrRI: return RuleId::OrRE;
    case RuleId::NegLI: return RuleId::NegLE;
    case RuleId::NegRI: return RuleId::NegRE;
    case RuleId::AllLI: return RuleId::AllLE;
    case RuleId::AllRI: return RuleId::AllRE;
    case RuleId::ExLI: return RuleId::ExLE;
    case RuleId::ExRI: return RuleId::ExRE;
    default: return RuleId::ID;  // no matching elimination
  }
}

void compound_gids(const DerivPtr& d, NodePath& path, std::vector<NodePath>& out) {
  if (d->kind == NodeKind::Rule && d->rule == RuleId::GID &&
      d->params.principal->tag != Formula::Tag::Atom)
    out.push_back(path);
  for (size_t i = 0; i < d->children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    compound_gids(d->children[i], path, out);
    path.pop_back();
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Segments.

int count_logical_symbols(const FormulaPtr& f) {
  switch (f->tag) {
    case Formula::Tag::Atom:
      return 0;
    case Formula::Tag::Neg:
    case Formula::Tag::Forall:
    case Formula::Tag::Exists:
      return 1 + count_logical_symbols(f->lhs);
    case Formula::Tag::Conj:
    case Formula::Tag::Disj:
      return 1 + count_logical_symbols(f->lhs) + count_logical_symbols(f->rhs);
  }
  return 0;
}

int count_logical_symbols(const Sequent& s) {
  int n = 0;
  for (auto& f : s.ante) n += count_logical_symbols(f);
  for (auto& f : s.succ) n += count_logical_symbols(f);
  return n;
}

namespace {

int build_segments(const DerivPtr& d, NodePath& path, std::vector<Segment>& segs) {
  std::vector<int> child_seg(d->children.size());
  for (size_t i = 0; i < d->children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    child_seg[i] = build_segments(d->children[i], path, segs);
    path.pop_back();
  }
  int seg;
  if (d->kind == NodeKind::Rule && is_contraction(d->rule))
    seg = child_seg[0];
  else if (d->kind == NodeKind::Rule && is_sidetrack(d->rule))
    seg = child_seg[1];
  else {
    seg = static_cast<int>(segs.size());
    segs.emplace_back();
  }
  segs[seg].nodes.push_back(path);
  return seg;
}

}  // namespace

std::vector<Segment> segments(const DerivPtr& d) {
  std::vector<Segment> segs;
  NodePath path;
  build_segments(d, path, segs);
  for (auto& sg : segs) {
    auto first = get_node(d, sg.nodes.front());
    sg.rank = count_logical_symbols(first->sequent);
    sg.starts_with_intro = first->kind == NodeKind::Rule && is_introduction(first->rule);
    sg.starts_with_gid = first->kind == NodeKind::Rule && first->rule == RuleId::GID;
    const NodePath& last = sg.nodes.back();
    if (!last.empty()) {
      auto parent = get_node(d, parent_of(last));
      sg.ends_at_major_elim = parent->kind == NodeKind::Rule &&
                              is_elimination(parent->rule) && last.back() == 0;
    }
  }
  std::sort(segs.begin(), segs.end(),
            [](const Segment& a, const Segment& b) { return a.nodes[0] < b.nodes[0]; });
  return segs;
}

std::vector<Segment> cut_segments(const DerivPtr& d) {
  std::vector<Segment> out;
  for (auto& sg : segments(d))
    if ((sg.starts_with_intro || sg.starts_with_gid) && sg.ends_at_major_elim)
      out.push_back(sg);
  return out;
}

bool is_normal(const DerivPtr& d) {
  {
    NodePath path;
    std::vector<NodePath> gids;
    compound_gids(d, path, gids);
    if (!gids.empty()) return false;
  }
  for (auto& [path, leaves] : sidetrack_consumption(d))
    if (leaves.empty()) return false;
  return cut_segments(d).empty();
}

// ---------------------------------------------------------------------------
// Normalization.

namespace {

using Meas = std::pair<int, long long>;

Meas measure_of(const std::vector<Segment>& cuts) {
  if (cuts.empty()) return {-1, 0};
  int r = 0;
  for (auto& s : cuts) r = std::max(r, s.rank);
  long long m = 0;
  for (auto& s : cuts)
    if (s.rank == r) m += static_cast<long long>(s.nodes.size());
  return {r, m};
}

// The rank-maximal cut segment whose first node lies deepest; ties go to the
// smallest path. Maximal depth guarantees that no rank-maximal segment sits
// inside a subtree the rewrite is about to duplicate or discard.
const Segment& select_segment(const std::vector<Segment>& cuts, int r) {
  const Segment* best = nullptr;
  for (auto& s : cuts) {
    if (s.rank != r) continue;
    if (!best || s.nodes[0].size() > best->nodes[0].size() ||
        (s.nodes[0].size() == best->nodes[0].size() && s.nodes[0] < best->nodes[0]))
      best = &s;
  }
  return *best;
}

struct StepResult {
  DerivPtr root;
  const char* kind;
  NodePath loc;
};

// The schema the discharged assumptions of a sidetrack application must
// match, for a major premise sequent `major`.
Sequent sidetrack_schema(RuleId rule, const Sequent& major, const FormulaPtr& pr,
                         const std::string& eigen) {
  auto inst = qinstance(pr, mk_var(eigen));
  if (rule == RuleId::ExRE) {
    require(ms_count(major.succ, pr) >= 1, "sidetrack principal missing from the major premise");
    return Sequent{major.ante, ms_add(ms_remove(major.succ, pr, 1), inst)};
  }
  require(ms_count(major.ante, pr) >= 1, "sidetrack principal missing from the major premise");
  return Sequent{ms_add(ms_remove(major.ante, pr, 1), inst), major.succ};
}

std::vector<NodePath> consumed_rel_paths(const DerivPtr& cur, const NodePath& ePath) {
  auto cons = sidetrack_consumption(cur);
  auto it = cons.find(ePath);
  require(it != cons.end(), "segment ends at a sidetrack without consumption data");
  std::vector<NodePath> rels;
  for (auto& lp : it->second)
    rels.emplace_back(lp.begin() + ePath.size() + 1, lp.end());
  return rels;
}

// A segment of length >= 2 ending at the major premise of an elimination:
// commute the elimination past the last sidetrack link, carrying any
// trailing contractions along, or past the trailing contraction when the
// segment has no sidetrack link.
StepResult step_long_segment(DerivPtr cur, const Segment& sg) {
  const NodePath ePath = parent_of(sg.nodes.back());

  int st_idx = -1;
  for (int i = static_cast<int>(sg.nodes.size()) - 1; i >= 1; --i) {
    auto n = get_node(cur, sg.nodes[i]);
    if (n->kind == NodeKind::Rule && is_sidetrack(n->rule)) {
      st_idx = i;
      break;
    }
  }

  if (st_idx >= 0) {
    const NodePath& stPath = sg.nodes[st_idx];
    bool e_side = is_sidetrack(get_node(cur, ePath)->rule);
    if (e_side) {
      // The sidetrack will sit below the commuted elimination, so its label
      // must not capture foreign pendings nor trip the major-premise check.
      auto st = get_node(cur, stPath);
      auto fl = fresh_label(st->binds, collect_labels(cur));
      cur = replace_node(cur, stPath, relabel_sidetrack(st, fl));
    }
    {
      auto E = get_node(cur, ePath);
      auto st = get_node(cur, stPath);
      auto clash = params_free_vars(E->params);
      if (e_side)
        for (auto& v : derivation_vars(E->children[1])) clash.insert(v);
      if (clash.count(st->params.eigen)) cur = refresh_eigen(cur, stPath);
    }
    auto E = get_node(cur, ePath);
    auto st = get_node(cur, stPath);
    DerivPtr inner = st->children[1];
    for (size_t i = st_idx + 1; i < sg.nodes.size(); ++i) {
      auto c = get_node(cur, sg.nodes[i]);
      inner = mk_rule(MQ, c->rule, {inner}, c->params);
    }
    DerivPtr inner_e =
        e_side ? mk_rule(MQ, E->rule, {inner, E->children[1]}, E->params, E->binds)
               : mk_rule(MQ, E->rule, {inner}, E->params);
    auto sub = mk_rule(MQ, st->rule, {st->children[0], inner_e}, st->params, st->binds);
    require(ms_equal(sub->sequent, E->sequent), "sidetrack permutation changed the conclusion");
    return {replace_node(cur, ePath, sub), "permute-sidetrack", ePath};
  }

  // All links are contractions; commute the elimination past the last one.
  auto C = get_node(cur, sg.nodes.back());
  auto E = get_node(cur, ePath);
  FormulaPtr c = C->params.principal;
  DerivPtr D = C->children[0];

  if (!is_sidetrack(E->rule)) {
    // Apply the elimination to the contraction's premise, then restore the
    // conclusion by contracting the surplus; when the contracted formula is
    // the elimination's principal this duplicates the elimination.
    Sequent target = E->sequent;
    DerivPtr t = mk_rule(MQ, E->rule, {D}, E->params);
    int guard = 0;
    while (!ms_equal(t->sequent, target)) {
      require(++guard <= 64, "contraction permutation does not converge");
      bool contracted = false;
      for (int side = 0; side < 2 && !contracted; ++side) {
        const auto& have = side ? t->sequent.succ : t->sequent.ante;
        const auto& want = side ? target.succ : target.ante;
        for (auto& f : have) {
          if (ms_count(have, f) > ms_count(want, f) && ms_count(have, f) >= 2) {
            t = mk_rule(MQ, side ? RuleId::CR : RuleId::CL, {t},
                        RuleParams{.principal = f});
            contracted = true;
            break;
          }
        }
      }
      if (!contracted) t = mk_rule(MQ, E->rule, {t}, E->params);
    }
    return {replace_node(cur, ePath, t), "permute-contraction", ePath};
  }

  bool c_succ = C->rule == RuleId::CR;
  bool e_succ = E->rule == RuleId::ExRE;
  if (c_succ == e_succ && equal(c, E->params.principal))
    throw TransformError(
        "normalize: unsupported derivation: a contraction on the principal formula "
        "feeds the major premise of " + rule_name(E->rule));

  // Move the contraction into the discharged assumptions: each consumed leaf
  // gains one copy of the contracted formula and contracts it away.
  Sequent schema_new = sidetrack_schema(E->rule, D->sequent, E->params.principal,
                                        E->params.eigen);
  auto rels = consumed_rel_paths(cur, ePath);
  DerivPtr minor = E->children[1];
  for (auto& rel : rels) {
    auto leaf = get_node(minor, rel);
    auto repl = mk_rule(MQ, C->rule, {mk_discharged(leaf->label, schema_new)}, C->params);
    require(ms_equal(repl->sequent, leaf->sequent),
            "contraction permutation broke a discharged assumption");
    minor = replace_node(minor, rel, repl);
  }
  auto sub = mk_rule(MQ, E->rule, {D, minor}, E->params, E->binds);
  require(ms_equal(sub->sequent, E->sequent), "contraction permutation changed the conclusion");
  return {replace_node(cur, ePath, sub), "permute-contraction", ePath};
}

// A length-one segment headed by a generalized identity instance: the
// elimination collapses into a smaller identity instance.
StepResult step_gid(DerivPtr cur, const Segment& sg) {
  const NodePath ePath = parent_of(sg.nodes.back());
  auto g = get_node(cur, sg.nodes[0]);
  auto E = get_node(cur, ePath);
  FormulaPtr phi = g->params.principal;
  DerivPtr sub;
  if (!is_sidetrack(E->rule)) {
    require(ms_count(E->sequent.ante, phi) >= 1 && ms_count(E->sequent.succ, phi) >= 1,
            "identity principal vanished from the eliminated sequent");
    sub = mk_gid(E->sequent, phi);
  } else {
    auto rels = consumed_rel_paths(cur, ePath);
    DerivPtr minor = E->children[1];
    for (auto& rel : rels) {
      auto leaf = get_node(minor, rel);
      require(ms_count(leaf->sequent.ante, phi) >= 1 && ms_count(leaf->sequent.succ, phi) >= 1,
              "identity principal vanished from a discharged assumption");
      minor = replace_node(minor, rel, mk_gid(leaf->sequent, phi));
    }
    require(ms_equal(minor->sequent, E->sequent), "identity collapse changed the conclusion");
    sub = minor;
  }
  return {replace_node(cur, ePath, sub), "collapse-gid", ePath};
}

// A length-one segment where the elimination does not match the introduction
// right above it: commute the elimination past the introduction.
StepResult step_permute_intro(DerivPtr cur, const Segment& sg) {
  const NodePath& iPath = sg.nodes[0];
  const NodePath ePath = parent_of(iPath);

  if (!is_sidetrack(get_node(cur, ePath)->rule)) {
    {
      auto I = get_node(cur, iPath);
      auto E = get_node(cur, ePath);
      if ((I->rule == RuleId::AllRI || I->rule == RuleId::ExLI) && E->params.term &&
          free_vars(E->params.term).count(I->params.eigen))
        cur = refresh_eigen(cur, iPath);
    }
    auto I = get_node(cur, iPath);
    auto E = get_node(cur, ePath);
    std::vector<DerivPtr> prems;
    for (auto& ch : I->children) prems.push_back(mk_rule(MQ, E->rule, {ch}, E->params));
    auto sub = mk_rule(MQ, I->rule, std::move(prems), I->params);
    require(ms_equal(sub->sequent, E->sequent),
            "introduction permutation changed the conclusion");
    return {replace_node(cur, ePath, sub), "permute-intro", ePath};
  }

  {
    auto I = get_node(cur, iPath);
    auto E = get_node(cur, ePath);
    if (I->rule == RuleId::AndRI || I->rule == RuleId::OrLI)
      throw TransformError(
          "normalize: unsupported derivation: a two-premise introduction feeds the "
          "major premise of " + rule_name(E->rule));
    if (I->rule == RuleId::AllRI || I->rule == RuleId::ExLI)
      throw TransformError(
          "normalize: unsupported derivation: an eigenvariable introduction feeds the "
          "major premise of " + rule_name(E->rule));
    if (I->params.term && free_vars(I->params.term).count(E->params.eigen))
      cur = refresh_eigen(cur, ePath);
  }
  auto I = get_node(cur, iPath);
  auto E = get_node(cur, ePath);
  DerivPtr D = I->children[0];
  // The introduction moves into the discharged assumptions: each consumed
  // leaf assumes the pre-introduction schema and re-applies the rule.
  Sequent schema_new = sidetrack_schema(E->rule, D->sequent, E->params.principal,
                                        E->params.eigen);
  auto rels = consumed_rel_paths(cur, ePath);
  DerivPtr minor = E->children[1];
  for (auto& rel : rels) {
    auto leaf = get_node(minor, rel);
    auto repl = mk_rule(MQ, I->rule, {mk_discharged(leaf->label, schema_new)}, I->params);
    require(ms_equal(repl->sequent, leaf->sequent),
            "introduction permutation broke a discharged assumption");
    minor = replace_node(minor, rel, repl);
  }
  auto sub = mk_rule(MQ, E->rule, {D, minor}, E->params, E->binds);
  require(ms_equal(sub->sequent, E->sequent),
          "introduction permutation changed the conclusion");
  return {replace_node(cur, ePath, sub), "permute-intro", ePath};
}

// A matching introduction/elimination pair on the same formula occurrence:
// the detour contracts away.
StepResult step_detour(DerivPtr cur, const Segment& sg) {
  const NodePath& iPath = sg.nodes[0];
  const NodePath ePath = parent_of(iPath);
  auto I = get_node(cur, iPath);
  auto E = get_node(cur, ePath);
  DerivPtr sub;
  switch (E->rule) {
    case RuleId::AndRE:
    case RuleId::OrLE: {
      int k = E->params.select;
      require(k == 1 || k == 2, "detour elimination without a component selection");
      sub = I->children[k - 1];
      break;
    }
    case RuleId::AndLE:
    case RuleId::OrRE:
    case RuleId::NegLE:
    case RuleId::NegRE:
      sub = I->children[0];
      break;
    case RuleId::AllRE:
    case RuleId::ExLE:
      sub = substitute_in_derivation(I->children[0], I->params.eigen, E->params.term);
      break;
    case RuleId::ExRE:
    case RuleId::AllLE: {
      DerivPtr D = I->children[0];
      auto rels = consumed_rel_paths(cur, ePath);
      DerivPtr minor = E->children[1];
      // Grafting D below the discharged positions routes its pendings through
      // the minor derivation; rename any inner binder that would capture them.
      auto bad = discharged_labels(D);
      for (int guard = 0; !bad.empty(); ++guard) {
        require(guard <= 1000, "label refresh does not converge");
        NodePath victim;
        bool found = false;
        for (auto& [p, lvs] : sidetrack_consumption(minor)) {
          if (bad.count(get_node(minor, p)->binds)) {
            victim = p;
            found = true;
            break;
          }
        }
        if (!found) break;
        auto avoid = collect_labels(cur);
        for (auto& l : collect_labels(minor)) avoid.insert(l);
        auto n = get_node(minor, victim);
        minor = replace_node(minor, victim, relabel_sidetrack(n, fresh_label(n->binds, avoid)));
      }
      minor = substitute_in_derivation(minor, E->params.eigen, I->params.term);
      for (auto& rel : rels) {
        auto leaf = get_node(minor, rel);
        require(leaf->kind == NodeKind::Discharged && ms_equal(leaf->sequent, D->sequent),
                "detour reduction graft mismatch");
        minor = replace_node(minor, rel, D);
      }
      sub = minor;
      break;
    }
    default:
      internal("unexpected elimination above a matching introduction");
  }
  require(ms_equal(sub->sequent, E->sequent), "detour reduction changed the conclusion");
  return {replace_node(cur, ePath, sub), "reduce-detour", ePath};
}

StepResult rewrite_step(DerivPtr cur, const Segment& sg) {
  if (sg.nodes.size() >= 2) return step_long_segment(std::move(cur), sg);
  auto first = get_node(cur, sg.nodes[0]);
  if (first->rule == RuleId::GID) return step_gid(std::move(cur), sg);
  auto E = get_node(cur, parent_of(sg.nodes.back()));
  if (matching_elim(first->rule) == E->rule && first->params.principal &&
      E->params.principal && equal(first->params.principal, E->params.principal))
    return step_detour(std::move(cur), sg);
  return step_permute_intro(std::move(cur), sg);
}

}  // namespace

DerivPtr normalize(const DerivPtr& d, std::vector<std::string>* trace) {
  if (is_normal(d)) return d;
  check(d, MQ);
  DerivPtr cur = d;

  // Replace compound identity instances by introduction-built derivations.
  {
    NodePath path;
    std::vector<NodePath> gids;
    compound_gids(cur, path, gids);
    if (!gids.empty()) {
      if (trace)
        for (auto& p : gids) trace->push_back("expand-gid at " + path_str(p));
      cur = expand_atomic_gid(cur);
    }
  }

  // Drop sidetrack applications that discharge nothing.
  for (;;) {
    NodePath victim;
    bool found = false;
    for (auto& [p, lvs] : sidetrack_consumption(cur)) {
      if (lvs.empty() && (!found || p < victim)) {
        victim = p;
        found = true;
      }
    }
    if (!found) break;
    if (trace) trace->push_back("drop-vacuous-sidetrack at " + path_str(victim));
    cur = replace_node(cur, victim, get_node(cur, victim)->children[1]);
  }

  long long iter = 0;
  for (;;) {
    auto cuts = cut_segments(cur);
    if (cuts.empty()) break;
    require(++iter <= 100000, "rewrite loop does not terminate");
    Meas before = measure_of(cuts);
    StepResult step = rewrite_step(cur, select_segment(cuts, before.first));
    cur = step.root;
    Meas after = measure_of(cut_segments(cur));
    if (trace) {
      trace->push_back(std::string(step.kind) + " at " + path_str(step.loc) +
                       " r=" + std::to_string(before.first) + " m=" +
                       std::to_string(before.second) + " -> r=" +
                       std::to_string(after.first) + " m=" + std::to_string(after.second));
    }
    require(after < before, "the (rank, length) measure did not decrease at " +
                                std::string(step.kind) + " " + path_str(step.loc));
    try {
      check(cur, MQ);
    } catch (const RuleViolation& e) {
      internal(std::string("rewrite produced an invalid derivation: ") + e.what());
    }
  }

  require(is_normal(cur), "rewrite loop finished on a non-normal derivation");
  return cur;
}

// ---------------------------------------------------------------------------
// Tracks and the main branch.

std::vector<Track> tracks(const DerivPtr& d) {
  if (!is_normal(d)) throw TransformError("tracks: the derivation is not normal");
  auto cons = sidetrack_consumption(d);

  std::vector<NodePath> starts;
  {
    std::function<void(const DerivPtr&, NodePath&)> scan = [&](const DerivPtr& n,
                                                               NodePath& path) {
      if (n->kind == NodeKind::Assumption ||
          (n->kind == NodeKind::Rule && n->rule == RuleId::GID))
        starts.push_back(path);
      for (size_t i = 0; i < n->children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        scan(n->children[i], path);
        path.pop_back();
      }
    };
    NodePath path;
    scan(d, path);
  }

  std::vector<Track> out;
  auto finish = [&](const std::vector<NodePath>& acc) {
    Track tr;
    tr.nodes = acc;
    tr.segment_starts.push_back(0);
    for (size_t i = 1; i < acc.size(); ++i) {
      bool same = false;
      if (acc[i].size() + 1 == acc[i - 1].size() &&
          std::equal(acc[i].begin(), acc[i].end(), acc[i - 1].begin())) {
        auto pn = get_node(d, acc[i]);
        if (pn->kind == NodeKind::Rule &&
            (is_contraction(pn->rule) ||
             (is_sidetrack(pn->rule) && acc[i - 1].back() == 1)))
          same = true;
      }
      if (!same) tr.segment_starts.push_back(static_cast<int>(i));
    }
    tr.midsegment = static_cast<int>(tr.segment_starts.size()) - 1;
    for (size_t j = 0; j < tr.segment_starts.size(); ++j) {
      size_t last_idx = j + 1 < tr.segment_starts.size()
                            ? static_cast<size_t>(tr.segment_starts[j + 1]) - 1
                            : acc.size() - 1;
      const NodePath& n = acc[last_idx];
      bool major_elim = false;
      if (!n.empty()) {
        auto pn = get_node(d, parent_of(n));
        major_elim = pn->kind == NodeKind::Rule && is_elimination(pn->rule) &&
                     n.back() == 0;
      }
      if (!major_elim) {
        tr.midsegment = static_cast<int>(j);
        break;
      }
    }
    out.push_back(std::move(tr));
  };

  std::function<void(std::vector<NodePath>, NodePath)> extend =
      [&](std::vector<NodePath> acc, NodePath n) {
        for (;;) {
          acc.push_back(n);
          if (n.empty()) {
            finish(acc);
            return;
          }
          NodePath p = parent_of(n);
          auto pn = get_node(d, p);
          if (pn->kind == NodeKind::Rule && is_sidetrack(pn->rule) && n.back() == 0) {
            for (auto& leaf : cons.at(p)) extend(acc, leaf);
            return;
          }
          n = p;
        }
      };
  for (auto& s : starts) extend({}, s);
  return out;
}

std::vector<NodePath> main_branch(const DerivPtr& d) {
  if (!is_normal(d)) throw TransformError("main_branch: the derivation is not normal");
  if (d->kind != NodeKind::Rule || !is_elimination(d->rule))
    throw TransformError("main_branch: the derivation does not end in an elimination");
  std::vector<NodePath> out;
  NodePath path;
  DerivPtr n = d;
  for (;;) {
    out.push_back(path);
    if (n->kind == NodeKind::Assumption) return out;
    require(n->kind == NodeKind::Rule, "main branch reached a discharged assumption");
    require(n->rule != RuleId::GID, "main branch reached an identity instance");
    require(!n->children.empty() &&
                !(is_introduction(n->rule) && n->children.size() != 1),
            "main branch reached a branching introduction");
    path.push_back(0);
    n = n->children[0];
  }
}

}  // namespace stp
