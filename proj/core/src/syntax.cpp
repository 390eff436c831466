#include "stproof/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace stp {

namespace {

Dialect combine(Dialect a, Dialect b) {
  if (a == b) return a;
  if (a == Dialect::Base) return b;
  if (b == Dialect::Base) return a;
  throw DialectError("cannot mix witness constants and epsilon terms");
}

Dialect dia_of(const std::vector<TermPtr>& ts) {
  Dialect d = Dialect::Base;
  for (auto& t : ts) d = combine(d, t->dia);
  return d;
}

}  // namespace

TermPtr mk_var(std::string name) {
  auto t = std::make_shared<Term>();
  t->tag = Term::Tag::Var;
  t->name = std::move(name);
  return t;
}

TermPtr mk_app(std::string fn, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->tag = Term::Tag::App;
  t->name = std::move(fn);
  t->dia = dia_of(args);
  t->args = std::move(args);
  return t;
}

static TermPtr mk_binder_term(Term::Tag tag, std::string x, FormulaPtr body,
                              Dialect ext) {
  auto t = std::make_shared<Term>();
  t->tag = tag;
  t->bound = std::move(x);
  t->dia = combine(body->dia, ext);
  t->body = std::move(body);
  return t;
}

TermPtr mk_uwitness(std::string x, FormulaPtr body) {
  return mk_binder_term(Term::Tag::UWitness, std::move(x), std::move(body),
                        Dialect::Henkin);
}
TermPtr mk_ewitness(std::string x, FormulaPtr body) {
  return mk_binder_term(Term::Tag::EWitness, std::move(x), std::move(body),
                        Dialect::Henkin);
}
TermPtr mk_eps(std::string x, FormulaPtr body) {
  return mk_binder_term(Term::Tag::Eps, std::move(x), std::move(body),
                        Dialect::Epsilon);
}

FormulaPtr mk_atom(std::string rel, std::vector<TermPtr> args) {
  auto f = std::make_shared<Formula>();
  f->tag = Formula::Tag::Atom;
  f->name = std::move(rel);
  f->dia = dia_of(args);
  f->args = std::move(args);
  return f;
}

FormulaPtr mk_neg(FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->tag = Formula::Tag::Neg;
  f->dia = a->dia;
  f->lhs = std::move(a);
  return f;
}

static FormulaPtr mk_bin(Formula::Tag tag, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->tag = tag;
  f->dia = combine(a->dia, b->dia);
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}

FormulaPtr mk_conj(FormulaPtr a, FormulaPtr b) {
  return mk_bin(Formula::Tag::Conj, std::move(a), std::move(b));
}
FormulaPtr mk_disj(FormulaPtr a, FormulaPtr b) {
  return mk_bin(Formula::Tag::Disj, std::move(a), std::move(b));
}

static FormulaPtr mk_quant(Formula::Tag tag, std::string x, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->tag = tag;
  f->name = std::move(x);
  f->dia = body->dia;
  f->lhs = std::move(body);
  return f;
}

FormulaPtr mk_forall(std::string x, FormulaPtr f) {
  return mk_quant(Formula::Tag::Forall, std::move(x), std::move(f));
}
FormulaPtr mk_exists(std::string x, FormulaPtr f) {
  return mk_quant(Formula::Tag::Exists, std::move(x), std::move(f));
}
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) {
  return mk_disj(mk_neg(std::move(a)), std::move(b));
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Term::Tag::Var:
      return a->name == b->name;
    case Term::Tag::App: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
      return true;
    }
    default:
      return a->bound == b->bound && equal(a->body, b->body);
  }
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Formula::Tag::Atom: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
      return true;
    }
    case Formula::Tag::Neg:
      return equal(a->lhs, b->lhs);
    case Formula::Tag::Conj:
    case Formula::Tag::Disj:
      return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case Formula::Tag::Forall:
    case Formula::Tag::Exists:
      return a->name == b->name && equal(a->lhs, b->lhs);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Printing. Precedence: ~ (3) > /\ (2) > \/ (1) > quantifier bodies (0).
// Binary connectives associate to the left; quantified subformulas are
// parenthesized whenever they appear under a connective.

static void print_term(std::ostringstream& o, const TermPtr& t);
static void print_formula(std::ostringstream& o, const FormulaPtr& f, int parent);

static int prec(const FormulaPtr& f) {
  switch (f->tag) {
    case Formula::Tag::Atom: return 4;
    case Formula::Tag::Neg: return 3;
    case Formula::Tag::Conj: return 2;
    case Formula::Tag::Disj: return 1;
    default: return 0;
  }
}

static void print_term(std::ostringstream& o, const TermPtr& t) {
  switch (t->tag) {
    case Term::Tag::Var:
      o << t->name;
      return;
    case Term::Tag::App:
      o << t->name;
      if (!t->args.empty()) {
        o << '(';
        for (size_t i = 0; i < t->args.size(); ++i) {
          if (i) o << ", ";
          print_term(o, t->args[i]);
        }
        o << ')';
      }
      return;
    case Term::Tag::UWitness:
    case Term::Tag::EWitness:
    case Term::Tag::Eps:
      o << (t->tag == Term::Tag::UWitness
                ? "wA"
                : t->tag == Term::Tag::EWitness ? "wE" : "eps");
      o << '[' << t->bound << ". ";
      print_formula(o, t->body, 0);
      o << ']';
      return;
  }
}

static void print_formula(std::ostringstream& o, const FormulaPtr& f, int parent) {
  switch (f->tag) {
    case Formula::Tag::Atom:
      o << f->name;
      if (!f->args.empty()) {
        o << '(';
        for (size_t i = 0; i < f->args.size(); ++i) {
          if (i) o << ", ";
          print_term(o, f->args[i]);
        }
        o << ')';
      }
      return;
    case Formula::Tag::Neg:
      o << '~';
      if (prec(f->lhs) < 3) {
        o << '(';
        print_formula(o, f->lhs, 0);
        o << ')';
      } else {
        print_formula(o, f->lhs, 3);
      }
      return;
    case Formula::Tag::Conj:
    case Formula::Tag::Disj: {
      int p = prec(f);
      const char* op = f->tag == Formula::Tag::Conj ? " /\\ " : " \\/ ";
      bool wl = prec(f->lhs) < p;
      bool wr = prec(f->rhs) <= p;
      if (wl) o << '(';
      print_formula(o, f->lhs, p);
      if (wl) o << ')';
      o << op;
      if (wr) o << '(';
      print_formula(o, f->rhs, p);
      if (wr) o << ')';
      return;
    }
    case Formula::Tag::Forall:
    case Formula::Tag::Exists:
      o << (f->tag == Formula::Tag::Forall ? "forall " : "exists ");
      o << f->name << ". ";
      print_formula(o, f->lhs, 0);
      return;
  }
}

std::string print(const TermPtr& t) {
  std::ostringstream o;
  print_term(o, t);
  return o.str();
}

std::string print(const FormulaPtr& f) {
  std::ostringstream o;
  print_formula(o, f, 0);
  return o.str();
}

std::string print(const Sequent& s) {
  std::ostringstream o;
  for (size_t i = 0; i < s.ante.size(); ++i) {
    if (i) o << ", ";
    print_formula(o, s.ante[i], 0);
  }
  if (!s.ante.empty()) o << ' ';
  o << "|-";
  for (size_t i = 0; i < s.succ.size(); ++i) {
    o << (i ? ", " : " ");
    print_formula(o, s.succ[i], 0);
  }
  return o.str();
}

// ---------------------------------------------------------------------------
// Variables.

static void fv_term(const TermPtr& t, std::set<std::string>& out);
static void fv_formula(const FormulaPtr& f, std::set<std::string>& out);

static void fv_term(const TermPtr& t, std::set<std::string>& out) {
  switch (t->tag) {
    case Term::Tag::Var:
      out.insert(t->name);
      return;
    case Term::Tag::App:
      for (auto& a : t->args) fv_term(a, out);
      return;
    default: {
      std::set<std::string> inner;
      fv_formula(t->body, inner);
      inner.erase(t->bound);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

static void fv_formula(const FormulaPtr& f, std::set<std::string>& out) {
  switch (f->tag) {
    case Formula::Tag::Atom:
      for (auto& a : f->args) fv_term(a, out);
      return;
    case Formula::Tag::Neg:
      fv_formula(f->lhs, out);
      return;
    case Formula::Tag::Conj:
    case Formula::Tag::Disj:
      fv_formula(f->lhs, out);
      fv_formula(f->rhs, out);
      return;
    case Formula::Tag::Forall:
    case Formula::Tag::Exists: {
      std::set<std::string> inner;
      fv_formula(f->lhs, inner);
      inner.erase(f->name);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  fv_term(t, out);
  return out;
}

std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> out;
  fv_formula(f, out);
  return out;
}

std::set<std::string> free_vars(const Sequent& s) {
  std::set<std::string> out;
  for (auto& f : s.ante) fv_formula(f, out);
  for (auto& f : s.succ) fv_formula(f, out);
  return out;
}

static void av_term(const TermPtr& t, std::set<std::string>& out);
static void av_formula(const FormulaPtr& f, std::set<std::string>& out);

static void av_term(const TermPtr& t, std::set<std::string>& out) {
  switch (t->tag) {
    case Term::Tag::Var:
      out.insert(t->name);
      return;
    case Term::Tag::App:
      for (auto& a : t->args) av_term(a, out);
      return;
    default:
      out.insert(t->bound);
      av_formula(t->body, out);
      return;
  }
}

static void av_formula(const FormulaPtr& f, std::set<std::string>& out) {
  switch (f->tag) {
    case Formula::Tag::Atom:
      for (auto& a : f->args) av_term(a, out);
      return;
    case Formula::Tag::Neg:
      av_formula(f->lhs, out);
      return;
    case Formula::Tag::Conj:
    case Formula::Tag::Disj:
      av_formula(f->lhs, out);
      av_formula(f->rhs, out);
      return;
    default:
      out.insert(f->name);
      av_formula(f->lhs, out);
      return;
  }
}

std::set<std::string> all_vars(const TermPtr& t) {
  std::set<std::string> out;
  av_term(t, out);
  return out;
}

std::set<std::string> all_vars(const FormulaPtr& f) {
  std::set<std::string> out;
  av_formula(f, out);
  return out;
}

std::set<std::string> all_vars(const Sequent& s) {
  std::set<std::string> out;
  for (auto& f : s.ante) av_formula(f, out);
  for (auto& f : s.succ) av_formula(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Substitution.

static TermPtr sub_term(const TermPtr& in, const std::string& x, const TermPtr& t,
                        const std::set<std::string>& tvars);
static FormulaPtr sub_formula(const FormulaPtr& in, const std::string& x,
                              const TermPtr& t, const std::set<std::string>& tvars);

static FormulaPtr sub_under_binder(const FormulaPtr& body, const std::string& bound,
                                   const std::string& x, const TermPtr& t,
                                   const std::set<std::string>& tvars,
                                   FormulaPtr* out_same) {
  if (bound == x) {
    *out_same = body;
    return body;
  }
  if (tvars.count(bound) && free_vars(body).count(x))
    throw CaptureError("variable " + bound + " of substituted term captured");
  *out_same = nullptr;
  return sub_formula(body, x, t, tvars);
}

static TermPtr sub_term(const TermPtr& in, const std::string& x, const TermPtr& t,
                        const std::set<std::string>& tvars) {
  switch (in->tag) {
    case Term::Tag::Var:
      return in->name == x ? t : in;
    case Term::Tag::App: {
      std::vector<TermPtr> args;
      args.reserve(in->args.size());
      bool changed = false;
      for (auto& a : in->args) {
        auto a2 = sub_term(a, x, t, tvars);
        changed = changed || a2.get() != a.get();
        args.push_back(std::move(a2));
      }
      if (!changed) return in;
      return mk_app(in->name, std::move(args));
    }
    default: {
      FormulaPtr same;
      auto body = sub_under_binder(in->body, in->bound, x, t, tvars, &same);
      if (same) return in;
      if (body.get() == in->body.get()) return in;
      switch (in->tag) {
        case Term::Tag::UWitness: return mk_uwitness(in->bound, body);
        case Term::Tag::EWitness: return mk_ewitness(in->bound, body);
        default: return mk_eps(in->bound, body);
      }
    }
  }
}

static FormulaPtr sub_formula(const FormulaPtr& in, const std::string& x,
                              const TermPtr& t, const std::set<std::string>& tvars) {
  switch (in->tag) {
    case Formula::Tag::Atom: {
      std::vector<TermPtr> args;
      args.reserve(in->args.size());
      bool changed = false;
      for (auto& a : in->args) {
        auto a2 = sub_term(a, x, t, tvars);
        changed = changed || a2.get() != a.get();
        args.push_back(std::move(a2));
      }
      if (!changed) return in;
      return mk_atom(in->name, std::move(args));
    }
    case Formula::Tag::Neg: {
      auto l = sub_formula(in->lhs, x, t, tvars);
      return l.get() == in->lhs.get() ? in : mk_neg(l);
    }
    case Formula::Tag::Conj:
    case Formula::Tag::Disj: {
      auto l = sub_formula(in->lhs, x, t, tvars);
      auto r = sub_formula(in->rhs, x, t, tvars);
      if (l.get() == in->lhs.get() && r.get() == in->rhs.get()) return in;
      return mk_bin(in->tag, l, r);
    }
    case Formula::Tag::Forall:
    case Formula::Tag::Exists: {
      FormulaPtr same;
      auto body = sub_under_binder(in->lhs, in->name, x, t, tvars, &same);
      if (same || body.get() == in->lhs.get()) return in;
      return mk_quant(in->tag, in->name, body);
    }
  }
  return in;
}

TermPtr substitute(const TermPtr& in, const std::string& x, const TermPtr& t) {
  return sub_term(in, x, t, free_vars(t));
}

FormulaPtr substitute(const FormulaPtr& in, const std::string& x, const TermPtr& t) {
  return sub_formula(in, x, t, free_vars(t));
}

Sequent substitute(const Sequent& s, const std::string& x, const TermPtr& t) {
  Sequent out;
  for (auto& f : s.ante) out.ante.push_back(substitute(f, x, t));
  for (auto& f : s.succ) out.succ.push_back(substitute(f, x, t));
  return out;
}

// ---------------------------------------------------------------------------
// Term replacement (used by the witness-exchange rules).

static TermPtr rep_term(const TermPtr& in, const TermPtr& from, const TermPtr& to,
                        const std::set<std::string>& fromv,
                        const std::set<std::string>& tov,
                        const std::set<std::string>& bound);
static FormulaPtr rep_formula(const FormulaPtr& in, const TermPtr& from,
                              const TermPtr& to, const std::set<std::string>& fromv,
                              const std::set<std::string>& tov,
                              const std::set<std::string>& bound);

static TermPtr rep_term(const TermPtr& in, const TermPtr& from, const TermPtr& to,
                        const std::set<std::string>& fromv,
                        const std::set<std::string>& tov,
                        const std::set<std::string>& bound) {
  bool shadowed = false;
  for (auto& v : fromv)
    if (bound.count(v)) { shadowed = true; break; }
  if (!shadowed && equal(in, from)) {
    for (auto& v : tov)
      if (bound.count(v))
        throw CaptureError("replacement term variable " + v + " captured");
    return to;
  }
  switch (in->tag) {
    case Term::Tag::Var:
      return in;
    case Term::Tag::App: {
      std::vector<TermPtr> args;
      bool changed = false;
      for (auto& a : in->args) {
        auto a2 = rep_term(a, from, to, fromv, tov, bound);
        changed = changed || a2.get() != a.get();
        args.push_back(std::move(a2));
      }
      if (!changed) return in;
      return mk_app(in->name, std::move(args));
    }
    default: {
      auto b2 = bound;
      b2.insert(in->bound);
      auto body = rep_formula(in->body, from, to, fromv, tov, b2);
      if (body.get() == in->body.get()) return in;
      switch (in->tag) {
        case Term::Tag::UWitness: return mk_uwitness(in->bound, body);
        case Term::Tag::EWitness: return mk_ewitness(in->bound, body);
        default: return mk_eps(in->bound, body);
      }
    }
  }
}

static FormulaPtr rep_formula(const FormulaPtr& in, const TermPtr& from,
                              const TermPtr& to, const std::set<std::string>& fromv,
                              const std::set<std::string>& tov,
                              const std::set<std::string>& bound) {
  switch (in->tag) {
    case Formula::Tag::Atom: {
      std::vector<TermPtr> args;
      bool changed = false;
      for (auto& a : in->args) {
        auto a2 = rep_term(a, from, to, fromv, tov, bound);
        changed = changed || a2.get() != a.get();
        args.push_back(std::move(a2));
      }
      if (!changed) return in;
      return mk_atom(in->name, std::move(args));
    }
    case Formula::Tag::Neg: {
      auto l = rep_formula(in->lhs, from, to, fromv, tov, bound);
      return l.get() == in->lhs.get() ? in : mk_neg(l);
    }
    case Formula::Tag::Conj:
    case Formula::Tag::Disj: {
      auto l = rep_formula(in->lhs, from, to, fromv, tov, bound);
      auto r = rep_formula(in->rhs, from, to, fromv, tov, bound);
      if (l.get() == in->lhs.get() && r.get() == in->rhs.get()) return in;
      return mk_bin(in->tag, l, r);
    }
    default: {
      auto b2 = bound;
      b2.insert(in->name);
      auto body = rep_formula(in->lhs, from, to, fromv, tov, b2);
      if (body.get() == in->lhs.get()) return in;
      return mk_quant(in->tag, in->name, body);
    }
  }
}

TermPtr replace_term(const TermPtr& in, const TermPtr& from, const TermPtr& to) {
  return rep_term(in, from, to, free_vars(from), free_vars(to), {});
}

FormulaPtr replace_term(const FormulaPtr& in, const TermPtr& from, const TermPtr& to) {
  return rep_formula(in, from, to, free_vars(from), free_vars(to), {});
}

// ---------------------------------------------------------------------------
// Fresh names and alpha renaming.

std::string fresh_var(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

// Simultaneous renaming of free variable occurrences; binders (including
// witness and epsilon binders) shadow map entries.
static TermPtr rnv_term(const TermPtr& t, const std::map<std::string, std::string>& ren);
static FormulaPtr rnv_formula(const FormulaPtr& f, std::map<std::string, std::string> ren);

static TermPtr rnv_term(const TermPtr& t, const std::map<std::string, std::string>& ren) {
  switch (t->tag) {
    case Term::Tag::Var: {
      auto it = ren.find(t->name);
      return it == ren.end() ? t : mk_var(it->second);
    }
    case Term::Tag::App: {
      std::vector<TermPtr> args;
      for (auto& a : t->args) args.push_back(rnv_term(a, ren));
      return mk_app(t->name, std::move(args));
    }
    default: {
      auto inner = ren;
      inner.erase(t->bound);
      auto body = rnv_formula(t->body, std::move(inner));
      switch (t->tag) {
        case Term::Tag::UWitness: return mk_uwitness(t->bound, body);
        case Term::Tag::EWitness: return mk_ewitness(t->bound, body);
        default: return mk_eps(t->bound, body);
      }
    }
  }
}

static FormulaPtr rnv_formula(const FormulaPtr& f, std::map<std::string, std::string> ren) {
  switch (f->tag) {
    case Formula::Tag::Atom: {
      std::vector<TermPtr> args;
      for (auto& a : f->args) args.push_back(rnv_term(a, ren));
      return mk_atom(f->name, std::move(args));
    }
    case Formula::Tag::Neg:
      return mk_neg(rnv_formula(f->lhs, std::move(ren)));
    case Formula::Tag::Conj:
    case Formula::Tag::Disj: {
      auto l = rnv_formula(f->lhs, ren);
      auto r = rnv_formula(f->rhs, std::move(ren));
      return mk_bin(f->tag, std::move(l), std::move(r));
    }
    default: {
      ren.erase(f->name);
      return mk_quant(f->tag, f->name, rnv_formula(f->lhs, std::move(ren)));
    }
  }
}

// Renames Forall/Exists binders only. Witness and epsilon binders are left
// untouched: their printed body is their identity as a constant, so renaming
// them would silently change which constant is meant. Free occurrences inside
// witness bodies still follow the enclosing quantifier's renaming.
static FormulaPtr af(const FormulaPtr& f, std::map<std::string, std::string> ren,
                     std::set<std::string>& used) {
  switch (f->tag) {
    case Formula::Tag::Atom:
      return rnv_formula(f, std::move(ren));
    case Formula::Tag::Neg:
      return mk_neg(af(f->lhs, std::move(ren), used));
    case Formula::Tag::Conj:
    case Formula::Tag::Disj: {
      auto l = af(f->lhs, ren, used);
      auto r = af(f->rhs, std::move(ren), used);
      return mk_bin(f->tag, std::move(l), std::move(r));
    }
    case Formula::Tag::Forall:
    case Formula::Tag::Exists: {
      std::string nv = fresh_var(f->name, used);
      used.insert(nv);
      ren[f->name] = nv;
      return mk_quant(f->tag, nv, af(f->lhs, std::move(ren), used));
    }
  }
  return f;
}

FormulaPtr alpha_fresh(const FormulaPtr& f, std::set<std::string> avoid) {
  auto fv = free_vars(f);
  avoid.insert(fv.begin(), fv.end());
  return af(f, {}, avoid);
}

static bool aeq_term(const TermPtr& a, const TermPtr& b,
                     std::vector<std::pair<std::string, std::string>>& ren);
static bool aeq_formula(const FormulaPtr& a, const FormulaPtr& b,
                        std::vector<std::pair<std::string, std::string>>& ren);

static bool aeq_var(const std::string& a, const std::string& b,
                    const std::vector<std::pair<std::string, std::string>>& ren) {
  for (auto it = ren.rbegin(); it != ren.rend(); ++it) {
    if (it->first == a || it->second == b) return it->first == a && it->second == b;
  }
  return a == b;
}

static bool aeq_term(const TermPtr& a, const TermPtr& b,
                     std::vector<std::pair<std::string, std::string>>& ren) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Term::Tag::Var:
      return aeq_var(a->name, b->name, ren);
    case Term::Tag::App: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!aeq_term(a->args[i], b->args[i], ren)) return false;
      return true;
    }
    default: {
      ren.emplace_back(a->bound, b->bound);
      bool ok = aeq_formula(a->body, b->body, ren);
      ren.pop_back();
      return ok;
    }
  }
}

static bool aeq_formula(const FormulaPtr& a, const FormulaPtr& b,
                        std::vector<std::pair<std::string, std::string>>& ren) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Formula::Tag::Atom: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!aeq_term(a->args[i], b->args[i], ren)) return false;
      return true;
    }
    case Formula::Tag::Neg:
      return aeq_formula(a->lhs, b->lhs, ren);
    case Formula::Tag::Conj:
    case Formula::Tag::Disj:
      return aeq_formula(a->lhs, b->lhs, ren) && aeq_formula(a->rhs, b->rhs, ren);
    default: {
      ren.emplace_back(a->name, b->name);
      bool ok = aeq_formula(a->lhs, b->lhs, ren);
      ren.pop_back();
      return ok;
    }
  }
}

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
  std::vector<std::pair<std::string, std::string>> ren;
  return aeq_formula(a, b, ren);
}

// ---------------------------------------------------------------------------
// Signature.

void Signature::validate() const {
  if (relations.empty())
    throw SyntaxError("signature must contain at least one relation symbol");
  for (auto& [name, _] : relations)
    if (functions.count(name))
      throw SyntaxError("symbol " + name + " is both relation and function");
}

FormulaPtr Signature::phi0() const {
  if (phi0_config) return phi0_config;
  for (auto& [name, arity] : relations)
    if (arity == 0) return mk_atom(name);
  if (relations.empty())
    throw SyntaxError("no relation symbol available for the distinguished atom");
  auto& [name, arity] = *relations.begin();
  std::vector<TermPtr> args(arity, mk_var("x"));
  return mk_atom(name, std::move(args));
}

// ---------------------------------------------------------------------------
// Sequent helpers.

bool set_member(const std::vector<FormulaPtr>& side, const FormulaPtr& f) {
  for (auto& g : side)
    if (equal(g, f)) return true;
  return false;
}

std::vector<FormulaPtr> set_add(std::vector<FormulaPtr> side, const FormulaPtr& f) {
  if (!set_member(side, f)) side.push_back(f);
  return side;
}

std::vector<FormulaPtr> set_remove(std::vector<FormulaPtr> side, const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  for (auto& g : side)
    if (!equal(g, f)) out.push_back(g);
  return out;
}

static std::vector<std::string> keys_of(const std::vector<FormulaPtr>& side) {
  std::vector<std::string> ks;
  ks.reserve(side.size());
  for (auto& f : side) ks.push_back(print(f));
  return ks;
}

bool set_equal(const Sequent& a, const Sequent& b) {
  auto norm = [](const std::vector<FormulaPtr>& s) {
    auto ks = keys_of(s);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
  };
  return norm(a.ante) == norm(b.ante) && norm(a.succ) == norm(b.succ);
}

Sequent set_canon(const Sequent& s) {
  Sequent out;
  for (auto& f : s.ante) out.ante = set_add(std::move(out.ante), f);
  for (auto& f : s.succ) out.succ = set_add(std::move(out.succ), f);
  return out;
}

int ms_count(const std::vector<FormulaPtr>& side, const FormulaPtr& f) {
  int n = 0;
  for (auto& g : side)
    if (equal(g, f)) ++n;
  return n;
}

std::vector<FormulaPtr> ms_add(std::vector<FormulaPtr> side, const FormulaPtr& f, int n) {
  for (int i = 0; i < n; ++i) side.push_back(f);
  return side;
}

std::vector<FormulaPtr> ms_remove(std::vector<FormulaPtr> side, const FormulaPtr& f, int n) {
  std::vector<FormulaPtr> out;
  for (auto& g : side) {
    if (n > 0 && equal(g, f)) {
      --n;
      continue;
    }
    out.push_back(g);
  }
  if (n > 0) throw SyntaxError("multiset removal of absent formula " + print(f));
  return out;
}

bool ms_equal(const Sequent& a, const Sequent& b) {
  auto norm = [](const std::vector<FormulaPtr>& s) {
    auto ks = keys_of(s);
    std::sort(ks.begin(), ks.end());
    return ks;
  };
  return norm(a.ante) == norm(b.ante) && norm(a.succ) == norm(b.succ);
}

static std::vector<FormulaPtr> sort_side(std::vector<FormulaPtr> side) {
  std::stable_sort(side.begin(), side.end(),
                   [](const FormulaPtr& a, const FormulaPtr& b) {
                     return print(a) < print(b);
                   });
  return side;
}

Sequent ms_canon(const Sequent& s) {
  return Sequent{sort_side(s.ante), sort_side(s.succ)};
}

Sequent sequent_join(const Sequent& a, const Sequent& b, bool multiset) {
  Sequent out = a;
  if (multiset) {
    for (auto& f : b.ante) out.ante.push_back(f);
    for (auto& f : b.succ) out.succ.push_back(f);
    return ms_canon(out);
  }
  for (auto& f : b.ante) out.ante = set_add(std::move(out.ante), f);
  for (auto& f : b.succ) out.succ = set_add(std::move(out.succ), f);
  return out;
}

Sequent support(const Sequent& s) { return set_canon(s); }

FormulaPtr tau(const Sequent& s, const Signature& sig) {
  std::vector<FormulaPtr> parts;
  for (auto& g : sort_side(s.ante)) parts.push_back(mk_neg(g));
  for (auto& d : sort_side(s.succ)) parts.push_back(d);
  if (parts.empty()) {
    auto p0 = sig.phi0();
    return mk_conj(p0, mk_neg(p0));
  }
  FormulaPtr out = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) out = mk_disj(out, parts[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Dialect translations.

TermPtr to_epsilon(const TermPtr& t) {
  switch (t->tag) {
    case Term::Tag::Var:
      return t;
    case Term::Tag::App: {
      std::vector<TermPtr> args;
      for (auto& a : t->args) args.push_back(to_epsilon(a));
      return mk_app(t->name, std::move(args));
    }
    case Term::Tag::EWitness:
      return mk_eps(t->bound, to_epsilon(t->body));
    case Term::Tag::UWitness:
      return mk_eps(t->bound, mk_neg(to_epsilon(t->body)));
    case Term::Tag::Eps:
      throw DialectError("epsilon term in input of the epsilon translation");
  }
  return t;
}

FormulaPtr to_epsilon(const FormulaPtr& f) {
  switch (f->tag) {
    case Formula::Tag::Atom: {
      std::vector<TermPtr> args;
      for (auto& a : f->args) args.push_back(to_epsilon(a));
      return mk_atom(f->name, std::move(args));
    }
    case Formula::Tag::Neg:
      return mk_neg(to_epsilon(f->lhs));
    case Formula::Tag::Conj:
    case Formula::Tag::Disj:
      return mk_bin(f->tag, to_epsilon(f->lhs), to_epsilon(f->rhs));
    default:
      return mk_quant(f->tag, f->name, to_epsilon(f->lhs));
  }
}

Sequent to_epsilon(const Sequent& s) {
  Sequent out;
  for (auto& f : s.ante) out.ante.push_back(to_epsilon(f));
  for (auto& f : s.succ) out.succ.push_back(to_epsilon(f));
  return out;
}

TermPtr to_henkin(const TermPtr& t) {
  switch (t->tag) {
    case Term::Tag::Var:
      return t;
    case Term::Tag::App: {
      std::vector<TermPtr> args;
      for (auto& a : t->args) args.push_back(to_henkin(a));
      return mk_app(t->name, std::move(args));
    }
    case Term::Tag::Eps:
      return mk_ewitness(t->bound, to_henkin(t->body));
    default:
      throw DialectError("witness constant in input of the witness translation");
  }
}

FormulaPtr to_henkin(const FormulaPtr& f) {
  switch (f->tag) {
    case Formula::Tag::Atom: {
      std::vector<TermPtr> args;
      for (auto& a : f->args) args.push_back(to_henkin(a));
      return mk_atom(f->name, std::move(args));
    }
    case Formula::Tag::Neg:
      return mk_neg(to_henkin(f->lhs));
    case Formula::Tag::Conj:
    case Formula::Tag::Disj:
      return mk_bin(f->tag, to_henkin(f->lhs), to_henkin(f->rhs));
    default:
      return mk_quant(f->tag, f->name, to_henkin(f->lhs));
  }
}

Sequent to_henkin(const Sequent& s) {
  Sequent out;
  for (auto& f : s.ante) out.ante.push_back(to_henkin(f));
  for (auto& f : s.succ) out.succ.push_back(to_henkin(f));
  return out;
}

// ---------------------------------------------------------------------------
// Parsing.

namespace {

enum class Tok {
  Ident, LParen, RParen, Comma, Dot, LBrack, RBrack,
  Tilde, And, Or, Arrow, Turnstile, End
};

struct Token {
  Tok kind;
  std::string text;
  size_t pos;
};

struct Lexer {
  const std::string& src;
  size_t i = 0;
  std::vector<Token> out;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at position " + std::to_string(i));
  }

  void run() {
    while (i < src.size()) {
      char c = src[i];
      if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
      size_t start = i;
      if (std::isalpha(static_cast<unsigned char>(c))) {
        while (i < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
          ++i;
        out.push_back({Tok::Ident, src.substr(start, i - start), start});
        continue;
      }
      switch (c) {
        case '(': out.push_back({Tok::LParen, "(", start}); ++i; break;
        case ')': out.push_back({Tok::RParen, ")", start}); ++i; break;
        case ',': out.push_back({Tok::Comma, ",", start}); ++i; break;
        case '.': out.push_back({Tok::Dot, ".", start}); ++i; break;
        case '[': out.push_back({Tok::LBrack, "[", start}); ++i; break;
        case ']': out.push_back({Tok::RBrack, "]", start}); ++i; break;
        case '~': out.push_back({Tok::Tilde, "~", start}); ++i; break;
        case '/':
          if (i + 1 < src.size() && src[i + 1] == '\\') {
            out.push_back({Tok::And, "/\\", start});
            i += 2;
          } else fail("stray /");
          break;
        case '\\':
          if (i + 1 < src.size() && src[i + 1] == '/') {
            out.push_back({Tok::Or, "\\/", start});
            i += 2;
          } else fail("stray \\");
          break;
        case '-':
          if (i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Tok::Arrow, "->", start});
            i += 2;
          } else fail("stray -");
          break;
        case '|':
          if (i + 1 < src.size() && src[i + 1] == '-') {
            out.push_back({Tok::Turnstile, "|-", start});
            i += 2;
          } else fail("stray |");
          break;
        default:
          fail(std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back({Tok::End, "", src.size()});
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t p = 0;
  Signature& sig;
  bool learn;

  Parser(const std::string& text, Signature& s, bool l) : sig(s), learn(l) {
    Lexer lx(text);
    lx.run();
    toks = std::move(lx.out);
  }

  const Token& peek() const { return toks[p]; }
  Token next() { return toks[p++]; }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at position " + std::to_string(peek().pos));
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    ++p;
  }

  bool is_binder_keyword(const std::string& s) const {
    return s == "forall" || s == "exists" || s == "wA" || s == "wE" || s == "eps";
  }

  std::string expect_var() {
    if (peek().kind != Tok::Ident) fail("expected variable");
    std::string name = next().text;
    if (!std::islower(static_cast<unsigned char>(name[0])))
      fail("variable " + name + " must start with a lowercase letter");
    return name;
  }

  TermPtr parse_witness(const std::string& kw) {
    expect(Tok::LBrack, "[");
    std::string v = expect_var();
    expect(Tok::Dot, ".");
    FormulaPtr body = formula();
    expect(Tok::RBrack, "]");
    if (kw == "wA") return mk_uwitness(v, body);
    if (kw == "wE") return mk_ewitness(v, body);
    return mk_eps(v, body);
  }

  std::vector<TermPtr> term_list() {
    std::vector<TermPtr> args;
    expect(Tok::LParen, "(");
    if (peek().kind != Tok::RParen) {
      args.push_back(term());
      while (peek().kind == Tok::Comma) {
        ++p;
        args.push_back(term());
      }
    }
    expect(Tok::RParen, ")");
    return args;
  }

  void note_function(const std::string& name, int arity) {
    auto it = sig.functions.find(name);
    if (it != sig.functions.end()) {
      if (it->second != arity)
        fail("function " + name + " used with arity " + std::to_string(arity));
      return;
    }
    if (!learn) fail("unknown function symbol " + name);
    if (sig.relations.count(name))
      fail("symbol " + name + " already a relation");
    sig.functions[name] = arity;
  }

  void note_relation(const std::string& name, int arity) {
    auto it = sig.relations.find(name);
    if (it != sig.relations.end()) {
      if (it->second != arity)
        fail("relation " + name + " used with arity " + std::to_string(arity));
      return;
    }
    if (!learn) fail("unknown relation symbol " + name);
    if (sig.functions.count(name))
      fail("symbol " + name + " already a function");
    sig.relations[name] = arity;
  }

  TermPtr term() {
    if (peek().kind != Tok::Ident) fail("expected term");
    std::string name = next().text;
    if (is_binder_keyword(name) && name != "forall" && name != "exists" &&
        peek().kind == Tok::LBrack)
      return parse_witness(name);
    if (peek().kind == Tok::LParen) {
      auto args = term_list();
      note_function(name, static_cast<int>(args.size()));
      return mk_app(name, std::move(args));
    }
    if (sig.is_function(name)) {
      if (sig.functions.at(name) != 0)
        fail("function " + name + " needs arguments");
      return mk_app(name, {});
    }
    if (!std::islower(static_cast<unsigned char>(name[0])))
      fail("variable " + name + " must start with a lowercase letter");
    return mk_var(name);
  }

  FormulaPtr atom_or_group() {
    if (peek().kind == Tok::LParen) {
      ++p;
      FormulaPtr f = formula();
      expect(Tok::RParen, ")");
      return f;
    }
    if (peek().kind != Tok::Ident) fail("expected formula");
    std::string name = next().text;
    if (name == "forall" || name == "exists") {
      std::string v = expect_var();
      expect(Tok::Dot, ".");
      FormulaPtr body = formula();
      return name == "forall" ? mk_forall(v, body) : mk_exists(v, body);
    }
    std::vector<TermPtr> args;
    if (peek().kind == Tok::LParen) args = term_list();
    note_relation(name, static_cast<int>(args.size()));
    return mk_atom(name, std::move(args));
  }

  FormulaPtr negation() {
    if (peek().kind == Tok::Tilde) {
      ++p;
      return mk_neg(negation());
    }
    return atom_or_group();
  }

  FormulaPtr conjunction() {
    FormulaPtr f = negation();
    while (peek().kind == Tok::And) {
      ++p;
      f = mk_conj(f, negation());
    }
    return f;
  }

  FormulaPtr disjunction() {
    FormulaPtr f = conjunction();
    while (peek().kind == Tok::Or) {
      ++p;
      f = mk_disj(f, conjunction());
    }
    return f;
  }

  FormulaPtr formula() {
    FormulaPtr f = disjunction();
    if (peek().kind == Tok::Arrow) {
      ++p;
      return mk_implies(f, formula());
    }
    return f;
  }

  Sequent sequent() {
    Sequent s;
    if (peek().kind != Tok::Turnstile) {
      s.ante.push_back(formula());
      while (peek().kind == Tok::Comma) {
        ++p;
        s.ante.push_back(formula());
      }
    }
    expect(Tok::Turnstile, "|-");
    if (peek().kind != Tok::End) {
      s.succ.push_back(formula());
      while (peek().kind == Tok::Comma) {
        ++p;
        s.succ.push_back(formula());
      }
    }
    return s;
  }

  void done() {
    if (peek().kind != Tok::End) fail("trailing input");
  }
};

}  // namespace

TermPtr parse_term(const std::string& text, Signature& sig, bool learn) {
  Parser ps(text, sig, learn);
  TermPtr t = ps.term();
  ps.done();
  return t;
}

FormulaPtr parse_formula(const std::string& text, Signature& sig, bool learn) {
  Parser ps(text, sig, learn);
  FormulaPtr f = ps.formula();
  ps.done();
  return f;
}

Sequent parse_sequent(const std::string& text, Signature& sig, bool learn) {
  Parser ps(text, sig, learn);
  Sequent s = ps.sequent();
  ps.done();
  return s;
}

}  // namespace stp
