#include "stproof/semantics.hpp"

#include <algorithm>
#include <sstream>

namespace stp {

std::string tv_name(TruthValue v) {
  switch (v) {
    case TruthValue::F: return "0";
    case TruthValue::N: return "1/2";
    case TruthValue::T: return "1";
  }
  return "?";
}

TruthValue tv_from_name(const std::string& s) {
  if (s == "0") return TruthValue::F;
  if (s == "1/2") return TruthValue::N;
  if (s == "1") return TruthValue::T;
  throw SemanticsError("bad truth value: " + s);
}

namespace {

bool is_witness(const TermPtr& t) {
  return t->tag == Term::Tag::UWitness || t->tag == Term::Tag::EWitness ||
         t->tag == Term::Tag::Eps;
}

TruthValue tv(int i) { return static_cast<TruthValue>(i); }

}  // namespace

int eval_term(const FiniteSTModel& m, const Assignment& a, const TermPtr& t) {
  switch (t->tag) {
    case Term::Tag::Var: {
      auto it = a.find(t->name);
      if (it == a.end())
        throw SemanticsError("unassigned variable " + t->name);
      return it->second;
    }
    case Term::Tag::App: {
      auto ft = m.fn_tables.find(t->name);
      if (ft == m.fn_tables.end())
        throw SemanticsError("uninterpreted function " + t->name);
      std::vector<int> args;
      for (auto& x : t->args) args.push_back(eval_term(m, a, x));
      auto it = ft->second.find(args);
      if (it == ft->second.end())
        throw SemanticsError("partial table for function " + t->name);
      return it->second;
    }
    default: {
      auto key = print(t);
      auto it = m.witness_tables.find(key);
      if (it == m.witness_tables.end())
        throw SemanticsError("uninterpreted witness " + key);
      return it->second;
    }
  }
}

TruthValue eval(const FiniteSTModel& m, const Assignment& a, const FormulaPtr& f) {
  switch (f->tag) {
    case Formula::Tag::Atom: {
      auto rt = m.rel_tables.find(f->name);
      if (rt == m.rel_tables.end())
        throw SemanticsError("uninterpreted relation " + f->name);
      std::vector<int> args;
      for (auto& x : f->args) args.push_back(eval_term(m, a, x));
      auto it = rt->second.find(args);
      if (it == rt->second.end())
        throw SemanticsError("partial table for relation " + f->name);
      return it->second;
    }
    case Formula::Tag::Neg:
      return tv(2 - static_cast<int>(eval(m, a, f->lhs)));
    case Formula::Tag::Conj:
      return std::min(eval(m, a, f->lhs), eval(m, a, f->rhs));
    case Formula::Tag::Disj:
      return std::max(eval(m, a, f->lhs), eval(m, a, f->rhs));
    case Formula::Tag::Forall: {
      auto v = TruthValue::T;
      Assignment b = a;
      for (size_t d = 0; d < m.domain.size(); ++d) {
        b[f->name] = static_cast<int>(d);
        v = std::min(v, eval(m, b, f->lhs));
      }
      return v;
    }
    case Formula::Tag::Exists: {
      auto v = TruthValue::F;
      Assignment b = a;
      for (size_t d = 0; d < m.domain.size(); ++d) {
        b[f->name] = static_cast<int>(d);
        v = std::max(v, eval(m, b, f->lhs));
      }
      return v;
    }
  }
  throw SemanticsError("unreachable");
}

bool satisfies(const FiniteSTModel& m, const Assignment& a, const Sequent& s) {
  for (auto& g : s.ante)
    if (eval(m, a, g) != TruthValue::T) return true;
  for (auto& d : s.succ)
    if (eval(m, a, d) != TruthValue::F) return true;
  return false;
}

bool satisfies(const FiniteSTModel& m, const Sequent& s) {
  return satisfies(m, Assignment{}, s);
}

// ---------------------------------------------------------------------------
// Bounded countermodel search.

namespace {

struct Symbols {
  std::map<std::string, int> rels;
  std::map<std::string, int> fns;
  std::vector<std::string> witnessKeys;  // sorted, deduplicated
  std::set<std::string> freeVars;

  void scanEvaluated(const TermPtr& t) {
    if (t->tag == Term::Tag::App) {
      fns.emplace(t->name, static_cast<int>(t->args.size()));
      for (auto& a : t->args) scanEvaluated(a);
    } else if (is_witness(t)) {
      witnessKeys.push_back(print(t));
    }
  }
  void scan(const FormulaPtr& f) {
    switch (f->tag) {
      case Formula::Tag::Atom:
        rels.emplace(f->name, static_cast<int>(f->args.size()));
        for (auto& a : f->args) scanEvaluated(a);
        break;
      case Formula::Tag::Neg:
        scan(f->lhs);
        break;
      case Formula::Tag::Conj:
      case Formula::Tag::Disj:
        scan(f->lhs);
        scan(f->rhs);
        break;
      case Formula::Tag::Forall:
      case Formula::Tag::Exists:
        scan(f->lhs);
        break;
    }
  }
  void scan(const Sequent& s) {
    for (auto& f : s.ante) scan(f);
    for (auto& f : s.succ) scan(f);
    for (auto& v : free_vars(s)) freeVars.insert(v);
  }
  void finish() {
    std::sort(witnessKeys.begin(), witnessKeys.end());
    witnessKeys.erase(std::unique(witnessKeys.begin(), witnessKeys.end()),
                      witnessKeys.end());
  }
};

// All tuples over {0..n-1}^arity in lexicographic order.
std::vector<std::vector<int>> tuples(int n, int arity) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(arity, 0);
  for (;;) {
    out.push_back(cur);
    int i = arity - 1;
    for (; i >= 0; --i) {
      if (++cur[i] < n) break;
      cur[i] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

// Fixed-radix counter; the last digit moves fastest, so digit vectors are
// visited in lexicographic order.
struct Odometer {
  std::vector<int> digits;
  int radix;
  Odometer(size_t count, int radix) : digits(count, 0), radix(radix) {}
  bool next() {
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
      if (++digits[i] < radix) return true;
      digits[i] = 0;
    }
    return false;
  }
};

std::string element_name(int i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "e" + std::to_string(i);
}

}  // namespace

Verdict consequence_bounded(const std::vector<Sequent>& X, const Sequent& s,
                            int maxDomain, bool twoValued, long long budget) {
  Symbols sym;
  for (auto& x : X) sym.scan(x);
  sym.scan(s);
  sym.finish();

  Verdict verdict;
  for (int n = 1; n <= maxDomain; ++n) {
    std::vector<std::string> domain;
    for (int i = 0; i < n; ++i) domain.push_back(element_name(i));

    // Function stage: per-symbol tuple lists, then one slot per table
    // entry, witness constants appended as constants.
    std::vector<std::pair<std::string, std::vector<std::vector<int>>>> fnLayout;
    size_t fnSlots = 0;
    for (auto& [name, arity] : sym.fns) {
      fnLayout.emplace_back(name, tuples(n, arity));
      fnSlots += fnLayout.back().second.size();
    }
    size_t witSlots = sym.witnessKeys.size();

    std::vector<std::pair<std::string, std::vector<std::vector<int>>>> relLayout;
    size_t relSlots = 0;
    for (auto& [name, arity] : sym.rels) {
      relLayout.emplace_back(name, tuples(n, arity));
      relSlots += relLayout.back().second.size();
    }

    std::vector<std::string> freeVars(sym.freeVars.begin(), sym.freeVars.end());

    Odometer fn(fnSlots + witSlots, n);
    do {
      FiniteSTModel m;
      m.domain = domain;
      size_t k = 0;
      for (auto& [name, tps] : fnLayout) {
        auto& table = m.fn_tables[name];
        for (auto& tp : tps) table[tp] = fn.digits[k++];
      }
      for (auto& key : sym.witnessKeys) m.witness_tables[key] = fn.digits[k++];

      Odometer rel(relSlots, twoValued ? 2 : 3);
      do {
        if (++verdict.models_tried > budget)
          throw BudgetExceeded("model enumeration budget exceeded");
        for (auto& t : m.rel_tables) t.second.clear();
        size_t j = 0;
        for (auto& [name, tps] : relLayout) {
          auto& table = m.rel_tables[name];
          for (auto& tp : tps)
            table[tp] = twoValued ? (rel.digits[j++] ? TruthValue::T : TruthValue::F)
                                  : tv(rel.digits[j++]);
        }

        Odometer asg(freeVars.size(), n);
        do {
          Assignment a;
          for (size_t i = 0; i < freeVars.size(); ++i) a[freeVars[i]] = asg.digits[i];
          bool premisesHold = true;
          for (auto& x : X)
            if (!satisfies(m, a, x)) {
              premisesHold = false;
              break;
            }
          if (premisesHold && !satisfies(m, a, s)) {
            verdict.countermodel = true;
            verdict.model = m;
            verdict.assignment = a;
            return verdict;
          }
        } while (asg.next());
      } while (rel.next());
    } while (fn.next());
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Henkin expansion.

namespace {

int witness_weight(const TermPtr& t);
int witness_weight(const FormulaPtr& f) {
  int w = 0;
  switch (f->tag) {
    case Formula::Tag::Atom:
      for (auto& a : f->args) w += witness_weight(a);
      return w;
    case Formula::Tag::Neg:
    case Formula::Tag::Forall:
    case Formula::Tag::Exists:
      return witness_weight(f->lhs);
    default:
      return witness_weight(f->lhs) + witness_weight(f->rhs);
  }
}
int witness_weight(const TermPtr& t) {
  if (t->tag == Term::Tag::App) {
    int w = 0;
    for (auto& a : t->args) w += witness_weight(a);
    return w;
  }
  if (is_witness(t)) return 1 + witness_weight(t->body);
  return 0;
}

void collect_witnesses(const TermPtr& t, std::vector<TermPtr>& out);
void collect_witnesses(const FormulaPtr& f, std::vector<TermPtr>& out) {
  switch (f->tag) {
    case Formula::Tag::Atom:
      for (auto& a : f->args) collect_witnesses(a, out);
      break;
    case Formula::Tag::Neg:
    case Formula::Tag::Forall:
    case Formula::Tag::Exists:
      collect_witnesses(f->lhs, out);
      break;
    default:
      collect_witnesses(f->lhs, out);
      collect_witnesses(f->rhs, out);
  }
}
void collect_witnesses(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->tag == Term::Tag::App) {
    for (auto& a : t->args) collect_witnesses(a, out);
  } else if (is_witness(t)) {
    out.push_back(t);
    collect_witnesses(t->body, out);
  }
}

}  // namespace

std::vector<TermPtr> witness_constants(const Sequent& s) {
  std::vector<TermPtr> all;
  for (auto& f : s.ante) collect_witnesses(f, all);
  for (auto& f : s.succ) collect_witnesses(f, all);
  std::vector<TermPtr> out;
  std::set<std::string> seen;
  for (auto& t : all)
    if (seen.insert(print(t)).second) out.push_back(t);
  return out;
}

FiniteSTModel henkin_expand(FiniteSTModel m, std::vector<TermPtr> constants) {
  std::stable_sort(constants.begin(), constants.end(),
                   [](const TermPtr& a, const TermPtr& b) {
                     return witness_weight(a) < witness_weight(b);
                   });
  for (auto& c : constants) {
    if (!is_witness(c))
      throw SemanticsError("not a witness constant: " + print(c));
    auto fv = free_vars(c->body);
    fv.erase(c->bound);
    if (!fv.empty())
      throw UnsupportedOpenWitness("witness body has free variables: " + print(c));
    bool minimize = c->tag == Term::Tag::UWitness;
    int best = 0;
    auto bestV = TruthValue::F;
    for (size_t d = 0; d < m.domain.size(); ++d) {
      Assignment a{{c->bound, static_cast<int>(d)}};
      auto v = eval(m, a, c->body);
      if (d == 0 || (minimize ? v < bestV : v > bestV)) {
        best = static_cast<int>(d);
        bestV = v;
      }
    }
    m.witness_tables[print(c)] = best;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Propositional decision procedures.

namespace {

void collect_atoms(const FormulaPtr& f, std::set<std::string>& out) {
  switch (f->tag) {
    case Formula::Tag::Atom:
      if (!f->args.empty())
        throw SemanticsError("non-propositional atom " + print(f));
      out.insert(f->name);
      break;
    case Formula::Tag::Neg:
      collect_atoms(f->lhs, out);
      break;
    case Formula::Tag::Conj:
    case Formula::Tag::Disj:
      collect_atoms(f->lhs, out);
      collect_atoms(f->rhs, out);
      break;
    default:
      throw SemanticsError("non-propositional formula " + print(f));
  }
}

// Runs fn over every 3-valuation of the atoms; stops on false.
template <typename Fn>
bool all_valuations(const std::set<std::string>& atomSet, Fn&& fn) {
  std::vector<std::string> atoms(atomSet.begin(), atomSet.end());
  FiniteSTModel m;
  m.domain = {"a"};
  Odometer odo(atoms.size(), 3);
  do {
    for (size_t i = 0; i < atoms.size(); ++i)
      m.rel_tables[atoms[i]][{}] = tv(odo.digits[i]);
    if (!fn(m)) return false;
  } while (odo.next());
  return true;
}

}  // namespace

bool decide_st_propositional(const std::vector<Sequent>& X, const Sequent& s) {
  std::set<std::string> atoms;
  for (auto& x : X) {
    for (auto& f : x.ante) collect_atoms(f, atoms);
    for (auto& f : x.succ) collect_atoms(f, atoms);
  }
  for (auto& f : s.ante) collect_atoms(f, atoms);
  for (auto& f : s.succ) collect_atoms(f, atoms);

  return all_valuations(atoms, [&](const FiniteSTModel& m) {
    for (auto& x : X)
      if (!satisfies(m, x)) return true;
    return satisfies(m, s);
  });
}

bool lp_consequence(const std::vector<FormulaPtr>& premises, const FormulaPtr& phi) {
  std::set<std::string> atoms;
  for (auto& p : premises) collect_atoms(p, atoms);
  collect_atoms(phi, atoms);

  return all_valuations(atoms, [&](const FiniteSTModel& m) {
    for (auto& p : premises)
      if (eval(m, {}, p) == TruthValue::F) return true;
    return eval(m, {}, phi) != TruthValue::F;
  });
}

// ---------------------------------------------------------------------------
// Model files.

std::string print_model(const FiniteSTModel& m) {
  std::ostringstream out;
  out << "domain:";
  for (auto& e : m.domain) out << " " << e;
  out << "\n";
  auto tuple_text = [&](const std::vector<int>& tp) {
    std::string t = "(";
    for (size_t i = 0; i < tp.size(); ++i) {
      if (i) t += ",";
      t += m.domain[tp[i]];
    }
    return t + ")";
  };
  for (auto& [name, table] : m.fn_tables) {
    out << "fn " << name << ":";
    for (auto& [tp, v] : table) out << " " << tuple_text(tp) << "->" << m.domain[v];
    out << "\n";
  }
  for (auto& [name, table] : m.rel_tables) {
    out << "rel " << name << ":";
    for (auto& [tp, v] : table) out << " " << tuple_text(tp) << "->" << tv_name(v);
    out << "\n";
  }
  for (auto& [key, v] : m.witness_tables)
    out << "witness " << key << " -> " << m.domain[v] << "\n";
  return out.str();
}

FiniteSTModel parse_model(const std::string& text, Signature& sig, bool learn) {
  FiniteSTModel m;
  std::map<std::string, int> elem;
  auto elem_of = [&](const std::string& name) {
    auto it = elem.find(name);
    if (it == elem.end()) throw SemanticsError("unknown element " + name);
    return it->second;
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto at = [&](const std::string& msg) {
      return SemanticsError("line " + std::to_string(lineno) + ": " + msg);
    };
    // Strip comments and whitespace.
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;

    if (head == "domain:") {
      std::string e;
      while (ls >> e) {
        if (!elem.emplace(e, static_cast<int>(m.domain.size())).second)
          throw at("duplicate element " + e);
        m.domain.push_back(e);
      }
      if (m.domain.empty()) throw at("empty domain");
    } else if (head == "fn" || head == "rel") {
      std::string name;
      if (!(ls >> name) || name.back() != ':') throw at("expected `" + head + " name:`");
      name.pop_back();
      std::string entry;
      while (ls >> entry) {
        auto arrow = entry.find(")->");
        if (entry.empty() || entry[0] != '(' || arrow == std::string::npos)
          throw at("malformed entry " + entry);
        std::vector<int> tp;
        std::string inner = entry.substr(1, arrow - 1);
        size_t pos = 0;
        while (pos < inner.size()) {
          size_t comma = inner.find(',', pos);
          std::string piece = inner.substr(pos, comma == std::string::npos
                                                    ? std::string::npos
                                                    : comma - pos);
          if (!piece.empty()) tp.push_back(elem_of(piece));
          pos = comma == std::string::npos ? inner.size() : comma + 1;
        }
        std::string val = entry.substr(arrow + 3);
        if (head == "fn")
          m.fn_tables[name][tp] = elem_of(val);
        else
          m.rel_tables[name][tp] = tv_from_name(val);
      }
      if (learn) {
        if (head == "fn") {
          auto& tbl = m.fn_tables[name];
          sig.functions.emplace(
              name, tbl.empty() ? 0 : static_cast<int>(tbl.begin()->first.size()));
        } else {
          auto& tbl = m.rel_tables[name];
          sig.relations.emplace(
              name, tbl.empty() ? 0 : static_cast<int>(tbl.begin()->first.size()));
        }
      }
    } else if (head == "witness") {
      // Everything up to the final ` -> elem` is the witness term.
      std::string rest;
      std::getline(ls, rest);
      auto arrow = rest.rfind(" -> ");
      if (arrow == std::string::npos) throw at("witness line without ->");
      auto termText = rest.substr(0, arrow);
      auto val = rest.substr(arrow + 4);
      while (!val.empty() && val.back() == ' ') val.pop_back();
      auto t = parse_term(termText, sig, learn);
      if (!is_witness(t)) throw at("not a witness term: " + termText);
      m.witness_tables[print(t)] = elem_of(val);
    } else {
      throw at("unknown directive " + head);
    }
  }
  if (m.domain.empty()) throw SemanticsError("model without domain");
  return m;
}

}  // namespace stp
