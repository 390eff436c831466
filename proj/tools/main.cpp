// Command line front end: proof checking, normalization, interpolation,
// calculus translation, bounded countermodel search, model evaluation, and
// print/parse round trips.
//
// Exit codes: 0 success / positive verdict, 1 negative verdict (proof
// rejected, countermodel found, verification failed), 2 usage or parse
// error (including search budget exhaustion).

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "stproof/interpolate.hpp"
#include "stproof/proof_io.hpp"
#include "stproof/semantics.hpp"

using namespace stp;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Optional signature file: '#' comments plus lines
//   relation NAME ARITY
//   function NAME ARITY
Signature load_signature(const std::string& path) {
  Signature sig;
  if (path.empty()) return sig;
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kind, name;
    int arity = 0;
    if (!(ls >> kind) || kind[0] == '#') continue;
    if (!(ls >> name >> arity))
      throw UsageError("signature file line " + std::to_string(lineno) +
                       ": expected 'relation|function NAME ARITY'");
    if (kind == "relation")
      sig.relations[name] = arity;
    else if (kind == "function")
      sig.functions[name] = arity;
    else
      throw UsageError("signature file line " + std::to_string(lineno) +
                       ": unknown entry '" + kind + "'");
  }
  return sig;
}

// One sequent per non-comment line.
std::vector<Sequent> load_sequents(const std::string& path, Signature& sig) {
  std::vector<Sequent> out;
  std::istringstream in(read_file(path));
  std::string line;
  for (; std::getline(in, line);) {
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty() || trimmed[0] == '#') continue;
    out.push_back(parse_sequent(trimmed, sig));
  }
  return out;
}

// Lines of the form "label: X1" or "label: X2".
Split load_split(const std::string& path) {
  Split split;
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = line;
    t.erase(0, t.find_first_not_of(" \t"));
    if (t.empty() || t[0] == '#') continue;
    auto colon = t.find(':');
    if (colon == std::string::npos)
      throw UsageError("split file line " + std::to_string(lineno) +
                       ": expected 'label: X1|X2'");
    std::string label = t.substr(0, colon);
    label.erase(label.find_last_not_of(" \t") + 1);
    std::string side = t.substr(colon + 1);
    side.erase(0, side.find_first_not_of(" \t"));
    side.erase(side.find_last_not_of(" \t\r") + 1);
    if (side == "X1")
      split[label] = SplitSide::X1;
    else if (side == "X2")
      split[label] = SplitSide::X2;
    else
      throw UsageError("split file line " + std::to_string(lineno) +
                       ": side must be X1 or X2");
  }
  return split;
}

void emit(const std::string& text, const std::string& outPath) {
  if (outPath.empty())
    std::cout << text;
  else
    write_file(outPath, text);
}

// ---------------------------------------------------------------------------

int run_check(const std::string& proofPath, const std::string& calName,
              const std::string& sigPath, bool json) {
  CalculusId cal = calculus_from_name(calName);
  Signature sig = load_signature(sigPath);
  DerivPtr d = parse_derivation(read_file(proofPath), sig);
  std::string status = "accepted", path, reason;
  CheckReport rep;
  try {
    rep = check(d, cal);
  } catch (const RuleViolation& e) {
    status = "rejected";
    reason = e.what();
    for (int i : e.path) path += (path.empty() ? "" : ".") + std::to_string(i);
    if (path.empty()) path = "root";
  }
  if (json) {
    nlohmann::json j;
    j["status"] = status;
    j["calculus"] = calName;
    if (status == "accepted") {
      j["conclusion"] = print(rep.conclusion);
      j["nodes"] = rep.node_count;
      j["depth"] = rep.max_depth;
      j["open_premises"] = nlohmann::json::array();
      for (auto& op : rep.open_premises)
        j["open_premises"].push_back({{"label", op.label}, {"sequent", print(op.sequent)}});
    } else {
      j["path"] = path;
      j["reason"] = reason;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "status: " << status << "\n" << "calculus: " << calName << "\n";
    if (status == "accepted") {
      std::cout << "conclusion: " << print(rep.conclusion) << "\n"
                << "nodes: " << rep.node_count << "\n"
                << "depth: " << rep.max_depth << "\n"
                << "open premises: " << rep.open_premises.size() << "\n";
      for (auto& op : rep.open_premises)
        std::cout << "  " << op.label << ": " << print(op.sequent) << "\n";
    } else {
      std::cout << "path: " << path << "\n" << "reason: " << reason << "\n";
    }
  }
  return status == "accepted" ? 0 : 1;
}

int run_normalize(const std::string& proofPath, const std::string& sigPath,
                  bool wantTrace, const std::string& outPath) {
  Signature sig = load_signature(sigPath);
  DerivPtr d = parse_derivation(read_file(proofPath), sig);
  try {
    check(d, CalculusId::MQST);
  } catch (const RuleViolation& e) {
    std::cerr << "input does not check: " << e.what() << "\n";
    return 1;
  }
  std::vector<std::string> trace;
  DerivPtr n = normalize(d, &trace);
  check(n, CalculusId::MQST);  // re-check before writing
  std::string text;
  if (wantTrace)
    for (auto& t : trace) text += "# " + t + "\n";
  text += print_derivation(n);
  emit(text, outPath);
  return 0;
}

int run_interpolate(const std::string& proofPath, const std::string& splitPath,
                    const std::string& sigPath, bool strict, const std::string& outPath) {
  Signature sig = load_signature(sigPath);
  DerivPtr d = parse_derivation(read_file(proofPath), sig);
  Split split = load_split(splitPath);
  try {
    check(d, CalculusId::MQST);
  } catch (const RuleViolation& e) {
    std::cerr << "input does not check: " << e.what() << "\n";
    return 1;
  }
  if (!is_normal(d)) {
    if (strict) {
      std::cerr << "input is not normal (rerun without --strict to normalize first)\n";
      return 1;
    }
    std::cerr << "notice: input is not normal; normalizing first\n";
    d = normalize(d);
  }
  InterpolationResult r = interpolate(d, split, sig);
  std::ostringstream out;
  out << "interpolant: " << r.interpolant.size() << "\n";
  for (auto& m : r.interpolant) out << "  " << print(m) << "\n";
  out << "shared relations:";
  for (auto& s : r.shared_relations) out << " " << s;
  out << "\nshared free variables:";
  for (auto& v : r.shared_free_vars) out << " " << v;
  out << "\n";
  for (size_t i = 0; i < r.d_left.size(); ++i)
    out << "left certificate " << i + 1 << ":\n" << print_derivation(r.d_left[i]);
  out << "right certificate:\n" << print_derivation(r.d_right);
  emit(out.str(), outPath);
  return 0;
}

int run_translate(const std::string& proofPath, const std::string& to,
                  const std::string& sigPath, const std::string& outPath) {
  Signature sig = load_signature(sigPath);
  DerivPtr d = parse_derivation(read_file(proofPath), sig);
  DerivPtr out;
  if (to == "epsilon") {
    try {
      check(d, CalculusId::STHC);
    } catch (const RuleViolation&) {
      check(d, CalculusId::STH);  // accept STH input via the macro embedding
      d = embed_sth_in_sthc(d);
    }
    out = derivation_to_epsilon(d);
    check(out, CalculusId::E);
  } else if (to == "sthc") {
    check(d, CalculusId::E);
    out = derivation_to_sthc(d);
    check(out, CalculusId::STHC);
  } else {
    throw UsageError("--to must be epsilon or sthc");
  }
  emit(print_derivation(out), outPath);
  return 0;
}

int run_roundtrip_ew(const std::string& formulaPath, const std::string& sigPath,
                     const std::string& outPath) {
  Signature sig = load_signature(sigPath);
  std::string text = read_file(formulaPath);
  // First non-comment line holds the formula.
  std::istringstream in(text);
  std::string line, src;
  while (std::getline(in, line)) {
    std::string t = line;
    t.erase(0, t.find_first_not_of(" \t"));
    if (t.empty() || t[0] == '#') continue;
    src = t;
    break;
  }
  if (src.empty()) throw UsageError("no formula in input file");
  FormulaPtr phi = parse_formula(src, sig);
  DerivationPair p = ew_roundtrip(phi);
  check(p.forward, CalculusId::STHC);
  check(p.backward, CalculusId::STHC);
  std::string outText = "# forward\n" + print_derivation(p.forward) + "# backward\n" +
                        print_derivation(p.backward);
  emit(outText, outPath);
  return 0;
}

int run_countermodel(const std::string& sequentsPath, const std::string& sigPath,
                     int maxDomain, bool twoValued, long long budget,
                     const std::string& outPath) {
  Signature sig = load_signature(sigPath);
  std::vector<Sequent> all = load_sequents(sequentsPath, sig);
  if (all.empty()) throw UsageError("sequents file is empty");
  Sequent goal = all.back();
  all.pop_back();
  Verdict v = consequence_bounded(all, goal, maxDomain, twoValued, budget);
  if (!v.countermodel) {
    std::cout << "no countermodel up to bound " << maxDomain << "\n";
    return 0;
  }
  std::string text = print_model(v.model);
  for (auto& [var, e] : v.assignment)
    text += "# assign " + var + " = " + v.model.domain[e] + "\n";
  std::cout << "countermodel found (" << v.models_tried << " candidates tried)\n";
  if (outPath.empty())
    std::cout << text;
  else
    write_file(outPath, text);
  return 1;
}

int run_eval(const std::string& modelPath, const std::string& sequentsPath,
             const std::string& sigPath) {
  Signature sig = load_signature(sigPath);
  FiniteSTModel m = parse_model(read_file(modelPath), sig);
  std::vector<Sequent> xs = load_sequents(sequentsPath, sig);
  bool all = true;
  for (auto& s : xs) {
    bool ok = satisfies(m, s);
    all = all && ok;
    std::cout << (ok ? "satisfied" : "falsified") << ": " << print(s) << "\n";
  }
  return all ? 0 : 1;
}

int run_roundtrip(const std::string& proofPath, const std::string& calName,
                  const std::string& sigPath) {
  CalculusId cal = calculus_from_name(calName);
  Signature sig = load_signature(sigPath);
  DerivPtr d = parse_derivation(read_file(proofPath), sig);
  check(d, cal);
  std::string once = print_derivation(d);
  DerivPtr d2 = parse_derivation(once, sig);
  check(d2, cal);
  if (print_derivation(d2) != once) {
    std::cout << "round trip is not stable\n";
    return 1;
  }
  std::cout << "round trip stable (" << node_count(d) << " nodes)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proof toolkit for strict-tolerant sequent calculi"};
  app.require_subcommand(1);

  std::string proofPath, sigPath, outPath, calName, splitPath, to, modelPath, seqPath;
  bool json = false, wantTrace = false, strict = false, twoValued = false, rtew = false;
  int maxDomain = 2;
  long long budget = 10000000;

  auto* cCheck = app.add_subcommand("check", "Check a derivation against a calculus");
  cCheck->add_option("proof", proofPath)->required();
  cCheck->add_option("--calculus", calName)->required();
  cCheck->add_option("--sig", sigPath);
  cCheck->add_flag("--json", json);

  auto* cNorm = app.add_subcommand("normalize", "Normalize an MQST derivation");
  cNorm->add_option("proof", proofPath)->required();
  cNorm->add_option("--sig", sigPath);
  cNorm->add_flag("--trace", wantTrace);
  cNorm->add_option("-o,--output", outPath);

  auto* cInt = app.add_subcommand("interpolate", "Split-interpolate a normal MQST derivation");
  cInt->add_option("proof", proofPath)->required();
  cInt->add_option("split", splitPath)->required();
  cInt->add_option("--sig", sigPath);
  cInt->add_flag("--strict", strict, "reject non-normal input instead of normalizing");
  cInt->add_option("-o,--output", outPath);

  auto* cTr = app.add_subcommand("translate", "Translate between witness and epsilon calculi");
  cTr->add_option("input", proofPath)->required();
  cTr->add_option("--to", to, "epsilon or sthc");
  cTr->add_flag("--roundtrip-ew", rtew, "input is a formula; emit the witness round-trip pair");
  cTr->add_option("--sig", sigPath);
  cTr->add_option("-o,--output", outPath);

  auto* cCm = app.add_subcommand("countermodel", "Bounded countermodel search; last sequent is the goal");
  cCm->add_option("sequents", seqPath)->required();
  cCm->add_option("--max-domain", maxDomain);
  cCm->add_flag("--two-valued", twoValued);
  cCm->add_option("--budget", budget);
  cCm->add_option("--sig", sigPath);
  cCm->add_option("-o,--output", outPath);

  auto* cEv = app.add_subcommand("eval", "Evaluate sequents in a finite model");
  cEv->add_option("model", modelPath)->required();
  cEv->add_option("sequents", seqPath)->required();
  cEv->add_option("--sig", sigPath);

  auto* cRt = app.add_subcommand("roundtrip", "Print/parse stability of a derivation");
  cRt->add_option("proof", proofPath)->required();
  cRt->add_option("--calculus", calName)->required();
  cRt->add_option("--sig", sigPath);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cCheck) return run_check(proofPath, calName, sigPath, json);
    if (*cNorm) return run_normalize(proofPath, sigPath, wantTrace, outPath);
    if (*cInt) return run_interpolate(proofPath, splitPath, sigPath, strict, outPath);
    if (*cTr)
      return rtew ? run_roundtrip_ew(proofPath, sigPath, outPath)
                  : run_translate(proofPath, to, sigPath, outPath);
    if (*cCm) return run_countermodel(seqPath, sigPath, maxDomain, twoValued, budget, outPath);
    if (*cEv) return run_eval(modelPath, seqPath, sigPath);
    if (*cRt) return run_roundtrip(proofPath, calName, sigPath);
  } catch (const BudgetExceeded& e) {
    std::cerr << "search budget exhausted: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const RuleViolation& e) {
    std::cerr << "derivation rejected: " << e.what() << "\n";
    return 1;
  } catch (const TransformError& e) {
    std::cerr << "transformation failed: " << e.what() << "\n";
    return 1;
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SemanticsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
