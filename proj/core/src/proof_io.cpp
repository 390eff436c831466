#include "stproof/proof_io.hpp"

#include <fstream>
#include <sstream>

namespace stp {

char principal_side(RuleId r) {
  switch (r) {
    case RuleId::ID: case RuleId::GID: case RuleId::Cut:
      return 'B';
    case RuleId::WL: case RuleId::CL:
    case RuleId::AndLI: case RuleId::AndLE:
    case RuleId::OrLI: case RuleId::OrLE:
    case RuleId::NegLI: case RuleId::NegLE:
    case RuleId::AllL: case RuleId::ExL:
    case RuleId::UWI: case RuleId::EWE:
    case RuleId::AllLWI: case RuleId::AllLWE:
    case RuleId::ExLWI: case RuleId::ExLWE:
    case RuleId::WExchLI: case RuleId::WExchLE:
    case RuleId::ExLEps: case RuleId::AllLEps:
    case RuleId::ExLE: case RuleId::AllLI:
    case RuleId::ExLI: case RuleId::AllLE:
      return 'L';
    default:
      return 'R';
  }
}

namespace {

void print_node(const DerivPtr& d, int indent, std::string& out) {
  out.append(indent, ' ');
  if (d->kind == NodeKind::Assumption) {
    out += "Assumption; label=" + d->label;
  } else if (d->kind == NodeKind::Discharged) {
    out += "Discharged; label=" + d->label;
  } else {
    out += rule_name(d->rule);
    if (d->params.term) out += "; term=" + print(d->params.term);
    if (!d->params.eigen.empty()) out += "; eigen=" + d->params.eigen;
    if (d->params.principal)
      out += std::string("; principal=") + principal_side(d->rule) + ":" +
             print(d->params.principal);
    if (d->params.select) out += "; select=" + std::to_string(d->params.select);
    if (!d->binds.empty()) out += "; binds=" + d->binds;
  }
  out += "; sequent=" + print(d->sequent);
  out += "\n";
  for (auto& c : d->children) print_node(c, indent + 2, out);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string print_derivation(const DerivPtr& d) {
  std::string out;
  print_node(d, 0, out);
  return out;
}

DerivPtr parse_derivation(const std::string& text, Signature& sig, bool learn) {
  struct Entry {
    int indent;
    std::shared_ptr<Derivation> node;
  };
  std::vector<Entry> stack;
  std::shared_ptr<Derivation> root;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto at = [&](const std::string& msg) {
      return ParseError("line " + std::to_string(lineno) + ": " + msg);
    };
    std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    int indent = 0;
    while (indent < static_cast<int>(line.size()) && line[indent] == ' ') ++indent;
    if (indent % 2) throw at("odd indentation");

    auto node = std::make_shared<Derivation>();
    bool haveSequent = false;
    size_t pos = 0, semi = body.find(';');
    std::string head = trim(body.substr(0, semi));
    if (head == "Assumption") {
      node->kind = NodeKind::Assumption;
    } else if (head == "Discharged") {
      node->kind = NodeKind::Discharged;
    } else {
      node->kind = NodeKind::Rule;
      try {
        node->rule = rule_from_name(head);
      } catch (const SyntaxError& e) {
        throw at(e.what());
      }
    }
    pos = semi;
    while (pos != std::string::npos) {
      size_t next = body.find(';', pos + 1);
      std::string field = trim(body.substr(pos + 1, next == std::string::npos
                                                        ? std::string::npos
                                                        : next - pos - 1));
      pos = next;
      if (field.empty()) continue;
      size_t eq = field.find('=');
      if (eq == std::string::npos) throw at("malformed field: " + field);
      std::string key = field.substr(0, eq);
      std::string value = field.substr(eq + 1);
      try {
        if (key == "label") {
          node->label = value;
        } else if (key == "term") {
          node->params.term = parse_term(value, sig, learn);
        } else if (key == "eigen") {
          node->params.eigen = value;
        } else if (key == "principal") {
          if (value.size() < 2 || value[1] != ':' ||
              (value[0] != 'L' && value[0] != 'R' && value[0] != 'B'))
            throw at("principal= must start with L:, R:, or B:");
          node->params.principal = parse_formula(value.substr(2), sig, learn);
        } else if (key == "select") {
          node->params.select = std::stoi(value);
        } else if (key == "binds") {
          node->binds = value;
        } else if (key == "sequent") {
          node->sequent = parse_sequent(value, sig, learn);
          haveSequent = true;
        } else {
          throw at("unknown field: " + key);
        }
      } catch (const ParseError&) {
        throw;
      } catch (const SyntaxError& e) {
        throw at(e.what());
      }
    }
    if (!haveSequent) throw at("node without sequent=");
    if ((node->kind != NodeKind::Rule) && node->label.empty())
      throw at("assumption without label=");

    while (!stack.empty() && stack.back().indent >= indent) stack.pop_back();
    if (stack.empty()) {
      if (root) throw at("multiple roots");
      if (indent != 0) throw at("root must not be indented");
      root = node;
    } else {
      if (indent != stack.back().indent + 2)
        throw at("child indented by other than two spaces");
      stack.back().node->children.push_back(node);
    }
    stack.push_back({indent, node});
  }
  if (!root) throw ParseError("empty derivation");
  return root;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SyntaxError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SyntaxError("cannot write " + path);
  out << content;
}

}  // namespace stp
