#include "kcopt/circuit.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace kcopt {

Lit Lit::from_dimacs(int code) {
  if (code == 0) throw FormatError("literal code 0 is not a literal");
  return Lit(code > 0 ? code : -code, code > 0);
}

Term normalize_term(Term t) {
  std::sort(t.begin(), t.end());
  Term out;
  for (const Lit& l : t) {
    if (l.var < 1) throw Error("literal with variable index < 1");
    if (!out.empty() && out.back().var == l.var) {
      if (out.back().positive != l.positive)
        throw InconsistentTerm("term contains a variable and its negation");
      continue;  // duplicate literal
    }
    out.push_back(l);
  }
  return out;
}

bool lex_less(const Interpretation& a, const Interpretation& b) {
  int n = std::min(a.num_vars(), b.num_vars());
  for (Var v = 1; v <= n; ++v) {
    if (a.value(v) != b.value(v)) return !a.value(v);
  }
  return a.num_vars() < b.num_vars();
}

PartialInterpretation PartialInterpretation::from_term(const Term& t) {
  PartialInterpretation g;
  for (const Lit& l : t) g.assign(l.var, l.positive);
  return g;
}

void PartialInterpretation::assign(Var v, bool b) {
  auto [it, inserted] = entries_.emplace(v, b);
  if (!inserted && it->second != b)
    throw InconsistentTerm("variable assigned to both values");
}

std::optional<bool> PartialInterpretation::value(Var v) const {
  auto it = entries_.find(v);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

Term PartialInterpretation::to_term() const {
  Term t;
  t.reserve(entries_.size());
  for (auto [v, b] : entries_) t.emplace_back(v, b);
  return t;
}

// --- NnfCircuit ----------------------------------------------------------

NnfCircuit NnfCircuit::from_nodes(std::vector<NnfNode> nodes, int num_vars) {
  if (nodes.empty()) throw Error("circuit must have at least one node");
  if (num_vars < 0) throw Error("negative variable count");
  for (size_t i = 0; i < nodes.size(); ++i) {
    const NnfNode& n = nodes[i];
    switch (n.kind) {
      case NodeKind::True:
      case NodeKind::False:
        if (!n.children.empty()) throw Error("constant node with children");
        break;
      case NodeKind::Lit:
        if (!n.children.empty()) throw Error("literal node with children");
        if (n.lit.var < 1 || n.lit.var > num_vars)
          throw Error("literal variable out of range");
        break;
      case NodeKind::And:
      case NodeKind::Or:
        if (n.children.empty())
          throw Error("0-ary And/Or must be stored as a constant node");
        for (int ch : n.children)
          if (ch < 0 || ch >= (int)i)
            throw Error("child id must be smaller than the node id");
        break;
    }
  }
  NnfCircuit c;
  c.nodes_ = std::move(nodes);
  c.num_vars_ = num_vars;
  return c;
}

int NnfCircuit::edge_count() const {
  int edges = 0;
  for (const NnfNode& n : nodes_) edges += (int)n.children.size();
  return edges;
}

// --- NnfBuilder ----------------------------------------------------------

NnfBuilder::NnfBuilder(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 0) throw Error("negative variable count");
}

int NnfBuilder::add(NnfNode n) {
  nodes_.push_back(std::move(n));
  return (int)nodes_.size() - 1;
}

int NnfBuilder::constant(bool value) {
  int& id = value ? true_id_ : false_id_;
  if (id < 0) id = add({value ? NodeKind::True : NodeKind::False, {}, 0, {}});
  return id;
}

int NnfBuilder::literal(Lit l) {
  if (l.var < 1 || l.var > num_vars_)
    throw Error("literal variable out of range");
  auto [it, inserted] = literal_ids_.emplace(l.to_dimacs(), -1);
  if (inserted) it->second = add({NodeKind::Lit, l, 0, {}});
  return it->second;
}

int NnfBuilder::conj(std::vector<int> children) {
  if (children.empty()) return constant(true);
  for (int ch : children)
    if (ch < 0 || ch >= (int)nodes_.size()) throw Error("unknown child id");
  return add({NodeKind::And, {}, 0, std::move(children)});
}

int NnfBuilder::disj(std::vector<int> children, int hint) {
  if (children.empty()) {
    int id = constant(false);
    if (hint != 0) return add({NodeKind::False, {}, hint, {}});
    return id;
  }
  for (int ch : children)
    if (ch < 0 || ch >= (int)nodes_.size()) throw Error("unknown child id");
  return add({NodeKind::Or, {}, hint, std::move(children)});
}

int NnfBuilder::conj_fold(std::vector<int> children) {
  std::vector<int> kept;
  for (int ch : children) {
    NodeKind k = nodes_.at(ch).kind;
    if (k == NodeKind::False) return constant(false);
    if (k == NodeKind::True) continue;
    kept.push_back(ch);
  }
  if (kept.empty()) return constant(true);
  if (kept.size() == 1) return kept.front();
  return conj(std::move(kept));
}

int NnfBuilder::disj_fold(std::vector<int> children, int hint) {
  std::vector<int> kept;
  for (int ch : children) {
    NodeKind k = nodes_.at(ch).kind;
    if (k == NodeKind::True) return constant(true);
    if (k == NodeKind::False) continue;
    kept.push_back(ch);
  }
  if (kept.empty()) return constant(false);
  if (kept.size() == 1) return kept.front();
  return disj(std::move(kept), hint);
}

int NnfBuilder::term(const Term& t) {
  if (t.empty()) return constant(true);
  if (t.size() == 1) return literal(t.front());
  std::vector<int> children;
  children.reserve(t.size());
  for (const Lit& l : t) children.push_back(literal(l));
  return conj(std::move(children));
}

NnfCircuit NnfBuilder::finish(int root) const {
  if (root < 0 || root >= (int)nodes_.size()) throw Error("unknown root id");
  std::vector<char> reachable(nodes_.size(), 0);
  std::vector<int> stack{root};
  reachable[root] = 1;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    for (int ch : nodes_[id].children)
      if (!reachable[ch]) {
        reachable[ch] = 1;
        stack.push_back(ch);
      }
  }
  std::vector<int> remap(nodes_.size(), -1);
  std::vector<NnfNode> out;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (!reachable[i]) continue;
    NnfNode n = nodes_[i];
    for (int& ch : n.children) ch = remap[ch];
    remap[i] = (int)out.size();
    out.push_back(std::move(n));
  }
  return NnfCircuit::from_nodes(std::move(out), num_vars_);
}

// --- c2d NNF format ------------------------------------------------------

namespace {

bool content_line(std::istream& in, std::string& out) {
  std::string line;
  while (std::getline(in, line)) {
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line[i] == 'c' &&
        (i + 1 == line.size() || line[i + 1] == ' ' || line[i + 1] == '\t' ||
         line[i + 1] == '\r'))
      continue;
    out = line;
    return true;
  }
  return false;
}

void expect_done(std::istringstream& iss, const char* what) {
  std::string extra;
  if (iss >> extra) throw FormatError(std::string("trailing tokens on ") + what);
}

int read_int(std::istringstream& iss, const char* what) {
  int value;
  if (!(iss >> value)) throw FormatError(std::string("expected integer in ") + what);
  return value;
}

}  // namespace

NnfCircuit parse_nnf(std::istream& in) {
  std::string line;
  if (!content_line(in, line)) throw FormatError("missing nnf header");
  std::istringstream header(line);
  std::string tag;
  header >> tag;
  if (tag != "nnf") throw FormatError("header must start with 'nnf'");
  int node_count = read_int(header, "header");
  int edge_count = read_int(header, "header");
  int num_vars = read_int(header, "header");
  expect_done(header, "header");
  if (node_count < 1) throw FormatError("circuit must have at least one node");
  if (edge_count < 0 || num_vars < 0) throw FormatError("negative count in header");

  std::vector<NnfNode> nodes;
  nodes.reserve(node_count);
  int edges = 0;
  for (int id = 0; id < node_count; ++id) {
    if (!content_line(in, line)) throw FormatError("fewer node lines than declared");
    std::istringstream iss(line);
    std::string kind;
    iss >> kind;
    if (kind == "L") {
      int code = read_int(iss, "literal line");
      if (code == 0) throw FormatError("literal 0");
      int v = code > 0 ? code : -code;
      if (v > num_vars) throw FormatError("literal variable out of range");
      nodes.push_back({NodeKind::Lit, Lit::from_dimacs(code), 0, {}});
    } else if (kind == "A") {
      int arity = read_int(iss, "And line");
      if (arity < 0) throw FormatError("negative And arity");
      if (arity == 0) {
        nodes.push_back({NodeKind::True, {}, 0, {}});
      } else {
        std::vector<int> children(arity);
        for (int& ch : children) {
          ch = read_int(iss, "And line");
          if (ch < 0 || ch >= id) throw FormatError("forward or invalid child reference");
        }
        edges += arity;
        nodes.push_back({NodeKind::And, {}, 0, std::move(children)});
      }
    } else if (kind == "O") {
      int hint = read_int(iss, "Or line");
      int arity = read_int(iss, "Or line");
      if (hint < 0 || hint > num_vars) throw FormatError("Or hint out of range");
      if (arity < 0) throw FormatError("negative Or arity");
      if (arity == 0) {
        nodes.push_back({NodeKind::False, {}, hint, {}});
      } else {
        std::vector<int> children(arity);
        for (int& ch : children) {
          ch = read_int(iss, "Or line");
          if (ch < 0 || ch >= id) throw FormatError("forward or invalid child reference");
        }
        edges += arity;
        nodes.push_back({NodeKind::Or, {}, hint, std::move(children)});
      }
    } else {
      throw FormatError("unknown node line '" + kind + "'");
    }
    expect_done(iss, "node line");
  }
  if (edges != edge_count) throw FormatError("edge count does not match header");
  if (content_line(in, line)) throw FormatError("more node lines than declared");
  return NnfCircuit::from_nodes(std::move(nodes), num_vars);
}

NnfCircuit parse_nnf(const std::string& text) {
  std::istringstream in(text);
  return parse_nnf(in);
}

void serialize_nnf(const NnfCircuit& c, std::ostream& out) {
  out << "nnf " << c.size() << ' ' << c.edge_count() << ' ' << c.num_vars()
      << '\n';
  for (const NnfNode& n : c.nodes()) {
    switch (n.kind) {
      case NodeKind::True:
        out << "A 0\n";
        break;
      case NodeKind::False:
        out << "O " << n.or_hint << " 0\n";
        break;
      case NodeKind::Lit:
        out << "L " << n.lit.to_dimacs() << '\n';
        break;
      case NodeKind::And:
        out << "A " << n.children.size();
        for (int ch : n.children) out << ' ' << ch;
        out << '\n';
        break;
      case NodeKind::Or:
        out << "O " << n.or_hint << ' ' << n.children.size();
        for (int ch : n.children) out << ' ' << ch;
        out << '\n';
        break;
    }
  }
}

std::string serialize_nnf(const NnfCircuit& c) {
  std::ostringstream out;
  serialize_nnf(c, out);
  return out.str();
}

// --- queries -------------------------------------------------------------

std::vector<VarSet> vars_of_all(const NnfCircuit& c) {
  std::vector<VarSet> sets(c.size(), VarSet(c.num_vars() + 1));
  for (int id = 0; id < c.size(); ++id) {
    const NnfNode& n = c.node(id);
    if (n.kind == NodeKind::Lit) {
      sets[id].set(n.lit.var);
    } else {
      for (int ch : n.children) sets[id] |= sets[ch];
    }
  }
  return sets;
}

VarSet vars_of(const NnfCircuit& c, int node) { return vars_of_all(c).at(node); }

std::vector<Var> var_list(const NnfCircuit& c) {
  VarSet s = vars_of(c, c.root());
  std::vector<Var> out;
  for (Var v = 1; v <= c.num_vars(); ++v)
    if (s.test(v)) out.push_back(v);
  return out;
}

DecomposabilityReport check_decomposable(const NnfCircuit& c) {
  std::vector<VarSet> sets = vars_of_all(c);
  for (int id = 0; id < c.size(); ++id) {
    const NnfNode& n = c.node(id);
    if (n.kind != NodeKind::And) continue;
    VarSet seen(c.num_vars() + 1);
    for (int ch : n.children) {
      if (seen.intersects(sets[ch])) return {false, id};
      seen |= sets[ch];
    }
  }
  return {true, -1};
}

NnfCircuit condition(const NnfCircuit& c, const PartialInterpretation& gamma) {
  for (auto [v, b] : gamma.entries()) {
    (void)b;
    if (v < 1 || v > c.num_vars())
      throw Error("conditioning variable out of range");
  }
  NnfBuilder builder(c.num_vars());
  std::vector<int> remap(c.size(), -1);
  for (int id = 0; id < c.size(); ++id) {
    const NnfNode& n = c.node(id);
    switch (n.kind) {
      case NodeKind::True:
        remap[id] = builder.constant(true);
        break;
      case NodeKind::False:
        remap[id] = builder.constant(false);
        break;
      case NodeKind::Lit: {
        std::optional<bool> b = gamma.value(n.lit.var);
        remap[id] = b ? builder.constant(*b == n.lit.positive)
                      : builder.literal(n.lit);
        break;
      }
      case NodeKind::And: {
        // And with a False child is False; True children are dropped.
        std::vector<int> kept;
        bool dead = false;
        for (int ch : n.children) {
          NodeKind k = builder.node(remap[ch]).kind;
          if (k == NodeKind::False) { dead = true; break; }
          if (k == NodeKind::True) continue;
          kept.push_back(remap[ch]);
        }
        remap[id] = dead          ? builder.constant(false)
                    : kept.empty() ? builder.constant(true)
                                   : builder.conj(std::move(kept));
        break;
      }
      case NodeKind::Or: {
        std::vector<int> kept;
        bool live = false;
        for (int ch : n.children) {
          NodeKind k = builder.node(remap[ch]).kind;
          if (k == NodeKind::True) { live = true; break; }
          if (k == NodeKind::False) continue;
          kept.push_back(remap[ch]);
        }
        remap[id] = live          ? builder.constant(true)
                    : kept.empty() ? builder.constant(false)
                                   : builder.disj(std::move(kept), n.or_hint);
        break;
      }
    }
  }
  return builder.finish(remap[c.root()]);
}

bool consistent(const NnfCircuit& c) {
  DecomposabilityReport rep = check_decomposable(c);
  if (!rep.decomposable)
    throw NotDecomposable("circuit is not decomposable (And node " +
                          std::to_string(rep.violating_and) +
                          " shares variables); use the enumeration oracle");
  std::vector<char> sat(c.size(), 0);
  for (int id = 0; id < c.size(); ++id) {
    const NnfNode& n = c.node(id);
    switch (n.kind) {
      case NodeKind::True:
      case NodeKind::Lit:
        sat[id] = 1;
        break;
      case NodeKind::False:
        sat[id] = 0;
        break;
      case NodeKind::And: {
        sat[id] = 1;
        for (int ch : n.children) sat[id] &= sat[ch];
        break;
      }
      case NodeKind::Or: {
        sat[id] = 0;
        for (int ch : n.children) sat[id] |= sat[ch];
        break;
      }
    }
  }
  return sat[c.root()] != 0;
}

NnfCircuit smooth(const NnfCircuit& c, const std::vector<Var>& over) {
  DecomposabilityReport rep = check_decomposable(c);
  if (!rep.decomposable)
    throw NotDecomposable("smoothing requires a decomposable circuit");
  int out_vars = c.num_vars();
  for (Var v : over) {
    if (v < 1) throw Error("smoothing variable out of range");
    out_vars = std::max(out_vars, v);
  }
  VarSet target(out_vars + 1);
  for (Var v : over) target.set(v);
  std::vector<VarSet> sets = vars_of_all(c);
  for (Var v = 1; v <= c.num_vars(); ++v)
    if (sets[c.root()].test(v) && !target.test(v))
      throw Error("smoothing set must contain every circuit variable");

  NnfBuilder builder(out_vars);
  std::vector<int> gadget(out_vars + 1, -1);
  auto gadget_for = [&](Var v) {
    if (gadget[v] < 0)
      gadget[v] = builder.disj({builder.literal(Lit(v, true)),
                                builder.literal(Lit(v, false))});
    return gadget[v];
  };
  // Wraps `id` so its variable set grows to node_vars.
  auto pad = [&](int id, const VarSet& node_vars, const VarSet& child_vars) {
    std::vector<int> parts;
    if (builder.node(id).kind != NodeKind::True) parts.push_back(id);
    for (Var v = 1; v < (Var)node_vars.size(); ++v)
      if (node_vars.test(v) && !child_vars.test(v)) parts.push_back(gadget_for(v));
    if (parts.empty()) return builder.constant(true);
    if (parts.size() == 1) return parts.front();
    return builder.conj(std::move(parts));
  };

  std::vector<int> remap(c.size(), -1);
  for (int id = 0; id < c.size(); ++id) {
    const NnfNode& n = c.node(id);
    switch (n.kind) {
      case NodeKind::True:
        remap[id] = builder.constant(true);
        break;
      case NodeKind::False:
        remap[id] = builder.constant(false);
        break;
      case NodeKind::Lit:
        remap[id] = builder.literal(n.lit);
        break;
      case NodeKind::And: {
        std::vector<int> children;
        for (int ch : n.children) children.push_back(remap[ch]);
        remap[id] = builder.conj(std::move(children));
        break;
      }
      case NodeKind::Or: {
        // False children vanish so the survivors can be balanced.
        std::vector<int> children;
        for (int ch : n.children) {
          if (c.node(ch).kind == NodeKind::False) continue;
          children.push_back(pad(remap[ch], sets[id], sets[ch]));
        }
        remap[id] = children.empty() ? builder.constant(false)
                                     : builder.disj(std::move(children), n.or_hint);
        break;
      }
    }
  }
  VarSet root_vars(out_vars + 1);
  for (Var v = 1; v <= c.num_vars(); ++v)
    if (sets[c.root()].test(v)) root_vars.set(v);
  return builder.finish(pad(remap[c.root()], target, root_vars));
}

bool is_smooth_over_all_vars(const NnfCircuit& c) {
  std::vector<VarSet> sets = vars_of_all(c);
  for (int id = 0; id < c.size(); ++id) {
    const NnfNode& n = c.node(id);
    if (n.kind != NodeKind::Or) continue;
    for (int ch : n.children)
      if (sets[ch] != sets[id]) return false;
  }
  return (int)sets[c.root()].count() == c.num_vars();
}

bool evaluate(const NnfCircuit& c, const Interpretation& omega) {
  if (omega.num_vars() < c.num_vars())
    throw Error("interpretation covers fewer variables than the circuit");
  std::vector<char> val(c.size(), 0);
  for (int id = 0; id < c.size(); ++id) {
    const NnfNode& n = c.node(id);
    switch (n.kind) {
      case NodeKind::True:
        val[id] = 1;
        break;
      case NodeKind::False:
        val[id] = 0;
        break;
      case NodeKind::Lit:
        val[id] = omega.satisfies(n.lit) ? 1 : 0;
        break;
      case NodeKind::And: {
        val[id] = 1;
        for (int ch : n.children) val[id] &= val[ch];
        break;
      }
      case NodeKind::Or: {
        val[id] = 0;
        for (int ch : n.children) val[id] |= val[ch];
        break;
      }
    }
  }
  return val[c.root()] != 0;
}

PartialInterpretation extract_model(const NnfCircuit& c) {
  if (!consistent(c)) throw Inconsistent("circuit has no model");
  // consistent() already ruled out non-decomposable input.
  std::vector<char> sat(c.size(), 0);
  for (int id = 0; id < c.size(); ++id) {
    const NnfNode& n = c.node(id);
    if (n.kind == NodeKind::True || n.kind == NodeKind::Lit) {
      sat[id] = 1;
    } else if (n.kind == NodeKind::And) {
      sat[id] = 1;
      for (int ch : n.children) sat[id] &= sat[ch];
    } else if (n.kind == NodeKind::Or) {
      for (int ch : n.children) sat[id] |= sat[ch];
    }
  }
  PartialInterpretation model;
  std::vector<int> stack{c.root()};
  std::vector<char> visited(c.size(), 0);
  visited[c.root()] = 1;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const NnfNode& n = c.node(id);
    if (n.kind == NodeKind::Lit) {
      model.assign(n.lit.var, n.lit.positive);
    } else if (n.kind == NodeKind::And) {
      for (int ch : n.children)
        if (!visited[ch]) {
          visited[ch] = 1;
          stack.push_back(ch);
        }
    } else if (n.kind == NodeKind::Or) {
      for (int ch : n.children)
        if (sat[ch]) {
          if (!visited[ch]) {
            visited[ch] = 1;
            stack.push_back(ch);
          }
          break;
        }
    }
  }
  return model;
}

}  // namespace kcopt
