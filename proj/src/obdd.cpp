#include "kcopt/obdd.hpp"

#include <algorithm>
#include <climits>
#include <istream>
#include <ostream>
#include <sstream>

namespace kcopt {

namespace {

uint64_t unique_key(Var v, ObddId lo, ObddId hi) {
  // ids stay far below 2^24 at the scales this engine is built for
  return (uint64_t)v << 48 | (uint64_t)(uint32_t)lo << 24 | (uint32_t)hi;
}

uint64_t cache_key(BoolOp op, ObddId f, ObddId g) {
  return (uint64_t)op << 60 | (uint64_t)(uint32_t)f << 30 | (uint32_t)g;
}

}  // namespace

ObddManager::ObddManager(int num_vars) {
  if (num_vars < 0) throw Error("negative variable count");
  order_.resize(num_vars);
  for (int i = 0; i < num_vars; ++i) order_[i] = i + 1;
  pos_.assign(num_vars + 1, -1);
  for (int i = 0; i < num_vars; ++i) pos_[order_[i]] = i;
  nodes_.resize(2);  // terminals
}

ObddManager::ObddManager(int num_vars, std::vector<Var> order) {
  if (num_vars < 0) throw Error("negative variable count");
  if ((int)order.size() != num_vars)
    throw Error("order length differs from the variable count");
  pos_.assign(num_vars + 1, -1);
  for (int i = 0; i < num_vars; ++i) {
    Var v = order[i];
    if (v < 1 || v > num_vars || pos_[v] != -1)
      throw Error("order is not a permutation of 1..num_vars");
    pos_[v] = i;
  }
  order_ = std::move(order);
  nodes_.resize(2);
}

int ObddManager::position(Var v) const {
  if (v < 1 || v >= (int)pos_.size()) throw Error("variable out of range");
  return pos_[v];
}

Var ObddManager::add_var() {
  Var v = (int)order_.size() + 1;
  order_.push_back(v);
  pos_.push_back((int)order_.size() - 1);
  return v;
}

const ObddNode& ObddManager::node(ObddId id) const {
  checked(id);
  if (is_terminal(id)) throw Error("terminals have no decision node");
  return nodes_[id];
}

ObddId ObddManager::checked(ObddId id) const {
  if (id < 0 || id >= (int)nodes_.size())
    throw OrderMismatch("obdd id does not belong to this manager");
  return id;
}

ObddId ObddManager::make(Var v, ObddId lo, ObddId hi) {
  checked(lo);
  checked(hi);
  if (v < 1 || v > num_vars()) throw Error("variable out of range");
  if (lo == hi) return lo;
  uint64_t key = unique_key(v, lo, hi);
  auto [it, inserted] = unique_.emplace(key, (ObddId)nodes_.size());
  if (inserted) nodes_.push_back({v, lo, hi});
  return it->second;
}

ObddId ObddManager::literal(Lit l) {
  return l.positive ? make(l.var, false_id, true_id)
                    : make(l.var, true_id, false_id);
}

ObddId ObddManager::build_term(const Term& t) {
  Term n = normalize_term(t);
  // chain from the deepest variable up
  std::sort(n.begin(), n.end(), [&](const Lit& a, const Lit& b) {
    return position(a.var) > position(b.var);
  });
  ObddId acc = true_id;
  for (const Lit& l : n)
    acc = l.positive ? make(l.var, false_id, acc) : make(l.var, acc, false_id);
  return acc;
}

ObddId ObddManager::apply(BoolOp op, ObddId f, ObddId g) {
  checked(f);
  checked(g);
  if (is_terminal(f) && is_terminal(g)) {
    bool a = f == true_id, b = g == true_id, r = false;
    switch (op) {
      case BoolOp::And: r = a && b; break;
      case BoolOp::Or: r = a || b; break;
      case BoolOp::Xor: r = a != b; break;
      case BoolOp::Iff: r = a == b; break;
    }
    return r ? true_id : false_id;
  }
  if (f == g) {
    switch (op) {
      case BoolOp::And:
      case BoolOp::Or: return f;
      case BoolOp::Xor: return false_id;
      case BoolOp::Iff: return true_id;
    }
  }
  switch (op) {
    case BoolOp::And:
      if (f == false_id || g == false_id) return false_id;
      if (f == true_id) return g;
      if (g == true_id) return f;
      break;
    case BoolOp::Or:
      if (f == true_id || g == true_id) return true_id;
      if (f == false_id) return g;
      if (g == false_id) return f;
      break;
    case BoolOp::Xor:
      if (f == false_id) return g;
      if (g == false_id) return f;
      break;
    case BoolOp::Iff:
      if (f == true_id) return g;
      if (g == true_id) return f;
      break;
  }
  if (f > g) std::swap(f, g);  // all four ops are commutative
  uint64_t key = cache_key(op, f, g);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  int pf = is_terminal(f) ? INT_MAX : position(nodes_[f].var);
  int pg = is_terminal(g) ? INT_MAX : position(nodes_[g].var);
  int p = std::min(pf, pg);
  Var v = order_[p];
  ObddId f0 = pf == p ? nodes_[f].lo : f;
  ObddId f1 = pf == p ? nodes_[f].hi : f;
  ObddId g0 = pg == p ? nodes_[g].lo : g;
  ObddId g1 = pg == p ? nodes_[g].hi : g;
  ObddId r = make(v, apply(op, f0, g0), apply(op, f1, g1));
  cache_.emplace(key, r);
  return r;
}

ObddId ObddManager::biconditional_with_fresh(Var fresh, ObddId f) {
  if (fresh < 1 || fresh > num_vars()) throw Error("variable out of range");
  if (support(checked(f)).test(fresh))
    throw FreshVarOccurs("fresh variable already occurs in the formula");
  return apply(BoolOp::Iff, literal(Lit(fresh, true)), f);
}

bool ObddManager::evaluate(ObddId f, const Interpretation& omega) const {
  checked(f);
  while (!is_terminal(f)) {
    const ObddNode& n = nodes_[f];
    f = omega.value(n.var) ? n.hi : n.lo;
  }
  return f == true_id;
}

VarSet ObddManager::support(ObddId f) const {
  checked(f);
  VarSet s(num_vars() + 1);
  std::vector<ObddId> stack{f};
  std::vector<char> seen(nodes_.size(), 0);
  while (!stack.empty()) {
    ObddId id = stack.back();
    stack.pop_back();
    if (is_terminal(id) || seen[id]) continue;
    seen[id] = 1;
    s.set(nodes_[id].var);
    stack.push_back(nodes_[id].lo);
    stack.push_back(nodes_[id].hi);
  }
  return s;
}

NnfCircuit obdd_to_nnf(const ObddManager& m, ObddId f) {
  NnfBuilder builder(m.num_vars());
  if (f == ObddManager::false_id) return builder.finish(builder.constant(false));
  if (f == ObddManager::true_id) return builder.finish(builder.constant(true));

  // collect reachable decision nodes; children always have smaller ids
  std::vector<ObddId> reachable;
  std::vector<char> seen(m.node_count(), 0);
  std::vector<ObddId> stack{f};
  while (!stack.empty()) {
    ObddId id = stack.back();
    stack.pop_back();
    if (id < 2 || seen[id]) continue;
    seen[id] = 1;
    reachable.push_back(id);
    stack.push_back(m.node(id).lo);
    stack.push_back(m.node(id).hi);
  }
  std::sort(reachable.begin(), reachable.end());

  std::vector<int> remap(m.node_count(), -1);
  remap[ObddManager::false_id] = builder.constant(false);
  remap[ObddManager::true_id] = builder.constant(true);
  for (ObddId id : reachable) {
    const ObddNode& n = m.node(id);
    int lo_arm = builder.conj({builder.literal(Lit(n.var, false)), remap[n.lo]});
    int hi_arm = builder.conj({builder.literal(Lit(n.var, true)), remap[n.hi]});
    remap[id] = builder.disj({lo_arm, hi_arm}, n.var);
  }
  return builder.finish(remap[f]);
}

// --- file format -----------------------------------------------------------

namespace {

bool obdd_content_line(std::istream& in, std::string& out) {
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

}  // namespace

ParsedObdd parse_obdd(std::istream& in) {
  std::string line;
  if (!obdd_content_line(in, line)) throw FormatError("missing obdd header");
  std::istringstream header(line);
  std::string tag;
  int num_vars = -1, num_nodes = -1;
  if (!(header >> tag >> num_vars >> num_nodes) || tag != "obdd")
    throw FormatError("header must be 'obdd <numvars> <numnodes>'");
  std::string extra;
  if (header >> extra) throw FormatError("trailing tokens on obdd header");
  if (num_vars < 0 || num_nodes < 0) throw FormatError("negative count in header");

  if (!obdd_content_line(in, line)) throw FormatError("missing order line");
  std::istringstream order_line(line);
  if (!(order_line >> tag) || tag != "order")
    throw FormatError("expected the order line");
  std::vector<Var> order;
  int v;
  while (order_line >> v) order.push_back(v);
  if ((int)order.size() != num_vars)
    throw FormatError("order length differs from the variable count");

  ObddManager m = [&] {
    try {
      return ObddManager(num_vars, order);
    } catch (const Error& e) {
      throw FormatError(e.what());
    }
  }();

  for (int i = 0; i < num_nodes; ++i) {
    if (!obdd_content_line(in, line)) throw FormatError("fewer node lines than declared");
    std::istringstream iss(line);
    int id, var, lo, hi;
    if (!(iss >> id >> var >> lo >> hi)) throw FormatError("malformed node line");
    if (iss >> extra) throw FormatError("trailing tokens on node line");
    int expected = i + 2;
    if (id != expected) throw FormatError("node ids must be 2,3,... in order");
    if (var < 1 || var > num_vars) throw FormatError("node variable out of range");
    if (lo < 0 || lo >= expected || hi < 0 || hi >= expected)
      throw FormatError("child ids must reference terminals or earlier nodes");
    if (lo == hi) throw FormatError("node is not reduced (lo equals hi)");
    for (int child : {lo, hi})
      if (child >= 2 && m.position(var) >= m.position(m.node(child).var))
        throw FormatError("node violates the variable order");
    if (m.make(var, lo, hi) != expected)
      throw FormatError("duplicate (var, lo, hi) node");
  }

  if (!obdd_content_line(in, line)) throw FormatError("missing root line");
  std::istringstream root_line(line);
  int root;
  if (!(root_line >> tag >> root) || tag != "root")
    throw FormatError("expected the root line");
  if (root_line >> extra) throw FormatError("trailing tokens on root line");
  if (root < 0 || root >= num_nodes + 2) throw FormatError("root out of range");
  if (obdd_content_line(in, line)) throw FormatError("content after the root line");
  return {std::move(m), root};
}

void serialize_obdd(const ObddManager& m, ObddId root, std::ostream& out) {
  std::vector<ObddId> reachable;
  std::vector<char> seen(m.node_count(), 0);
  std::vector<ObddId> stack{root};
  while (!stack.empty()) {
    ObddId id = stack.back();
    stack.pop_back();
    if (id < 2 || seen[id]) continue;
    seen[id] = 1;
    reachable.push_back(id);
    stack.push_back(m.node(id).lo);
    stack.push_back(m.node(id).hi);
  }
  std::sort(reachable.begin(), reachable.end());

  out << "obdd " << m.num_vars() << ' ' << reachable.size() << '\n';
  out << "order";
  for (Var v : m.order()) out << ' ' << v;
  out << '\n';
  std::vector<int> remap(m.node_count(), -1);
  remap[ObddManager::false_id] = 0;
  remap[ObddManager::true_id] = 1;
  int next = 2;
  for (ObddId id : reachable) remap[id] = next++;
  for (ObddId id : reachable) {
    const ObddNode& n = m.node(id);
    out << remap[id] << ' ' << n.var << ' ' << remap[n.lo] << ' ' << remap[n.hi]
        << '\n';
  }
  out << "root " << (root < 2 ? root : remap[root]) << '\n';
}

std::string serialize_obdd(const ObddManager& m, ObddId root) {
  std::ostringstream out;
  serialize_obdd(m, root, out);
  return out.str();
}

}  // namespace kcopt
