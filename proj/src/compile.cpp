#include "kcopt/compile.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <sstream>

namespace kcopt {

CnfFormula parse_dimacs(std::istream& in) {
  std::string line;
  int num_vars = -1, num_clauses = -1;
  std::vector<std::vector<Lit>> clauses;
  std::vector<Lit> current;
  bool in_clause = false;

  while (std::getline(in, line)) {
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line[i] == 'c' &&
        (i + 1 == line.size() || line[i + 1] == ' ' || line[i + 1] == '\t' ||
         line[i + 1] == '\r'))
      continue;
    if (line[i] == 'p') {
      if (num_vars >= 0) throw FormatError("duplicate problem line");
      std::istringstream iss(line);
      std::string p, cnf;
      if (!(iss >> p >> cnf >> num_vars >> num_clauses) || cnf != "cnf")
        throw FormatError("problem line must be 'p cnf <vars> <clauses>'");
      std::string extra;
      if (iss >> extra) throw FormatError("trailing tokens on problem line");
      if (num_vars < 0 || num_clauses < 0)
        throw FormatError("negative count on problem line");
      continue;
    }
    if (num_vars < 0) throw FormatError("clause before the problem line");
    std::istringstream iss(line);
    int code;
    while (iss >> code) {
      if (code == 0) {
        clauses.push_back(std::move(current));
        current.clear();
        in_clause = false;
        continue;
      }
      Lit l = Lit::from_dimacs(code);
      if (l.var > num_vars) throw FormatError("clause variable out of range");
      current.push_back(l);
      in_clause = true;
    }
    if (!iss.eof()) throw FormatError("malformed clause token");
  }
  if (num_vars < 0) throw FormatError("missing problem line");
  if (in_clause) throw FormatError("unterminated clause");
  if ((int)clauses.size() != num_clauses)
    throw FormatError("clause count does not match the problem line");
  return {num_vars, std::move(clauses)};
}

CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

// --- decision compilation ---------------------------------------------------

namespace {

using Clause = std::vector<int>;     // dimacs codes, sorted by (var, sign)
using ClauseSet = std::vector<Clause>;

bool clause_code_less(int a, int b) {
  int va = a > 0 ? a : -a, vb = b > 0 ? b : -b;
  return va != vb ? va < vb : a < b;
}

// nullopt marks a tautological clause
std::optional<Clause> canonical_clause(const std::vector<Lit>& lits) {
  Clause c;
  c.reserve(lits.size());
  for (const Lit& l : lits) c.push_back(l.to_dimacs());
  std::sort(c.begin(), c.end(), clause_code_less);
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i] == -c[i + 1]) return std::nullopt;
  return c;
}

ClauseSet canonical_set(ClauseSet clauses) {
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
  return clauses;
}

// clauses after asserting `code`; nullopt when an empty clause appears
std::optional<ClauseSet> assign(const ClauseSet& clauses, int code) {
  ClauseSet out;
  out.reserve(clauses.size());
  for (const Clause& c : clauses) {
    if (std::find(c.begin(), c.end(), code) != c.end()) continue;
    Clause reduced;
    reduced.reserve(c.size());
    for (int l : c)
      if (l != -code) reduced.push_back(l);
    if (reduced.empty()) return std::nullopt;
    out.push_back(std::move(reduced));
  }
  return canonical_set(std::move(out));
}

struct Compiler {
  NnfBuilder builder;
  std::map<ClauseSet, int> cache;
  std::size_t cache_limit;

  Compiler(int num_vars, std::size_t limit)
      : builder(num_vars), cache_limit(limit) {}

  // formula entry point: unit propagation, then component split
  // returns -1 for a conflict
  int compile(ClauseSet clauses) {
    std::vector<int> units;
    while (true) {
      int unit = 0;
      for (const Clause& c : clauses)
        if (c.size() == 1) { unit = c.front(); break; }
      if (unit == 0) break;
      std::optional<ClauseSet> next = assign(clauses, unit);
      if (!next) return -1;
      units.push_back(unit);
      clauses = std::move(*next);
    }
    std::vector<int> parts;
    for (int u : units) parts.push_back(builder.literal(Lit::from_dimacs(u)));
    for (ClauseSet& comp : components(clauses)) {
      int id = component(std::move(comp));
      if (id < 0) return -1;
      parts.push_back(id);
    }
    return builder.conj_fold(std::move(parts));
  }

  // splits a unit-free clause set into connected components, ordered by
  // their smallest variable
  std::vector<ClauseSet> components(const ClauseSet& clauses) {
    std::map<int, int> root;  // var -> representative
    std::function<int(int)> find = [&](int v) {
      int r = root.at(v);
      if (r == v) return v;
      return root[v] = find(r);
    };
    auto unite = [&](int a, int b) {
      a = find(a); b = find(b);
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    };
    for (const Clause& c : clauses) {
      for (int l : c) {
        int v = l > 0 ? l : -l;
        root.emplace(v, v);
      }
      for (size_t i = 1; i < c.size(); ++i) {
        int a = c[0] > 0 ? c[0] : -c[0];
        int b = c[i] > 0 ? c[i] : -c[i];
        unite(a, b);
      }
    }
    std::map<int, ClauseSet> grouped;
    for (const Clause& c : clauses) {
      int v = c[0] > 0 ? c[0] : -c[0];
      grouped[find(v)].push_back(c);
    }
    std::vector<ClauseSet> out;
    out.reserve(grouped.size());
    for (auto& [rep, set] : grouped) out.push_back(canonical_set(std::move(set)));
    return out;
  }

  // connected, unit-free component: branch on the lowest variable
  int component(ClauseSet clauses) {
    if (clauses.empty()) return builder.constant(true);
    if (auto it = cache.find(clauses); it != cache.end()) return it->second;
    int var = INT_MAX;
    for (const Clause& c : clauses)
      for (int l : c) var = std::min(var, l > 0 ? l : -l);

    int arms_lo = branch(clauses, -var);
    int arms_hi = branch(clauses, var);
    std::vector<int> arms;
    if (arms_lo >= 0) arms.push_back(arms_lo);
    if (arms_hi >= 0) arms.push_back(arms_hi);
    int id = builder.disj_fold(std::move(arms), var);
    if (cache.size() < cache_limit) cache.emplace(std::move(clauses), id);
    return id;
  }

  // one decision arm; -1 when the branch is conflicting
  int branch(const ClauseSet& clauses, int code) {
    std::optional<ClauseSet> next = assign(clauses, code);
    if (!next) return -1;
    int sub = compile(std::move(*next));
    if (sub < 0) return -1;
    return builder.conj_fold({builder.literal(Lit::from_dimacs(code)), sub});
  }
};

}  // namespace

NnfCircuit compile_cnf_to_dnnf(const CnfFormula& cnf, std::size_t cache_limit) {
  ClauseSet clauses;
  for (const std::vector<Lit>& c : cnf.clauses) {
    if (std::optional<Clause> canon = canonical_clause(c))
      clauses.push_back(std::move(*canon));
    // tautological clauses constrain nothing
  }
  Compiler compiler(cnf.num_vars, cache_limit);
  int root = compiler.compile(canonical_set(std::move(clauses)));
  if (root < 0) root = compiler.builder.constant(false);
  return compiler.builder.finish(root);
}

NnfCircuit build_dnf(const std::vector<Term>& terms, int num_vars) {
  NnfBuilder builder(num_vars);
  std::vector<int> children;
  for (const Term& t : terms) {
    try {
      children.push_back(builder.term(normalize_term(t)));
    } catch (const InconsistentTerm&) {
      // dropped
    }
  }
  if (children.empty()) return builder.finish(builder.constant(false));
  return builder.finish(builder.disj(std::move(children)));
}

NnfCircuit build_mods(const std::vector<Interpretation>& models, int num_vars) {
  NnfBuilder builder(num_vars);
  std::vector<int> children;
  for (const Interpretation& omega : models) {
    if (omega.num_vars() != num_vars)
      throw Error("model does not cover exactly the circuit variables");
    Term t;
    t.reserve(num_vars);
    for (Var v = 1; v <= num_vars; ++v) t.emplace_back(v, omega.value(v));
    children.push_back(builder.term(t));
  }
  if (children.empty()) return builder.finish(builder.constant(false));
  return builder.finish(builder.disj(std::move(children)));
}

}  // namespace kcopt
