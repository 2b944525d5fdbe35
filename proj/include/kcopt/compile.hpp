#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kcopt/circuit.hpp"

namespace kcopt {

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<Lit>> clauses;
};

/// DIMACS CNF: "p cnf V C" header, 'c' comment lines, 0-terminated clauses.
/// Requires exactly C clauses and variables within 1..V (FormatError).
CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs(const std::string& text);

/// Decision compilation to a decomposable circuit: unit propagation,
/// connected-component split (an And of independently compiled components),
/// otherwise a branch on the lowest unassigned variable. Subproblems are
/// cached by their canonical residual clause set, up to cache_limit entries.
/// Unsatisfiable input compiles to the False leaf.
NnfCircuit compile_cnf_to_dnnf(const CnfFormula& cnf,
                               std::size_t cache_limit = 1000000);

/// Flat Or of And-of-literals over shared leaves; inconsistent terms are
/// dropped, an empty term list yields the False leaf.
NnfCircuit build_dnf(const std::vector<Term>& terms, int num_vars);

/// Or of the full canonical terms of the given models (the MODS encoding).
NnfCircuit build_mods(const std::vector<Interpretation>& models, int num_vars);

}  // namespace kcopt
