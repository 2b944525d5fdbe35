#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kcopt/compile.hpp"
#include "kcopt/gen.hpp"
#include "kcopt/obdd.hpp"
#include "kcopt/optimize.hpp"

namespace fs = std::filesystem;
using namespace kcopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoSolution = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitIntractable = 4;

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  return out;
}

bool looks_like_obdd(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  while (std::getline(in, line)) {
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line.compare(i, 1, "c") == 0 &&
        (i + 1 == line.size() || line[i + 1] == ' '))
      continue;
    return line.compare(i, 4, "obdd") == 0;
  }
  return false;
}

NnfCircuit load_circuit(const fs::path& path) {
  if (looks_like_obdd(path)) {
    std::ifstream in = open_input(path);
    ParsedObdd parsed = parse_obdd(in);
    return obdd_to_nnf(parsed.manager, parsed.root);
  }
  std::ifstream in = open_input(path);
  return parse_nnf(in);
}

std::optional<NameTable> load_name_table(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream in = open_input(path);
  return load_names(in);
}

// Term syntax: whitespace-separated tokens, each a name or a signed index,
// with a '-' prefix for negation ("A -B1", "3 -5").
Term parse_term_text(const std::string& text,
                     const std::optional<NameTable>& names) {
  Term term;
  std::istringstream iss(text);
  std::string token;
  while (iss >> token) {
    bool positive = true;
    std::string_view body = token;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
      positive = body.front() != '-';
      body.remove_prefix(1);
    }
    if (body.empty()) throw Error("empty literal in term '" + text + "'");
    Var var = 0;
    if (std::all_of(body.begin(), body.end(),
                    [](char c) { return std::isdigit((unsigned char)c); })) {
      var = std::stoi(std::string(body));
    } else if (names) {
      if (std::optional<Var> v = names->find(std::string(body))) var = *v;
      else throw Error("unknown variable name '" + std::string(body) + "'");
    } else {
      throw Error("variable names need --names ('" + std::string(body) + "')");
    }
    if (var < 1) throw Error("variable index must be positive");
    term.emplace_back(var, positive);
  }
  return term;
}

std::vector<Lit> parse_clause_text(const std::string& text) {
  std::vector<Lit> clause;
  std::istringstream iss(text);
  int code;
  while (iss >> code) clause.push_back(Lit::from_dimacs(code));
  if (!iss.eof()) throw Error("malformed clause '" + text + "'");
  return clause;
}

void print_classification(const WeightedBase& base, const Aggregator& agg) {
  FamilyTag tag = classify(base);
  std::cout << "family " << family_name(tag.family) << '\n'
            << "positive-literals " << (tag.positive_literals ? "yes" : "no") << '\n'
            << "nonnegative-weights " << (tag.nonnegative_weights ? "yes" : "no")
            << '\n'
            << "aggregator " << aggregator_name(agg.kind) << '\n'
            << "items " << base.size() << '\n'
            << "vars " << base.num_vars() << '\n';
}

int report_result(const DispatchResult& r, const WeightedBase& base,
                  const Aggregator& agg) {
  FamilyTag tag = classify(base);
  std::cout << "status " << (r.result.found() ? "OPTIMAL" : "NO_SOLUTION") << '\n'
            << "algorithm " << algorithm_name(r.algorithm) << '\n'
            << "family " << family_name(tag.family) << '\n'
            << "positive-literals " << (tag.positive_literals ? "yes" : "no") << '\n'
            << "nonnegative-weights " << (tag.nonnegative_weights ? "yes" : "no")
            << '\n'
            << "aggregator " << aggregator_name(agg.kind) << '\n';
  if (!r.result.found()) return kExitNoSolution;
  std::cout << "score " << format_score(r.result.score) << '\n' << "model";
  const Interpretation& omega = *r.result.witness;
  for (Var v = 1; v <= omega.num_vars(); ++v)
    std::cout << " v" << v << '=' << (omega.value(v) ? 1 : 0);
  std::cout << '\n';
  return kExitOk;
}

struct OptimizeArgs {
  std::string circuit_path;
  std::string base_path;
  std::string names_path;
  std::string condition_text;
  std::string algo = "auto";
  int n_cap = 12;
  int jobs = 1;
};

std::optional<Algorithm> parse_algo(const std::string& name) {
  if (name == "auto") return std::nullopt;
  if (name == "dnnf-linear") return Algorithm::DnnfLinear;
  if (name == "dnf-monotone") return Algorithm::DnfMonotone;
  if (name == "fpt-poly") return Algorithm::FptPolynomial;
  if (name == "obdd-linearize") return Algorithm::ObddLinearize;
  if (name == "brute") return Algorithm::Oracle;
  throw Error("unknown algorithm '" + name + "'");
}

// obdd-linearize works on the OBDD file directly; the base must be all terms,
// which become term OBDDs in the same manager.
int run_obdd_linearize(const OptimizeArgs& args, const ParsedBase& parsed,
                       const std::optional<NameTable>& names) {
  if (!looks_like_obdd(args.circuit_path))
    throw Error("--algo obdd-linearize needs an OBDD circuit file");
  std::ifstream in = open_input(args.circuit_path);
  ParsedObdd obdd = parse_obdd(in);
  ObddManager& m = obdd.manager;
  if (m.num_vars() < parsed.base.num_vars())
    throw Error("base mentions variables beyond the OBDD");

  ObddId phi = obdd.root;
  if (!args.condition_text.empty()) {
    Term gamma = parse_term_text(args.condition_text, names);
    phi = m.apply(BoolOp::And, phi, m.build_term(gamma));
  }
  std::vector<std::pair<ObddId, Weight>> items;
  for (const WeightedItem& item : parsed.base.items()) {
    if (!item.is_term())
      throw Error("obdd-linearize supports only term items on the command line");
    const TermFormula& t = item.term();
    items.emplace_back(t.falsum ? ObddManager::false_id : m.build_term(t.lits),
                       item.weight);
  }
  DispatchResult r{opt_obdd_linearize(m, phi, items, parsed.agg, args.n_cap),
                   Algorithm::ObddLinearize};
  return report_result(r, parsed.base, parsed.agg);
}

int run_optimize(const OptimizeArgs& args, bool force_oracle) {
  std::optional<NameTable> names = load_name_table(args.names_path);
  std::ifstream base_in = open_input(args.base_path);
  ParsedBase parsed =
      parse_base(base_in, fs::path(args.base_path).parent_path());

  std::optional<Algorithm> algo =
      force_oracle ? std::optional<Algorithm>(Algorithm::Oracle)
                   : parse_algo(args.algo);
  if (algo == Algorithm::ObddLinearize)
    return run_obdd_linearize(args, parsed, names);

  NnfCircuit circuit = load_circuit(args.circuit_path);
  DispatchOptions options{args.n_cap, args.jobs, algo};
  PartialInterpretation gamma;
  if (!args.condition_text.empty())
    gamma = PartialInterpretation::from_term(
        normalize_term(parse_term_text(args.condition_text, names)));
  DispatchResult r =
      optimize_conditioned(circuit, gamma, parsed.base, parsed.agg, options);
  return report_result(r, parsed.base, parsed.agg);
}

// --- gen subcommand -------------------------------------------------------

struct GenArgs {
  std::string kind;
  std::vector<std::string> sets;
  std::vector<std::string> terms;
  std::vector<std::string> pos_clauses;
  std::vector<std::string> neg_clauses;
  std::string base_path;
  std::string agg = "sum";
  int vars = 0;
  std::string out_prefix;
};

std::pair<std::string, std::string> split_set(const std::string& text) {
  size_t comma = text.find(',');
  if (comma == std::string::npos)
    throw Error("set '" + text + "' must be 'a,b'");
  return {text.substr(0, comma), text.substr(comma + 1)};
}

Aggregator parse_agg_name(const std::string& name) {
  if (name == "sum") return Aggregator::sum();
  if (name == "leximax") return Aggregator::leximax();
  throw Error("aggregator must be sum or leximax");
}

void write_circuit(const fs::path& path, const NnfCircuit& c) {
  std::ofstream out = open_output(path);
  serialize_nnf(c, out);
  std::cout << "wrote " << path.string() << '\n';
}

void write_base(const fs::path& path, const WeightedBase& b,
                const Aggregator& agg) {
  std::ofstream out = open_output(path);
  serialize_base(b, agg, out, path.parent_path(), path.stem().string());
  std::cout << "wrote " << path.string() << '\n';
}

void write_names(const fs::path& path, const NameTable& names) {
  std::ofstream out = open_output(path);
  save_names(names, out);
  std::cout << "wrote " << path.string() << '\n';
}

int run_gen(const GenArgs& args) {
  fs::path prefix(args.out_prefix);
  Aggregator agg = parse_agg_name(args.agg);

  if (args.kind == "hitting-set" || args.kind == "hitting-set-qplus") {
    std::vector<std::pair<std::string, std::string>> sets;
    for (const std::string& s : args.sets) sets.push_back(split_set(s));
    if (args.kind == "hitting-set") {
      HittingSetLinear inst = gen_hitting_set_linear(sets);
      write_circuit(prefix.string() + ".nnf", inst.circuit);
      write_base(prefix.string() + ".wb", inst.base, agg);
      write_names(prefix.string() + ".names", inst.names);
    } else {
      HittingSetQPlus inst = gen_hitting_set_qplus(sets);
      write_circuit(prefix.string() + ".nnf", inst.circuit);
      write_base(prefix.string() + ".wb", inst.base, agg);
      write_names(prefix.string() + ".names", inst.names);
    }
    return kExitOk;
  }
  if (args.kind == "termsat-q") {
    std::vector<Term> terms;
    for (const std::string& t : args.terms)
      terms.push_back(parse_term_text(t, std::nullopt));
    TermSatQuadratic inst = gen_term_sat_quadratic(terms, args.vars);
    write_circuit(prefix.string() + ".nnf", inst.circuit);
    write_base(prefix.string() + ".wb", inst.base, agg);
    return kExitOk;
  }
  if (args.kind == "owa") {
    std::ifstream in = open_input(args.base_path);
    ParsedBase parsed = parse_base(in, fs::path(args.base_path).parent_path());
    OwaReduction inst = gen_owa_from_quadratic(parsed.base);
    write_base(prefix.string() + ".wb", inst.base, inst.agg);
    return kExitOk;
  }
  if (args.kind == "posneg" || args.kind == "posneg-weights") {
    std::vector<std::vector<Lit>> pos, neg;
    for (const std::string& c : args.pos_clauses)
      pos.push_back(parse_clause_text(c));
    for (const std::string& c : args.neg_clauses)
      neg.push_back(parse_clause_text(c));
    PosNegFlavor flavor = args.kind == "posneg"
                              ? PosNegFlavor::PositiveLiterals
                              : PosNegFlavor::NonnegativeWeights;
    PosNegCnf inst = gen_posneg_cnf(pos, neg, flavor, agg.kind, args.vars);
    write_circuit(prefix.string() + ".nnf", inst.circuit);
    write_base(prefix.string() + ".wb", inst.base, agg);
    std::cout << "satisfiable-iff-score " << format_score(inst.threshold) << '\n';
    return kExitOk;
  }
  if (args.kind == "neglit-elim") {
    std::ifstream in = open_input(args.base_path);
    ParsedBase parsed = parse_base(in, fs::path(args.base_path).parent_path());
    NegLitElimination inst = eliminate_negative_literals(parsed.base);
    write_base(prefix.string() + ".wb", inst.base, parsed.agg);
    {
      std::ofstream out = open_output(prefix.string() + ".obdd");
      serialize_obdd(inst.manager, inst.constraint, out);
      std::cout << "wrote " << prefix.string() + ".obdd" << '\n';
    }
    write_names(prefix.string() + ".names", inst.names);
    return kExitOk;
  }
  if (args.kind == "pkg-demo") {
    PackageDemo demo = gen_package_demo();
    write_circuit(prefix.string() + ".nnf", demo.circuit);
    write_names(prefix.string() + ".names", demo.names);
    write_base(prefix.string() + "_minchange.wb", demo.minimal_change,
               Aggregator::sum());
    write_base(prefix.string() + "_newest.wb", demo.newest, Aggregator::sum());
    std::cout << "condition-term";
    for (const Lit& l : demo.gamma.to_term())
      std::cout << ' ' << (l.positive ? "" : "-") << demo.names.name(l.var);
    std::cout << '\n';
    return kExitOk;
  }
  throw Error("unknown generator '" + args.kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knowledge-compilation optimization toolkit"};
  app.require_subcommand(1);

  std::string circuit_path, base_path, names_path, term_text, cnf_path, out_path;

  auto* check = app.add_subcommand("check", "structural checks on a circuit");
  check->add_option("--circuit", circuit_path, "NNF or OBDD file")->required();

  auto* cond = app.add_subcommand("condition", "condition a circuit by a term");
  cond->add_option("--circuit", circuit_path)->required();
  cond->add_option("--term", term_text, "e.g. \"A -B1\" or \"3 -5\"")->required();
  cond->add_option("--names", names_path, "name table file");
  cond->add_option("-o,--output", out_path, "output NNF file")->required();

  auto* cons = app.add_subcommand("consistent", "decide consistency");
  cons->add_option("--circuit", circuit_path)->required();

  auto* comp = app.add_subcommand("compile", "compile DIMACS CNF to NNF");
  comp->add_option("--cnf", cnf_path)->required();
  comp->add_option("-o,--output", out_path)->required();

  auto* cls = app.add_subcommand("classify", "classify a weighted base");
  cls->add_option("--base", base_path)->required();

  OptimizeArgs opt_args;
  auto* opt = app.add_subcommand("optimize", "optimize a base over a circuit");
  opt->add_option("--circuit", opt_args.circuit_path)->required();
  opt->add_option("--base", opt_args.base_path)->required();
  opt->add_option("--names", opt_args.names_path);
  opt->add_option("--condition", opt_args.condition_text);
  opt->add_option("--algo", opt_args.algo,
                  "auto|dnnf-linear|dnf-monotone|fpt-poly|obdd-linearize|brute");
  opt->add_option("--n-cap", opt_args.n_cap);
  opt->add_option("--jobs", opt_args.jobs);

  OptimizeArgs oracle_args;
  auto* orc = app.add_subcommand("oracle", "brute-force optimum by enumeration");
  orc->add_option("--circuit", oracle_args.circuit_path)->required();
  orc->add_option("--base", oracle_args.base_path)->required();
  orc->add_option("--names", oracle_args.names_path);
  orc->add_option("--condition", oracle_args.condition_text);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate benchmark instances");
  gen->add_option("kind", gen_args.kind,
                  "hitting-set|termsat-q|hitting-set-qplus|owa|posneg|"
                  "posneg-weights|neglit-elim|pkg-demo")
      ->required();
  gen->add_option("--set", gen_args.sets, "2-element set 'a,b' (repeatable)");
  gen->add_option("--term", gen_args.terms, "term \"1 -2\" (repeatable)");
  gen->add_option("--pos", gen_args.pos_clauses, "positive clause \"1 2\"");
  gen->add_option("--neg", gen_args.neg_clauses, "negative clause \"-1 -3\"");
  gen->add_option("--base", gen_args.base_path, "input base (owa, neglit-elim)");
  gen->add_option("--agg", gen_args.agg, "sum|leximax for emitted bases");
  gen->add_option("--vars", gen_args.vars, "minimum variable count");
  gen->add_option("-o,--output", gen_args.out_prefix, "output path prefix")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) {
      NnfCircuit c = load_circuit(circuit_path);
      DecomposabilityReport rep = check_decomposable(c);
      std::cout << "nodes " << c.size() << '\n'
                << "edges " << c.edge_count() << '\n'
                << "vars " << c.num_vars() << '\n'
                << "decomposable " << (rep.decomposable ? "yes" : "no") << '\n';
      if (!rep.decomposable)
        std::cout << "violating-and " << rep.violating_and << '\n';
      return kExitOk;
    }
    if (cond->parsed()) {
      NnfCircuit c = load_circuit(circuit_path);
      std::optional<NameTable> names = load_name_table(names_path);
      PartialInterpretation gamma = PartialInterpretation::from_term(
          normalize_term(parse_term_text(term_text, names)));
      NnfCircuit conditioned = condition(c, gamma);
      std::ofstream out = open_output(out_path);
      serialize_nnf(conditioned, out);
      std::cout << "wrote " << out_path << '\n';
      return kExitOk;
    }
    if (cons->parsed()) {
      NnfCircuit c = load_circuit(circuit_path);
      bool sat;
      if (check_decomposable(c).decomposable) {
        sat = consistent(c);
        std::cout << "method dnnf\n";
      } else {
        // fall back to enumeration for non-decomposable input
        WeightedBase empty(c.num_vars());
        sat = oracle_enumerate(c, empty, Aggregator::sum()).found();
        std::cout << "method brute\n";
      }
      std::cout << "consistent " << (sat ? "yes" : "no") << '\n';
      return sat ? kExitOk : kExitNoSolution;
    }
    if (comp->parsed()) {
      std::ifstream in = open_input(cnf_path);
      CnfFormula cnf = parse_dimacs(in);
      NnfCircuit c = compile_cnf_to_dnnf(cnf);
      std::ofstream out = open_output(out_path);
      serialize_nnf(c, out);
      std::cout << "wrote " << out_path << '\n';
      return kExitOk;
    }
    if (cls->parsed()) {
      std::ifstream in = open_input(base_path);
      ParsedBase parsed = parse_base(in, fs::path(base_path).parent_path());
      print_classification(parsed.base, parsed.agg);
      return kExitOk;
    }
    if (opt->parsed()) return run_optimize(opt_args, false);
    if (orc->parsed()) return run_optimize(oracle_args, true);
    if (gen->parsed()) return run_gen(gen_args);
  } catch (const IntractableCombination& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIntractable;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
