#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(KCOPT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buffer[4096];
  size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0)
    r.out.append(buffer, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("kcopt_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter() {
    static int n = 0;
    return n++;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
}

}  // namespace

TEST_CASE("cli package demo flow") {
  TempDir dir;
  RunResult gen = run("gen pkg-demo -o " + dir.file("pkg"));
  CHECK(gen.exit_code == 0);
  CHECK(gen.out.find("condition-term A B1") != std::string::npos);

  std::string opt_cmd = "optimize --circuit " + dir.file("pkg.nnf") +
                        " --base " + dir.file("pkg_minchange.wb") +
                        " --names " + dir.file("pkg.names") +
                        " --condition \"A B1\"";
  RunResult opt = run(opt_cmd);
  CHECK(opt.exit_code == 0);
  CHECK(opt.out.find("status OPTIMAL") != std::string::npos);
  CHECK(opt.out.find("algorithm dnnf-linear") != std::string::npos);
  CHECK(opt.out.find("score 4") != std::string::npos);
  CHECK(opt.out.find("model v1=1 v2=1 v3=0 v4=1 v5=1 v6=0 v7=0 v8=0 v9=0") !=
        std::string::npos);

  // byte-identical output on a repeated invocation
  RunResult again = run(opt_cmd);
  CHECK(again.exit_code == 0);
  CHECK(again.out == opt.out);

  // the oracle agrees with the routed algorithm
  RunResult oracle = run("oracle --circuit " + dir.file("pkg.nnf") + " --base " +
                         dir.file("pkg_minchange.wb") + " --names " +
                         dir.file("pkg.names") + " --condition \"A B1\"");
  CHECK(oracle.exit_code == 0);
  CHECK(oracle.out.find("algorithm brute") != std::string::npos);
  CHECK(oracle.out.find("score 4") != std::string::npos);
}

TEST_CASE("cli consistency exit codes") {
  TempDir dir;
  write_file(dir.file("false.nnf"), "nnf 1 0 0\nO 0 0\n");
  RunResult r = run("consistent --circuit " + dir.file("false.nnf"));
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("consistent no") != std::string::npos);

  write_file(dir.file("true.nnf"), "nnf 1 0 0\nA 0\n");
  CHECK(run("consistent --circuit " + dir.file("true.nnf")).exit_code == 0);

  // non-decomposable input falls back to enumeration
  std::string fig1a = kcopt::serialize_nnf(kcopt::testutil::fig1a_circuit());
  write_file(dir.file("fig1a.nnf"), fig1a);
  RunResult brute = run("consistent --circuit " + dir.file("fig1a.nnf"));
  CHECK(brute.exit_code == 0);
  CHECK(brute.out.find("method brute") != std::string::npos);
}

TEST_CASE("cli check, compile and condition") {
  TempDir dir;
  write_file(dir.file("f.cnf"), "p cnf 4 4\n-1 3 0\n-1 -2 0\n3 -2 0\n-2 4 0\n");
  RunResult comp = run("compile --cnf " + dir.file("f.cnf") + " -o " +
                       dir.file("f.nnf"));
  CHECK(comp.exit_code == 0);

  RunResult check = run("check --circuit " + dir.file("f.nnf"));
  CHECK(check.exit_code == 0);
  CHECK(check.out.find("decomposable yes") != std::string::npos);

  RunResult cond = run("condition --circuit " + dir.file("f.nnf") +
                       " --term \"1 -2\" -o " + dir.file("cond.nnf"));
  CHECK(cond.exit_code == 0);
  std::ifstream in(dir.file("cond.nnf"));
  kcopt::NnfCircuit c = kcopt::parse_nnf(in);
  CHECK_FALSE(kcopt::vars_of(c, c.root()).test(1));
  CHECK_FALSE(kcopt::vars_of(c, c.root()).test(2));
}

TEST_CASE("cli classify") {
  TempDir dir;
  write_file(dir.file("b.wb"), "wb 2 4 leximax\n2 t 2 4 0\n1 t 3 -4 0\n");
  RunResult r = run("classify --base " + dir.file("b.wb"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("family Q") != std::string::npos);
  CHECK(r.out.find("positive-literals no") != std::string::npos);
  CHECK(r.out.find("nonnegative-weights yes") != std::string::npos);
  CHECK(r.out.find("aggregator leximax") != std::string::npos);
}

TEST_CASE("cli error exit codes") {
  TempDir dir;
  // usage: unknown option
  CHECK(run("optimize --nonsense").exit_code == 2);
  // format: garbage circuit
  write_file(dir.file("bad.nnf"), "not a circuit\n");
  write_file(dir.file("b.wb"), "wb 1 1 sum\n1 t 1 0\n");
  CHECK(run("optimize --circuit " + dir.file("bad.nnf") + " --base " +
            dir.file("b.wb"))
            .exit_code == 3);
  // usage: forced algorithm whose preconditions fail
  std::string fig1a = kcopt::serialize_nnf(kcopt::testutil::fig1a_circuit());
  write_file(dir.file("fig1a.nnf"), fig1a);
  write_file(dir.file("lin4.wb"), "wb 1 4 sum\n1 t 1 0\n");
  CHECK(run("optimize --circuit " + dir.file("fig1a.nnf") + " --base " +
            dir.file("lin4.wb") + " --algo dnnf-linear")
            .exit_code == 2);

  // intractable: 30 variables, general mixed-sign base
  std::string big = "nnf 31 30 30\n";
  for (int v = 1; v <= 30; ++v) big += "L " + std::to_string(v) + "\n";
  big += "A 30";
  for (int i = 0; i < 30; ++i) big += " " + std::to_string(i);
  big += "\n";
  write_file(dir.file("big.nnf"), big);
  write_file(dir.file("item.nnf"), "nnf 1 0 30\nL -7\n");
  write_file(dir.file("g.wb"), "wb 2 30 sum\n-1 f item.nnf\n1 f item.nnf\n");
  CHECK(run("optimize --circuit " + dir.file("big.nnf") + " --base " +
            dir.file("g.wb"))
            .exit_code == 4);
}

TEST_CASE("cli obdd inputs") {
  TempDir dir;
  // (x1 | x2) as an OBDD file
  write_file(dir.file("or.obdd"),
             "obdd 2 2\norder 1 2\n2 2 0 1\n3 1 2 1\nroot 3\n");
  write_file(dir.file("cost.wb"), "wb 2 2 sum\n1 t 1 0\n1 t 2 0\n");

  // auto routing converts the OBDD to a circuit
  RunResult r = run("optimize --circuit " + dir.file("or.obdd") + " --base " +
                    dir.file("cost.wb"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("score 1") != std::string::npos);

  // the linearization path keeps the OBDD form
  RunResult lin = run("optimize --circuit " + dir.file("or.obdd") + " --base " +
                      dir.file("cost.wb") + " --algo obdd-linearize");
  CHECK(lin.exit_code == 0);
  CHECK(lin.out.find("algorithm obdd-linearize") != std::string::npos);
  CHECK(lin.out.find("score 1") != std::string::npos);
}

TEST_CASE("cli generators write complete instance files") {
  TempDir dir;
  RunResult hs = run("gen hitting-set --set a,b --set b,c -o " + dir.file("hs"));
  CHECK(hs.exit_code == 0);
  CHECK(fs::exists(dir.file("hs.nnf")));
  CHECK(fs::exists(dir.file("hs.wb")));
  CHECK(fs::exists(dir.file("hs.names")));
  RunResult opt = run("optimize --circuit " + dir.file("hs.nnf") + " --base " +
                      dir.file("hs.wb"));
  CHECK(opt.exit_code == 0);
  CHECK(opt.out.find("score 1") != std::string::npos);

  RunResult pn = run("gen posneg --pos \"1 2\" --neg \"-1 -2\" -o " +
                     dir.file("pn"));
  CHECK(pn.exit_code == 0);
  CHECK(pn.out.find("satisfiable-iff-score -1") != std::string::npos);

  RunResult ne = run("gen neglit-elim --base " + dir.file("hs.wb") + " -o " +
                     dir.file("ne"));
  CHECK(ne.exit_code == 0);  // no negative literals: constraint is trivial
  CHECK(fs::exists(dir.file("ne.obdd")));

  write_file(dir.file("q.wb"), "wb 1 2 sum\n1 t 1 2 0\n");
  RunResult owa = run("gen owa --base " + dir.file("q.wb") + " -o " +
                      dir.file("owa"));
  CHECK(owa.exit_code == 0);
  std::ifstream in(dir.file("owa.wb"));
  kcopt::ParsedBase parsed = kcopt::parse_base(in, dir.path);
  CHECK(parsed.agg.kind == kcopt::Aggregator::Kind::Owa);
  CHECK(parsed.base.size() == 4);

  RunResult ts = run("gen termsat-q --term \"1 2\" --term \"-1 2\" -o " +
                     dir.file("ts"));
  CHECK(ts.exit_code == 0);
  RunResult tsopt = run("optimize --circuit " + dir.file("ts.nnf") + " --base " +
                        dir.file("ts.wb"));
  CHECK(tsopt.exit_code == 0);
  CHECK(tsopt.out.find("score 1") != std::string::npos);
}
