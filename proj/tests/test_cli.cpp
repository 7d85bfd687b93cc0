#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scottkit/scott.hpp"

using namespace scottkit;

namespace {

struct Run {
  std::string out;
  int code = -1;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SCOTTKIT_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

struct Workdir {
  std::filesystem::path dir;
  Workdir() {
    dir = std::filesystem::temp_directory_path() / ("scottkit_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
  }
  ~Workdir() { std::filesystem::remove_all(dir); }
  std::string file(const std::string& name, const std::string& text) const {
    const auto p = (dir / name).string();
    std::ofstream(p) << text;
    return p;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

const char* kK2 = "graph\nn=2\nE={(0,1),(1,0)}\n";
const char* kE2 = "graph\nn=2\nE={}\n";
const char* kK13K14 =
    "graph\nn=9\n# two stars\nE={(0,1),(1,0),(0,2),(2,0),(0,3),(3,0),(4,5),(5,4),(4,6),(6,4),(4,7),(7,4),(4,8),(8,4)}\n";

}  // namespace

TEST_CASE("embed and check-tree") {
  Workdir w;
  const auto k2 = w.file("k2.struct", kK2);
  const auto tree = w.path("k2.tree");
  const Run e = run("embed --in " + k2 + " --depth 2 --width 2 --out " + tree);
  CHECK(e.code == 0);
  CHECK(lines(e.out) == std::vector<std::string>{"nodes 13", "tuples 5", "closed yes"});
  const Run c = run("check-tree --in " + tree + " --alpha 1");
  CHECK(c.code == 0);
  const auto ls = lines(c.out);
  REQUIRE(ls.size() == 8);
  for (int i = 0; i < 6; ++i) CHECK(ls[i].rfind("pass ", 0) == 0);
  CHECK(ls[6] == "member of T^1 (within budget)");

  const auto e2tree = w.path("e2.tree");
  CHECK(run("embed --in " + w.file("e2.struct", kE2) + " --out " + e2tree).code == 0);
  CHECK(run("iso --in " + tree + " --other " + tree).out == "isomorphic\n");
  const Run diff = run("iso --in " + tree + " --other " + e2tree + " --alpha 1");
  CHECK(lines(diff.out).front() == "not isomorphic");
  CHECK(lines(diff.out)[1] == "good match at 1: no");
}

TEST_CASE("rank") {
  Workdir w;
  const auto f = w.file("k13k14.struct", kK13K14);
  const Run r = run("rank --in " + f);
  CHECK(r.code == 0);
  // every finite structure has rank 1 under the orbit-equivalence collapse
  CHECK(r.out == std::to_string(scott_rank(load_structure(f))) + "\n");
  CHECK(r.out == "1\n");
  const Run s = run("rank --in " + f + " --witnesses --format sexpr");
  CHECK(lines(s.out)[1] == "method certificate");
  CHECK(run("rank --in " + f + " --jobs 4").out == r.out);
}

TEST_CASE("parse, orbits and bf") {
  Workdir w;
  const auto k2 = w.file("k2.struct", kK2);
  CHECK(run("parse --in " + k2).out == kK2);
  const auto phi = w.file("f.sexpr", "(or (exists (u) (atom + E x1 u)))\n");
  CHECK(lines(run("parse --in " + phi).out) == std::vector<std::string>{"(or (exists (u) (atom + E x1 u)))", "Sigma_1"});
  CHECK(lines(run("orbits --in " + k2).out) ==
        std::vector<std::string>{"orbits of length 1: 1", "orbit 0: (0) (1)"});
  CHECK(run("orbits --in " + k2 + " --length 2 --format csv").out == "tuple,orbit\n(0 1),0\n(1 0),0\n");
  const Run bf = run("bf --in " + k2 + " --other " + w.file("e2.struct", kE2) + " --alpha 1");
  CHECK(lines(bf.out)[0] == "level 0: left <= right yes, right <= left yes");
  CHECK(lines(bf.out)[1] == "level 1: left <= right no, right <= left no");
  CHECK(lines(run("bf --in " + k2 + " --alpha 1 --format csv").out).front() == "level,a,b,value");
}

TEST_CASE("force, emit-axioms and generic") {
  Workdir w;
  const auto tree = w.path("k2.tree");
  REQUIRE(run("embed --in " + w.file("k2.struct", kK2) + " --depth 2 --width 2 --out " + tree).code == 0);
  std::ifstream in(tree);
  std::string line;
  int pair_node = -1;
  while (std::getline(in, line))
    if (line.find("# (0 1) copy 0") != std::string::npos) pair_node = std::stoi(line);
  REQUIRE(pair_node > 0);
  const std::string edge = " --formula '(atom + E x1 x2)'";
  CHECK(run("force --in " + tree + " --node " + std::to_string(pair_node) + edge).out == "true\n");
  CHECK(run("force --in " + tree + " --node 0" + edge).out == "false\n");
  CHECK(run("force --in " + tree + " --node 0 --weak" + edge).out == "true\n");
  CHECK(run("force --in " + tree + " --node 0 --formula '(atom + E'").code == 2);

  const Run ax = run("emit-axioms --in " + w.path("k2.struct") + " --alpha 2");
  CHECK(ax.code == 0);
  const auto al = lines(ax.out);
  CHECK(al.front() == "; alpha 2 depth 2 width 2");
  CHECK(std::find(al.begin(), al.end(), "; Pi_2") != al.end());
  CHECK(al.back().rfind("(and", 0) == 0);

  const Run g = run("generic --in " + tree + " --alpha 1");
  CHECK(g.code == 0);
  const auto gl = lines(g.out);
  CHECK(gl[1] == "generic yes (exact on a closed tree)");
  CHECK(g.out.find(kK2) != std::string::npos);
}

TEST_CASE("hardness subcommands") {
  Workdir w;
  const Run d = run("daisy --set cofinite:1,3");
  CHECK(lines(d.out)[1] == "rank 1");
  const Run e = run("daisy --set periodic:m=2,r=0,t=0 --centers 3 --stage 4 --out " + w.path("d.struct"));
  CHECK(lines(e.out)[1] == "rank 2");
  CHECK(e.out.find("center 1 petals 4 3") != std::string::npos);
  CHECK(run("daisy --set evens").code == 2);

  CHECK(run("surrogate --level 1").code == 1);
  const Run s = run("surrogate --level 0");
  CHECK(s.code == 0);
  CHECK(lines(s.out)[0] == "level 0");

  const auto k2 = w.file("k2.struct", kK2);
  const Run c = run("code --in " + k2);
  CHECK(c.code == 0);
  CHECK(lines(c.out)[0] == "sig U:1,V:1,c0:3,c1:3,R:2");
  const Run chk = run("code --in " + k2 + " --check 2");
  CHECK(chk.out.find("violations ") != std::string::npos);
}

TEST_CASE("usage errors and corpus") {
  CHECK(run("").code == 2);
  CHECK(run("nonsense").code == 2);
  CHECK(run("rank").code == 2);
  CHECK(run("rank --in /nonexistent/file").code == 2);
  CHECK(run("corpus --format xml").code == 2);
  const Run a = run("corpus");
  CHECK(a.code == 0);
  CHECK(lines(a.out).back() == "all suites pass");
  CHECK(run("corpus").out == a.out);
  CHECK(lines(run("corpus --format csv").out).front() == "suite,checked,failures,status");
}
