#include <doctest.h>

#include "random_formula.hpp"
#include "scottkit/formula.hpp"

using namespace scottkit;

namespace {

std::vector<Assignment> assignments(int n, const std::vector<std::string>& vars) {
  std::vector<Assignment> out;
  if (n == 0 && !vars.empty()) return out;
  std::vector<int> idx(vars.size(), 0);
  while (true) {
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = idx[i];
    out.push_back(a);
    std::size_t i = vars.size();
    bool done = true;
    while (i > 0) {
      --i;
      if (++idx[i] < n) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
    if (done) break;
  }
  return out;
}

}  // namespace

TEST_CASE("classify examples") {
  CHECK(classify(atom(true, "E", {"x", "y"})) == Complexity{Side::Sigma, 0});
  auto s1 = parse_formula("(or (exists (u) (atom + E u x)))");
  CHECK(classify(s1) == Complexity{Side::Sigma, 1});
  auto p2 = parse_formula("(and (forall (u) (or (exists (v) (atom + E u v)))))");
  CHECK(classify(p2) == Complexity{Side::Pi, 2});
  // nested same-side blocks do not raise the rank
  auto s1b = parse_formula("(or (exists (u) (or (exists (v) (atom + E u v)))))");
  CHECK(classify(s1b) == Complexity{Side::Sigma, 1});
  CHECK(complexity_name(classify(p2)) == "Pi_2");
}

TEST_CASE("neg examples") {
  auto a = atom(true, "E", {"x1", "x2"});
  CHECK(to_sexpr(neg(a)) == "(atom - E x1 x2)");
  auto s = parse_formula("(or (exists (u) (atom + E u x1)))");
  CHECK(to_sexpr(neg(s)) == "(and (forall (u) (atom - E u x1)))");
  CHECK(structurally_equal(neg(neg(s)), s));
}

TEST_CASE("s-expression round trip is byte stable") {
  testgen::FormulaGen gen(11);
  for (int i = 0; i < 300; ++i) {
    auto f = gen.random({"x1", "x2"}, 3);
    std::string s = to_sexpr(f);
    CHECK(to_sexpr(parse_formula(s)) == s);
    CHECK(structurally_equal(parse_formula(s), f));
  }
  auto f = parse_formula("  (and\n (forall ()   (qfree or (atom + E x1 x1) (qfree and))))");
  CHECK(to_sexpr(f) == "(and (forall () (qfree or (atom + E x1 x1) (qfree and))))");
  CHECK_THROWS_AS(parse_formula("(or)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(atom * E x)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(qfree and (or (exists () (atom + E x x))))"), ParseError);
  CHECK_THROWS_AS(parse_formula("(atom + E x1) junk"), ParseError);
}

TEST_CASE("evaluate examples") {
  auto k3 = complete_graph(3);
  auto f = parse_formula("(and (forall (x) (or (exists (y) (atom + E x y)))))");
  CHECK(evaluate(k3, f, {}));
  auto g = parse_formula("(or (exists (x y) (atom + E x y)))");
  CHECK_FALSE(evaluate(empty_graph(2), g, {}));
  CHECK_THROWS(evaluate(k3, atom(true, "E", {"x1", "x2"}), {{"x1", 0}}));
  // quantifier witnesses may coincide with parameters
  auto h = parse_formula("(or (exists (u) (atom + = u x1)))");
  CHECK(evaluate(k3, h, {{"x1", 2}}));
}

TEST_CASE("negation is exact complement on small graphs") {
  testgen::FormulaGen gen(3);
  auto graphs = all_graphs_up_to(3);
  for (int i = 0; i < 150; ++i) {
    auto f = gen.random({"x1", "x2"}, 2);
    auto nf = neg(f);
    auto c = classify(f), nc = classify(nf);
    CHECK(c.rank == nc.rank);
    if (c.rank >= 1) CHECK(c.side != nc.side);
    for (const auto& g : graphs)
      for (const auto& a : assignments(g.size(), {"x1", "x2"})) CHECK(evaluate(g, f, a) != evaluate(g, nf, a));
  }
}

TEST_CASE("a Sigma_r formula wrapped as Pi_{r+1} is equivalent") {
  testgen::FormulaGen gen(5);
  auto graphs = all_graphs_up_to(3);
  for (int i = 0; i < 100; ++i) {
    auto f = gen.random({"x1"}, 2);
    auto c = classify(f);
    auto w = conj({{{}, f}});
    auto cw = classify(w);
    CHECK(cw.side == Side::Pi);
    CHECK(cw.rank == (c.side == Side::Sigma ? c.rank + 1 : std::max(1, c.rank)));
    for (const auto& g : graphs)
      for (const auto& a : assignments(g.size(), {"x1"})) CHECK(evaluate(g, f, a) == evaluate(g, w, a));
  }
}

TEST_CASE("combinators preserve meaning and keep ranks minimal") {
  testgen::FormulaGen gen(9);
  auto graphs = all_graphs_up_to(3);
  for (int i = 0; i < 120; ++i) {
    auto a = gen.random({"x1", "x2"}, 2);
    auto b = gen.random({"x1", "x2"}, 2);
    auto o = or_merge({a, b});
    auto n = and_merge({a, b});
    auto e = exists_({"x2"}, a);
    auto u = forall_({"x2"}, b);
    for (const auto& g : graphs)
      for (const auto& asg : assignments(g.size(), {"x1", "x2"})) {
        bool va = evaluate(g, a, asg), vb = evaluate(g, b, asg);
        CHECK(evaluate(g, o, asg) == (va || vb));
        CHECK(evaluate(g, n, asg) == (va && vb));
      }
    for (const auto& g : graphs)
      for (const auto& asg : assignments(g.size(), {"x1"})) {
        bool ve = false, vu = true;
        for (int v = 0; v < g.size(); ++v) {
          Assignment x = asg;
          x["x2"] = v;
          ve = ve || evaluate(g, a, x);
          vu = vu && evaluate(g, b, x);
        }
        CHECK(evaluate(g, e, asg) == ve);
        CHECK(evaluate(g, u, asg) == vu);
      }
    // a disjunction of a quantifier-free formula with a Pi_r formula stays Pi_r
    auto ca = classify(a);
    if (ca.side == Side::Pi && ca.rank >= 1) {
      auto m = or_merge({atom(false, "E", {"x1", "x2"}), a});
      CHECK(classify(m) == ca);
    }
  }
}

TEST_CASE("rename_free avoids capture") {
  auto f = parse_formula("(or (exists (y) (atom + E x y)))");
  auto g = rename_free(f, {{"x", "y"}});
  CHECK(free_vars(g) == std::set<std::string>{"y"});
  auto k2 = complete_graph(2);
  CHECK(evaluate(k2, g, {{"y", 0}}));
  CHECK_FALSE(evaluate(empty_graph(2), g, {{"y", 0}}));
}

TEST_CASE("type formulas round trip") {
  for (const auto& g : all_graphs_up_to(3))
    for (int k = 0; k <= g.size(); ++k)
      for (const auto& t : distinct_tuples(g.size(), k)) {
        auto d = atomic_diagram(g, t);
        auto f = type_formula(d);
        CHECK(type_from_formula(f, g.signature_ptr(), k) == d);
        Assignment asg;
        for (int i = 0; i < k; ++i) asg[var_name(i + 1)] = t[i];
        CHECK(evaluate(g, f, asg));
      }
  auto sig = Signature::graph();
  CHECK_THROWS_AS(type_from_formula(parse_formula("(qfree and (atom + E x1 x2))"), sig), ParseError);
  CHECK_THROWS_AS(type_from_formula(parse_formula("(qfree and (atom + = x1 x2))"), sig), ParseError);
}
