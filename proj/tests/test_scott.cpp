#include <doctest.h>

#include "oracles.hpp"
#include "scottkit/scott.hpp"

using namespace scottkit;

namespace {

std::vector<Tuple> extension(const Structure& s, const Formula& f, int k) {
  std::vector<Tuple> out;
  for (const auto& t : distinct_tuples(s.size(), k)) {
    Assignment asg;
    for (int j = 0; j < k; ++j) asg[var_name(j + 1)] = t[j];
    if (evaluate(s, f, asg)) out.push_back(t);
  }
  return out;
}

// Orbit of a, computed from the brute-force automorphism list.
std::vector<Tuple> orbit_of(const Structure& s, const Tuple& a) {
  std::vector<Tuple> out;
  for (const auto& t : distinct_tuples(s.size(), static_cast<int>(a.size())))
    if (oracle::automorphic(s, a, t)) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("scott rank examples") {
  CHECK(scott_rank(complete_graph(3)) == 1);
  CHECK(scott_rank(complete_graph(1)) == 1);
  CHECK_THROWS(scott_rank(empty_graph(0)));
  // Every element of the two-star union is pinned by naming the rest.
  auto rep = scott_rank_report(star_union({3, 4}), 1);
  CHECK(rep.rank == 1);
  CHECK(rep.method == "certificate");
  auto k3 = scott_rank_report(complete_graph(3), 1);
  CHECK(k3.method == "table");
  OrbitWitness w;
  REQUIRE(orbit_definable(complete_graph(3), Tuple{0}, 1, &w));
  CHECK(w.beta == 0);
  CHECK(w.b.empty());
}

TEST_CASE("two-star centres are separated by a Sigma_1 formula") {
  auto s = star_union({3, 4});
  auto f = defining_sigma_formula(s, Tuple{0}, 1);
  CHECK(classify(f).side == Side::Sigma);
  CHECK(classify(f).rank == 1);
  CHECK(free_vars(f) == std::set<std::string>{"x1"});
  // Same shape on a union small enough to evaluate.
  auto small = star_union({1, 2});
  auto g = defining_sigma_formula(small, Tuple{2}, 1);
  CHECK(classify(g).rank <= 1);
  CHECK(extension(small, g, 1) == std::vector<Tuple>{{2}});
}

TEST_CASE("orbit_definable matches the brute-force condition") {
  for (const auto& g : all_graphs_up_to(3)) {
    ScottEngine e(g);
    const int n = g.size();
    for (int k = 0; k <= n; ++k)
      for (const auto& a : distinct_tuples(n, k))
        for (int alpha = 1; alpha <= 2; ++alpha) {
          bool expect = false;
          for (int beta = 0; beta < alpha && !expect; ++beta)
            for (int m = 0; m <= n - k && !expect; ++m)
              for (const auto& ab : distinct_tuples(n, k + m)) {
                if (!std::equal(a.begin(), a.end(), ab.begin())) continue;
                bool ok = true;
                for (const auto& other : distinct_tuples(n, k + m))
                  if (oracle::bf_le(g, ab, g, other, beta, n) &&
                      !oracle::bf_le(g, a, g, Tuple(other.begin(), other.begin() + k), alpha, n))
                    ok = false;
                if (ok) {
                  expect = true;
                  break;
                }
              }
          CHECK(e.orbit_definable(a, alpha).has_value() == expect);
        }
  }
}

TEST_CASE("pi type formulas define the back-and-forth upper set") {
  for (const auto& g : all_graphs_up_to(3)) {
    ScottEngine e(g);
    for (int k = 0; k <= g.size(); ++k)
      for (const auto& a : distinct_tuples(g.size(), k))
        for (int alpha = 0; alpha <= 2; ++alpha) {
          auto f = e.pi_type_formula(a, alpha);
          auto c = classify(f);
          CHECK(c.rank <= std::max(alpha, 1));
          if (alpha > 0) CHECK(c.side == Side::Pi);
          std::vector<Tuple> expect;
          for (const auto& b : distinct_tuples(g.size(), k))
            if (oracle::bf_le(g, a, g, b, alpha, g.size())) expect.push_back(b);
          CHECK(extension(g, f, k) == expect);
        }
  }
}

TEST_CASE("K2 pi type of one endpoint holds at the other") {
  auto k2 = complete_graph(2);
  auto f = pi_type_formula(k2, Tuple{0}, 1);
  CHECK(evaluate(k2, f, {{"x1", 1}}));
}

TEST_CASE("defining formulas cut out exactly the orbit") {
  for (const auto& g : all_graphs_up_to(4)) {
    ScottEngine e(g);
    for (int k = 0; k <= std::min(3, g.size()); ++k)
      for (const auto& a : distinct_tuples(g.size(), k)) {
        auto f = e.defining_sigma_formula(a, 1);
        CHECK(classify(f).side == Side::Sigma);
        CHECK(extension(g, f, k) == orbit_of(g, a));
      }
  }
}

TEST_CASE("direct rank agrees with the back-and-forth rank") {
  for (const auto& g : all_graphs_up_to(4)) {
    if (g.size() == 0) continue;
    CHECK(scott_rank_direct(g) == scott_rank(g));
  }
}

TEST_CASE("definability is monotone and isomorphism invariant") {
  for (const auto& g : all_graphs_up_to(4)) {
    ScottEngine e(g);
    for (int k = 0; k <= std::min(2, g.size()); ++k)
      for (const auto& a : distinct_tuples(g.size(), k)) {
        for (int alpha = 1; alpha < 3; ++alpha)
          if (e.orbit_definable(a, alpha)) CHECK(e.orbit_definable(a, alpha + 1));
        // relabel the structure by a permutation and compare
        std::vector<int> p(g.size());
        for (int i = 0; i < g.size(); ++i) p[i] = g.size() - 1 - i;
        Structure h(g.signature_ptr(), g.size());
        for (const auto& f : g.facts(0)) h.add(0, {p[f[0]], p[f[1]]});
        Tuple pa;
        for (int x : a) pa.push_back(p[x]);
        CHECK(orbit_definable(h, pa, 1) == e.orbit_definable(a, 1).has_value());
      }
  }
}

TEST_CASE("scott sentence holds exactly on copies") {
  auto gs = all_graphs_up_to(4);
  for (const auto& g : gs) {
    if (g.size() == 0) continue;
    auto phi = scott_sentence(g);
    auto c = classify(phi);
    CHECK(c.side == Side::Pi);
    CHECK(c.rank == 2);
    for (const auto& h : gs) CHECK(evaluate(h, phi, {}) == oracle::isomorphic(g, h));
  }
}
