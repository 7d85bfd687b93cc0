#include <doctest.h>

#include <algorithm>
#include <map>

#include "oracles.hpp"
#include "scottkit/backforth.hpp"
#include "scottkit/hardness.hpp"
#include "scottkit/scott.hpp"

using namespace scottkit;

namespace {

// Cycle lengths through each center, read off the graph: walk each pair of
// center edges around its petal.
std::map<int, std::vector<int>> petals_of(const Structure& g, int centers) {
  std::map<int, std::vector<int>> out;
  for (int c = 0; c < centers; ++c) {
    std::vector<bool> used(g.size(), false);
    for (int start = 0; start < g.size(); ++start) {
      if (start < centers || used[start] || !g.edge(c, start)) continue;
      int prev = c, cur = start, len = 1;
      while (cur != c) {
        used[cur] = true;
        int nxt = -1;
        for (int v = 0; v < g.size(); ++v)
          if (v != prev && g.edge(cur, v)) nxt = v;
        REQUIRE(nxt >= 0);
        prev = cur;
        cur = nxt;
        ++len;
      }
      used[prev] = true;
      out[c].push_back(len);
    }
    std::sort(out[c].begin(), out[c].end());
  }
  return out;
}

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<EnumeratedSet> cofinite_sets() {
  return {EnumeratedSet::parse("cofinite:1,3"), EnumeratedSet::parse("cofinite:"),
          EnumeratedSet::parse("cofinite:5"), EnumeratedSet::parse("periodic:m=1,r=0,t=0"),
          EnumeratedSet::parse("periodic:m=2,r=0/1,t=4,h=0/2")};
}

std::vector<EnumeratedSet> coinfinite_sets() {
  return {EnumeratedSet::parse("periodic:m=2,r=0,t=0"), EnumeratedSet::parse("finite:0,2,5"),
          EnumeratedSet::parse("finite:0"), EnumeratedSet::parse("periodic:m=3,r=0/2,t=4,h=0/1")};
}

}  // namespace

TEST_CASE("enumerated sets") {
  const auto ev = EnumeratedSet::parse("periodic:m=2,r=0,t=0");
  CHECK(ev.contains(0));
  CHECK_FALSE(ev.contains(3));
  CHECK(ev.stage(4) == std::vector<int>{0, 2, 4});
  CHECK_FALSE(ev.cofinite());
  const auto cf = EnumeratedSet::parse("cofinite:1,3");
  CHECK(cf.cofinite());
  CHECK(cf.complement() == std::vector<int>{1, 3});
  CHECK(cf.stage(4) == std::vector<int>{0, 2, 4});
  const auto p = EnumeratedSet::parse("periodic:m=3,r=0/2,t=4,h=1");
  CHECK(p.stage(9) == std::vector<int>{1, 5, 6, 8, 9});
  for (const auto& w : {ev, cf, p, EnumeratedSet::parse("finite:0,2,5")}) {
    CHECK(EnumeratedSet::parse(w.text()).text() == w.text());
    for (int s = 0; s < 12; ++s) {
      const auto a = w.stage(s), b = w.stage(s + 1);
      CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
      for (int k = 0; k <= s; ++k) CHECK(std::binary_search(a.begin(), a.end(), k) == w.contains(k));
    }
  }
  CHECK_THROWS_AS(EnumeratedSet::parse("evens"), ParseError);
  CHECK_THROWS_AS(EnumeratedSet::parse("finite:1,x"), ParseError);
  CHECK_THROWS_AS(EnumeratedSet::parse("periodic:m=2,r=3"), ParseError);
  CHECK_THROWS_AS(EnumeratedSet::parse("periodic:r=0"), ParseError);
  CHECK_THROWS_AS(ev.complement(), Error);
}

TEST_CASE("daisy bunch examples") {
  const auto all = EnumeratedSet::parse("cofinite:");
  const Structure g = daisy_bunch(all, 2, 2);
  const auto p = petals_of(g, 2);
  CHECK(p.at(0) == std::vector<int>{3, 4, 5});
  CHECK(p.at(1) == std::vector<int>{3, 4, 5});
  CHECK(g.size() == 2 + 2 * (2 + 3 + 4));

  const auto ev = EnumeratedSet::parse("periodic:m=2,r=0,t=0");
  CHECK(sorted(petal_lengths(ev, 1, 4)) == std::vector<int>{3, 4});
  const Structure h = daisy_bunch(ev, 3, 4);
  const auto q = petals_of(h, 3);
  CHECK(q.at(1) == std::vector<int>{3, 4});
  CHECK(q.at(0) == std::vector<int>{3, 5, 7});
  CHECK(q.at(2) == std::vector<int>{3, 5, 7});

  CHECK_THROWS_AS(daisy_bunch(EnumeratedSet::parse("finite:1,2"), 2, 2), Error);
}

TEST_CASE("daisy bunches follow the petal rule") {
  auto sets = cofinite_sets();
  for (const auto& w : coinfinite_sets()) sets.push_back(w);
  for (const auto& w : sets)
    for (int centers = 1; centers <= 4; ++centers)
      for (int s = 0; s <= 6; ++s) {
        const Structure g = daisy_bunch(w, centers, s);
        const auto p = petals_of(g, centers);
        int count = centers;
        for (int c = 0; c < centers; ++c) {
          std::vector<int> expect;
          if (w.contains(c)) {
            for (int k : w.stage(s)) expect.push_back(k + 3);
          } else {
            expect.push_back(c + 3);
            for (int k : w.stage(s))
              if (k < c) expect.push_back(k + 3);
          }
          CHECK(p.at(c) == sorted(expect));
          CHECK(sorted(petal_lengths(w, c, s)) == sorted(expect));
          for (int l : expect) count += l - 1;
          CHECK(g.degree(c) == 2 * static_cast<int>(expect.size()));
        }
        CHECK(g.size() == count);
        for (int v = centers; v < g.size(); ++v) CHECK(g.degree(v) == 2);
      }
}

TEST_CASE("stage graphs are induced substructures of later stages") {
  auto sets = cofinite_sets();
  for (const auto& w : coinfinite_sets()) sets.push_back(w);
  for (const auto& w : sets)
    for (int s = 0; s < 6; ++s)
      for (int t = s; t <= 6; ++t) {
        const Structure a = daisy_bunch(w, 3, s), b = daisy_bunch(w, 3, t);
        REQUIRE(a.size() <= b.size());
        Tuple prefix(a.size());
        for (int i = 0; i < a.size(); ++i) prefix[i] = i;
        CHECK(b.induced(prefix) == a);
      }
}

TEST_CASE("daisy classification") {
  CHECK(classify_daisy(EnumeratedSet::parse("cofinite:1,3")).rank == 1);
  CHECK(classify_daisy(EnumeratedSet::parse("periodic:m=2,r=0,t=0")).rank == 2);
  CHECK(classify_daisy(EnumeratedSet::parse("finite:0,2,5")).rank == 2);
  for (const auto& w : cofinite_sets()) CHECK(classify_daisy(w).rank == 1);
  for (const auto& w : coinfinite_sets()) CHECK(classify_daisy(w).rank == 2);
  CHECK_THROWS_AS(classify_daisy(EnumeratedSet::parse("cofinite:0")), Error);
}

TEST_CASE("rank 1 certificates define the centers on stage graphs") {
  for (const auto& w : cofinite_sets()) {
    const auto d = classify_daisy(w);
    const auto out = w.complement();
    const int b = out.empty() ? 0 : out.back() + 1;
    REQUIRE(std::find(d.certificate.begin(), d.certificate.end(), "bound b=" + std::to_string(b)) !=
            d.certificate.end());
    const int centers = b + 3;
    const int stage = b + 2;
    const Structure g = daisy_bunch(w, centers, stage);
    const auto p = petals_of(g, centers);
    auto with_petal = [&](int len) {
      std::vector<int> cs;
      for (int c = 0; c < centers; ++c)
        if (std::count(p.at(c).begin(), p.at(c).end(), len)) cs.push_back(c);
      return cs;
    };
    // each excluded center is the only one with its own petal length
    for (int i : out) CHECK(with_petal(i + 3) == std::vector<int>{i});
    // the members are exactly the centers with a petal of length b+3
    std::vector<int> members;
    for (int c = 0; c < centers; ++c)
      if (w.contains(c)) members.push_back(c);
    CHECK(with_petal(b + 3) == members);
  }
}

TEST_CASE("rank 2 certificates give escapes") {
  for (const auto& w : coinfinite_sets()) {
    const auto d = classify_daisy(w, 8);
    REQUIRE(d.certificate.size() == 8);
    for (int s = 1; s <= 8; ++s) {
      const std::string& line = d.certificate[s - 1];
      const auto at = line.find("b=");
      REQUIRE(at != std::string::npos);
      const int b = std::stoi(line.substr(at + 2));
      CHECK_FALSE(w.contains(b));
      CHECK(b + 3 > s);
      // center b has an own petal longer than s, and every shorter petal of b
      // is also a petal of every member center at late enough stages
      const Structure g = daisy_bunch(w, b + 1, b + 2);
      const auto p = petals_of(g, b + 1);
      CHECK(std::count(p.at(b).begin(), p.at(b).end(), b + 3) == 1);
      for (int l : p.at(b))
        if (l != b + 3) CHECK(std::count(p.at(0).begin(), p.at(0).end(), l) == 1);
    }
  }
}

TEST_CASE("coding examples") {
  const SurrogatePair pair{complete_graph(1), empty_graph(2), 0, false};
  const Structure b = code_structure(complete_graph(2), pair, 1);
  const auto& sig = b.signature();
  REQUIRE(sig.size() == 5);
  CHECK(sig[0].name == "U");
  CHECK(sig[2].name == "c0");
  CHECK(sig[3].name == "c1");
  auto class_size = [&](int rel, int x, int y) {
    int n = 0;
    for (int v = 0; v < b.size(); ++v) n += b.holds(rel, {v, x, y});
    return n;
  };
  // V(0,1,1) carries G, V(0,1,0) carries H
  CHECK(class_size(3, 0, 1) == 1);
  CHECK(class_size(2, 0, 1) == 2);
  CHECK(class_size(3, 1, 0) == 1);
  CHECK(class_size(2, 1, 0) == 2);
  CHECK(b.facts(0).size() == 2);
  CHECK(b.facts(1).size() == 6);

  const Structure e = code_structure(empty_graph(2), pair, 1);
  for (int v = 0; v < e.size(); ++v) {
    if (e.holds(3, {v, 0, 1})) CHECK(e.holds(1, {v}));
  }
  int g_class = 0, h_class = 0;
  for (int v = 0; v < e.size(); ++v) {
    g_class += e.holds(2, {v, 0, 1});
    h_class += e.holds(3, {v, 0, 1});
  }
  CHECK(g_class == 1);
  CHECK(h_class == 2);

  for (const auto& a : all_graphs_up_to(3))
    for (int width = 1; width <= 2; ++width) {
      const Structure c = code_structure(a, pair, width);
      const int n = a.size();
      CHECK(c.size() <= n + 2 * n * (n - 1) * width * 2);
      CHECK(c.size() == n + n * (n - 1) * width * 3);
      CHECK(static_cast<int>(c.facts(0).size()) == n);
    }
  CHECK_THROWS_AS(code_structure(complete_graph(2), pair, 0), Error);
}

TEST_CASE("surrogate search") {
  CHECK_THROWS_AS(find_surrogate_pair(1, 9), Error);
  CHECK_THROWS_AS(find_surrogate_pair(2, 6), Error);
  const SurrogatePair p = find_surrogate_pair(0, 6);
  CHECK(p.g.size() + p.h.size() == 3);
  CHECK_FALSE(oracle::isomorphic(p.g, p.h));
  CHECK(oracle::bf_le(p.g, {}, p.h, {}, 0, 0));
  CHECK(oracle::bf_le(p.h, {}, p.g, {}, 0, 0));
  CHECK_THROWS_AS(find_surrogate_pair(0, 1), Error);
}

TEST_CASE("no finite pair is level 1 equivalent") {
  // exhaustive check of the claim behind the level 1 search, sizes <= 4
  for (const auto& g : all_graphs_up_to(4))
    for (const auto& h : all_graphs_up_to(4)) {
      if (g.size() == 0 || h.size() == 0) continue;
      const bool eq = oracle::bf_le(g, {}, h, {}, 1, 4) && oracle::bf_le(h, {}, g, {}, 1, 4);
      CHECK(eq == oracle::isomorphic(g, h));
    }
}

TEST_CASE("coding transfer report") {
  const SurrogatePair pair = find_surrogate_pair(0, 6);
  for (const auto& a : all_graphs_up_to(2)) {
    if (a.size() < 2) continue;
    const CodingReport r = verify_coding_bf(a, pair, 2);
    CHECK(r.checked > 0);
    CHECK(r.rank_a == scott_rank(a));
    CHECK(r.rank_b == scott_rank(code_structure(a, pair, 1)));
    CHECK(r.rank_shift == (r.rank_b == r.rank_a + 1));
    for (const auto& v : r.violations) CHECK((v.rfind("(a)", 0) == 0 || v.rfind("(b)", 0) == 0));
  }
  CHECK_THROWS_AS(verify_coding_bf(empty_graph(4), pair, 2), ResourceError);
  CHECK_THROWS_AS(verify_coding_bf(complete_graph(2), pair, 4), ResourceError);
}
