#include <doctest.h>

#include <functional>
#include <map>
#include <random>

#include "oracles.hpp"
#include "scottkit/backforth.hpp"
#include "scottkit/scott.hpp"
#include "scottkit/tree_bf.hpp"

using namespace scottkit;

namespace {

std::vector<int> descendants(const LabeledTree& t, int n) {
  std::vector<int> out{n};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (int c : t.children(out[i])) out.push_back(c);
  return out;
}

void selections(std::vector<int> avail, int m, Tuple& cur, const std::function<void(const Tuple&)>& fn) {
  if (static_cast<int>(cur.size()) == m) {
    fn(cur);
    return;
  }
  for (int v : avail) {
    if (std::find(cur.begin(), cur.end(), v) != cur.end()) continue;
    cur.push_back(v);
    selections(avail, m, cur, fn);
    cur.pop_back();
  }
}

// The definition read literally over nodes: every beta below alpha, every
// extension, every selection of fresh variables of every length.
struct Literal {
  const LabeledTree* t[2];
  std::map<std::tuple<int, int, Tuple, int, Tuple, int>, bool> memo;

  bool le(int s, int a, const Tuple& sa, int b, const Tuple& sb, int alpha) {
    auto key = std::make_tuple(s, a, sa, b, sb, alpha);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const LabeledTree& ta = *t[s];
    const LabeledTree& tb = *t[1 - s];
    bool res = true;
    if (alpha == 0) {
      res = ta.node(a).label->select(sa) == tb.node(b).label->select(sb);
    } else {
      for (int beta = 0; beta < alpha && res; ++beta)
        for (int tp : descendants(tb, b)) {
          std::vector<int> fresh_b;
          for (int v = 0; v < tb.node(tp).level; ++v)
            if (std::find(sb.begin(), sb.end(), v) == sb.end()) fresh_b.push_back(v);
          for (int m = 0; m <= static_cast<int>(fresh_b.size()) && res; ++m) {
            Tuple cur;
            selections(fresh_b, m, cur, [&](const Tuple& ys) {
              if (!res) return;
              Tuple ext = sb;
              ext.insert(ext.end(), ys.begin(), ys.end());
              bool found = false;
              for (int sp : descendants(ta, a)) {
                std::vector<int> fresh_a;
                for (int v = 0; v < ta.node(sp).level; ++v)
                  if (std::find(sa.begin(), sa.end(), v) == sa.end()) fresh_a.push_back(v);
                Tuple c2;
                selections(fresh_a, m, c2, [&](const Tuple& xs) {
                  if (found) return;
                  Tuple ea = sa;
                  ea.insert(ea.end(), xs.begin(), xs.end());
                  if (le(1 - s, tp, ext, sp, ea, beta)) found = true;
                });
                if (found) break;
              }
              if (!found) res = false;
            });
          }
          if (!res) break;
        }
    }
    memo[key] = res;
    return res;
  }
};

// Drops random subtrees (never the root) from a tree; labels stay consistent.
LabeledTree prune(const LabeledTree& t, std::mt19937& rng, int percent) {
  LabeledTree out(t.signature_ptr(), t.depth(), t.width(), t.symbolic(), true);
  std::vector<int> map(t.size(), -1);
  map[0] = out.add_node(t.node(0).id, -1, 0, t.node(0).label, t.node(0).tuple, t.node(0).copy);
  for (int i = 1; i < t.size(); ++i) {
    const int p = map[t.node(i).parent];
    if (p < 0 || static_cast<int>(rng() % 100) < percent) continue;
    map[i] = out.add_node(t.node(i).id, p, t.node(i).level, t.node(i).label, t.node(i).tuple, t.node(i).copy);
  }
  return out;
}

Tuple iota(int n) {
  Tuple t(n);
  for (int i = 0; i < n; ++i) t[i] = i;
  return t;
}

}  // namespace

TEST_CASE("tree_bf examples") {
  auto k2 = embed_tree(complete_graph(2), 2, 2);
  auto e2 = embed_tree(empty_graph(2), 2, 2);
  CHECK(tree_bf_le(k2, 0, Tuple{}, k2, 0, Tuple{}, 0));
  // nodes 5.. are level 2
  CHECK_FALSE(tree_bf_le(k2, 5, Tuple{0, 1}, e2, 5, Tuple{0, 1}, 0));
  CHECK(tree_bf_le(k2, 5, Tuple{0}, e2, 5, Tuple{1}, 0));
  CHECK_FALSE(tree_bf_le(k2, 0, Tuple{}, e2, 0, Tuple{}, 1));
  CHECK_THROWS(tree_bf_le(k2, 1, Tuple{0, 1}, k2, 5, Tuple{0, 1}, 0));
  CHECK_THROWS(tree_bf_le(k2, 5, Tuple{0, 0}, k2, 5, Tuple{0, 1}, 0));
  CHECK_THROWS(tree_bf_le(k2, 5, Tuple{0}, k2, 5, Tuple{0, 1}, 0));
}

TEST_CASE("level 0 is label restriction equality") {
  auto t = embed_tree(path_graph(3), 3, 1);
  TreeBF bf(t, t);
  for (int a = 0; a < t.size(); ++a)
    for (int b = 0; b < t.size(); ++b)
      for (int k = 0; k <= std::min(t.node(a).level, t.node(b).level); ++k)
        for (const auto& x : distinct_tuples(t.node(a).level, k))
          for (const auto& y : distinct_tuples(t.node(b).level, k))
            CHECK(bf.le(a, x, b, y, 0) == (t.node(a).label->select(x) == t.node(b).label->select(y)));
}

TEST_CASE("tree relation matches the structure relation through the embedding") {
  auto gs = all_graphs_up_to(3);
  for (const auto& g : gs)
    for (const auto& h : gs) {
      auto tg = embed_tree(g, g.size(), 1);
      auto th = embed_tree(h, h.size(), 1);
      TreeBF bf(tg, th);
      BFTable tab(g, h, 3);
      for (int a = 0; a < tg.size(); ++a)
        for (int b = 0; b < th.size(); ++b) {
          const int la = tg.node(a).level, lb = th.node(b).level;
          for (int k = 0; k <= std::min(la, lb); ++k)
            for (const auto& x : distinct_tuples(la, k))
              for (const auto& y : distinct_tuples(lb, k)) {
                Tuple ea, eb;
                for (int i : x) ea.push_back(tg.node(a).tuple[i]);
                for (int i : y) eb.push_back(th.node(b).tuple[i]);
                for (int n = 0; n <= 2; ++n) CHECK(bf.le(a, x, b, y, n) == tab.le(ea, eb, n));
              }
        }
    }
}

TEST_CASE("reductions agree with the literal definition on irregular trees") {
  std::mt19937 rng(7);
  auto gs = all_graphs_up_to(3);
  for (int round = 0; round < 24; ++round) {
    const auto& g = gs[rng() % gs.size()];
    const auto& h = gs[rng() % gs.size()];
    auto tg = prune(embed_tree(g, g.size(), 1), rng, 25);
    auto th = prune(embed_tree(h, h.size(), 1), rng, 25);
    TreeBF bf(tg, th);
    Literal lit{{&tg, &th}, {}};
    for (int a = 0; a < tg.size(); ++a)
      for (int b = 0; b < th.size(); ++b) {
        const int k = std::min(tg.node(a).level, th.node(b).level);
        for (const auto& x : distinct_tuples(tg.node(a).level, k))
          for (const auto& y : distinct_tuples(th.node(b).level, k))
            for (int n = 0; n <= 2; ++n) CHECK(bf.le(a, x, b, y, n) == lit.le(0, a, x, b, y, n));
      }
  }
}

TEST_CASE("antitone, reflexive and copy invariant") {
  for (const auto& g : all_graphs_up_to(3)) {
    auto t = embed_tree(g, g.size(), 2);
    TreeBF bf(t, t);
    for (int a = 0; a < t.size(); ++a) {
      const Tuple all = iota(t.node(a).level);
      for (int n = 0; n <= 3; ++n) CHECK(bf.le(a, all, a, all, n));
      for (int b = 0; b < t.size(); ++b) {
        if (t.node(b).level != t.node(a).level) continue;
        for (int n = 0; n < 3; ++n)
          if (bf.le(a, all, b, all, n + 1)) CHECK(bf.le(a, all, b, all, n));
        // sibling copies of the same tuple answer identically
        if (t.node(a).tuple == t.node(b).tuple)
          for (int c = 0; c < t.size(); ++c)
            if (t.node(c).level == t.node(a).level)
              for (int n = 0; n <= 2; ++n) {
                const Tuple cs = iota(t.node(c).level);
                CHECK(bf.le(a, all, c, cs, n) == bf.le(b, all, c, cs, n));
                CHECK(bf.le(c, cs, a, all, n) == bf.le(c, cs, b, all, n));
              }
      }
    }
  }
}

TEST_CASE("depth budget on open trees") {
  auto t = embed_tree(complete_graph(3), 2, 2);
  CHECK_FALSE(t.closed());
  CHECK_NOTHROW(tree_bf_le(t, 0, Tuple{}, t, 0, Tuple{}, 1));
  CHECK_THROWS_AS(tree_bf_le(t, 0, Tuple{}, t, 0, Tuple{}, 2), ResourceError);
  CHECK_THROWS_AS(tree_bf_le(t, 1, Tuple{0}, t, 1, Tuple{0}, 2), ResourceError);
  CHECK_NOTHROW(tree_bf_le(t, 1, Tuple{0}, t, 1, Tuple{0}, 1));
  auto closed = embed_tree(complete_graph(3), 3, 1);
  CHECK(tree_bf_le(closed, 0, Tuple{}, closed, 0, Tuple{}, 5));
}

TEST_CASE("agreement counterexample") {
  // Under x1 = 0 only non-edges follow; under x1 = 1 a foreign edge is grafted.
  auto e = empty_graph(2);
  auto k = complete_graph(2);
  LabeledTree t(e.signature_ptr(), 2, 1, true, true);
  t.add_node(0, -1, 0, atomic_diagram(e, Tuple{}));
  t.add_node(1, 0, 1, atomic_diagram(e, Tuple{0}));
  t.add_node(2, 0, 1, atomic_diagram(e, Tuple{1}));
  t.add_node(3, 1, 2, atomic_diagram(e, Tuple{0, 1}));
  t.add_node(4, 2, 2, atomic_diagram(k, Tuple{1, 0}));
  REQUIRE(check_simple_properties(t).ok());
  auto v = check_agreement(t, 1);
  CHECK_FALSE(v.ok());
  CHECK(v.results[0].witness.find("beta=0") != std::string::npos);
  auto m = membership_verdict(t, 1);
  CHECK_FALSE(m.member);
  CHECK(m.reason == "agreement");
}

TEST_CASE("permutation counterexample") {
  // x3 is adjacent to x1 below, but no node puts an isolated vertex at x1.
  auto sig = Signature::graph();
  Structure s3(sig, 3);
  s3.add(0, {0, 2});
  LabeledTree t(sig, 3, 1, true, true);
  t.add_node(0, -1, 0, atomic_diagram(s3, Tuple{}));
  t.add_node(1, 0, 1, atomic_diagram(s3, Tuple{0}));
  t.add_node(2, 1, 2, atomic_diagram(s3, Tuple{0, 1}));
  t.add_node(3, 2, 3, atomic_diagram(s3, Tuple{0, 1, 2}));
  REQUIRE(check_simple_properties(t).ok());
  auto v = check_permutation(t, 1);
  CHECK_FALSE(v.ok());
  CHECK(v.results[0].witness.find("z=x2") != std::string::npos);
  CHECK(check_permutation(embed_tree(Structure(sig, 0), 0, 1), 1).ok());
}

TEST_CASE("vacuous agreement on a single path") {
  auto g = complete_graph(1);
  LabeledTree t(g.signature_ptr(), 1, 1, false, true);
  t.add_node(0, -1, 0, atomic_diagram(g, Tuple{}));
  t.add_node(1, 0, 1, atomic_diagram(g, Tuple{0}));
  CHECK(check_agreement(t, 1).ok());
}

TEST_CASE("support on small embeddings") {
  CHECK(check_support(embed_tree(complete_graph(1), 1, 2), 1).ok());
  for (const auto& g : all_graphs_up_to(3)) {
    auto t = embed_tree(g, g.size(), 2);
    CHECK(check_support(t, 1).ok());
    CHECK_FALSE(check_support(t, 0).ok());
  }
}

TEST_CASE("membership follows the Scott rank on small graphs") {
  for (const auto& g : all_graphs_up_to(3)) {
    auto t = embed_tree(g, g.size(), 2);
    const int r = g.size() == 0 ? 0 : scott_rank(g);
    for (int alpha = 0; alpha <= 3; ++alpha) {
      auto m = membership_verdict(t, alpha);
      CHECK(m.member == (alpha >= r && alpha >= 1));
      CHECK(m.verdict.results.size() == 6);
      CHECK(membership_verdict(t, alpha, AgreementBase::Nu).member == m.member);
    }
  }
  auto k2 = membership_verdict(embed_tree(complete_graph(2), 2, 2), 1);
  CHECK(k2.member);
  CHECK(k2.note.rfind("Pi_4", 0) == 0);
  auto g = complete_graph(1);
  LabeledTree bad(g.signature_ptr(), 1, 1, true, true);
  bad.add_node(0, -1, 0, atomic_diagram(g, Tuple{}));
  bad.add_node(1, 0, 1, std::nullopt);
  auto m = membership_verdict(bad, 1);
  CHECK_FALSE(m.member);
  CHECK(m.reason == "levels");
}
