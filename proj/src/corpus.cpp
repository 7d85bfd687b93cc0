#include "scottkit/corpus.hpp"

#include <algorithm>
#include <functional>

#include "scottkit/backforth.hpp"
#include "scottkit/forcing.hpp"
#include "scottkit/generic.hpp"
#include "scottkit/hardness.hpp"
#include "scottkit/scott.hpp"
#include "scottkit/tree_bf.hpp"

namespace scottkit {

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { row_.name = std::move(name); }
  void expect(bool ok, const std::function<std::string()>& what) {
    ++row_.checked;
    if (ok) return;
    if (row_.failures++ == 0) row_.first_failure = what();
  }
  CorpusRow done() { return std::move(row_); }

 private:
  CorpusRow row_;
};

bool isomorphic(const Structure& a, const Structure& b) {
  return a.size() == b.size() && find_isomorphism(a, b).has_value();
}

std::string graph_text(const Structure& g) {
  std::string s = "n=" + std::to_string(g.size()) + " E=";
  for (const auto& e : g.facts(0))
    if (e[0] < e[1]) s += "(" + std::to_string(e[0]) + "," + std::to_string(e[1]) + ")";
  return s;
}

std::vector<Formula> forcing_inventory() {
  std::vector<Formula> out;
  for (int k = 0; k <= 2; ++k)
    for (const auto& f : formula_inventory(Signature::graph(), k, 2, 3)) out.push_back(f);
  return out;
}

CorpusRow karp_level_one(const std::vector<Structure>& graphs) {
  Suite s("karp level 1");
  for (const auto& g : graphs)
    for (const auto& h : graphs)
      for (int len = 0; len <= 2; ++len)
        for (const Tuple& a : distinct_tuples(g.size(), len))
          for (const Tuple& b : distinct_tuples(h.size(), len))
            s.expect(sigma1_oracle(g, a, h, b) == bf_le(g, a, h, b, 1),
                     [&] { return graph_text(g) + " " + tuple_text(a) + " vs " + graph_text(h) + " " + tuple_text(b); });
  return s.done();
}

CorpusRow rank_oracles(const std::vector<Structure>& graphs, int jobs) {
  Suite s("scott rank oracles");
  for (const auto& g : graphs) {
    if (g.size() == 0) continue;
    s.expect(scott_rank_report(g, 1, jobs).rank == scott_rank_direct(g), [&] { return graph_text(g); });
  }
  return s.done();
}

CorpusRow embedding_iso(const std::vector<Structure>& graphs) {
  Suite s("embedding reduces isomorphism");
  std::vector<LabeledTree> trees;
  for (const auto& g : graphs) trees.push_back(embed_tree(g, g.size(), 2));
  for (std::size_t i = 0; i < graphs.size(); ++i)
    for (std::size_t j = 0; j < graphs.size(); ++j)
      s.expect(isomorphic(graphs[i], graphs[j]) == tree_iso(trees[i], trees[j]).has_value(),
               [&] { return graph_text(graphs[i]) + " vs " + graph_text(graphs[j]); });
  return s.done();
}

CorpusRow rank_correspondence(const std::vector<Structure>& graphs) {
  Suite s("rank correspondence");
  for (const auto& g : graphs) {
    if (g.size() == 0) continue;
    const int rank = scott_rank(g);
    const LabeledTree t = embed_tree(g, g.size(), 2);
    for (int alpha = 1; alpha <= 3; ++alpha)
      s.expect(membership_verdict(t, alpha).member == (alpha >= rank),
               [&] { return graph_text(g) + " alpha=" + std::to_string(alpha); });
  }
  return s.done();
}

CorpusRow encoding(const std::vector<Structure>& graphs) {
  Suite s("graph encoding");
  std::vector<Structure> enc;
  for (const auto& g : graphs) enc.push_back(graph_encode(g));
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    s.expect(isomorphic(graph_decode(enc[i], graphs[i].signature_ptr()), graphs[i]),
             [&] { return "round trip " + graph_text(graphs[i]); });
    for (std::size_t j = 0; j < graphs.size(); ++j)
      s.expect(isomorphic(graphs[i], graphs[j]) == isomorphic(enc[i], enc[j]),
               [&] { return graph_text(graphs[i]) + " vs " + graph_text(graphs[j]); });
  }
  return s.done();
}

CorpusRow orbits(const std::vector<Structure>& graphs) {
  Suite s("automorphism orbits");
  for (const auto& g : graphs)
    for (int m = 1; m <= std::min(2, g.size()); ++m) {
      const OrbitPartition op = automorphism_orbits(g, m);
      for (std::size_t i = 0; i < op.tuples.size(); ++i)
        for (std::size_t j = 0; j < op.tuples.size(); ++j)
          s.expect((op.class_of[i] == op.class_of[j]) == find_isomorphism(g, op.tuples[i], g, op.tuples[j]).has_value(),
                   [&] { return graph_text(g) + " " + tuple_text(op.tuples[i]) + " " + tuple_text(op.tuples[j]); });
    }
  return s.done();
}

CorpusRow forcing_properties(const std::vector<Structure>& graphs, const std::vector<Formula>& inv) {
  Suite s("forcing extension and consistency");
  for (const auto& g : graphs) {
    const LabeledTree t = embed_tree(g, g.size(), 2);
    Forcing f(t);
    for (const auto& psi : inv)
      for (int n = 0; n < t.size(); ++n) {
        const bool p = f.forces(n, psi);
        s.expect(!(p && f.forces(n, neg(psi))), [&] { return graph_text(g) + " node " + std::to_string(n) + " " + to_sexpr(psi); });
        if (p)
          for (int c : t.children(n))
            s.expect(f.forces(c, psi), [&] { return graph_text(g) + " child " + std::to_string(c) + " " + to_sexpr(psi); });
      }
  }
  return s.done();
}

CorpusRow forcing_definable(const std::vector<Structure>& graphs, const std::vector<Formula>& inv) {
  Suite s("definability of forcing");
  const TreeSignature wide = tree_signature(Signature::graph(), 2);
  for (const auto& th : inv) {
    const Complexity c = classify(th);
    s.expect(classify(force_formula(th, wide)) == (c.rank == 0 ? Complexity{Side::Sigma, 1} : c),
             [&] { return "complexity of " + to_sexpr(th); });
    if (c.rank == 0)
      s.expect(classify(force_formula(th, wide, QFreeForm::Pi1)) == Complexity{Side::Pi, 1},
               [&] { return "Pi_1 complexity of " + to_sexpr(th); });
  }
  for (const auto& g : graphs) {
    const LabeledTree t = embed_tree(g, g.size(), 2);
    const TreeSignature ts = tree_signature(g.signature_ptr(), t.depth());
    const Structure ext = tree_structure(t, ts);
    Forcing f(t);
    for (const auto& th : inv) {
      for (auto form : {QFreeForm::Sigma1, QFreeForm::Pi1}) {
        const Formula def = force_formula(th, ts, form);
        for (int n = 0; n < t.size(); ++n)
          s.expect(evaluate(ext, def, {{"y", n}}) == f.forces(n, th),
                   [&] { return graph_text(g) + " node " + std::to_string(n) + " " + to_sexpr(th); });
      }
    }
  }
  return s.done();
}

CorpusRow generic_paths(const std::vector<Structure>& graphs) {
  Suite s("generic paths");
  for (const auto& g : graphs) {
    const LabeledTree t = embed_tree(g, g.size(), 2);
    for (int alpha = 1; alpha <= 2; ++alpha) {
      const GenericPath p = build_generic_path(t, 0, alpha);
      s.expect(p.generic, [&] { return graph_text(g) + " alpha=" + std::to_string(alpha) + " not generic"; });
      const Structure a = extract_structure(t, p.nodes);
      s.expect(isomorphic(a, g), [&] { return graph_text(g) + " alpha=" + std::to_string(alpha) + " wrong structure"; });
      if (a.size() > 0)
        s.expect(scott_rank(a) <= alpha, [&] { return graph_text(g) + " alpha=" + std::to_string(alpha) + " rank"; });
    }
  }
  return s.done();
}

CorpusRow daisies() {
  Suite s("daisy petal rule");
  const std::vector<std::string> sets{"cofinite:1,3", "cofinite:", "periodic:m=2,r=0,t=0", "finite:0,2,5",
                                      "periodic:m=3,r=0/2,t=4,h=0/1"};
  for (const auto& text : sets) {
    const EnumeratedSet w = EnumeratedSet::parse(text);
    for (int centers = 1; centers <= 4; ++centers)
      for (int stage = 0; stage <= 6; ++stage) {
        const Structure g = daisy_bunch(w, centers, stage);
        int count = centers;
        for (int c = 0; c < centers; ++c) {
          std::vector<int> expect;
          for (int k : w.stage(stage))
            if (w.contains(c) || k < c) expect.push_back(k + 3);
          if (!w.contains(c)) expect.push_back(c + 3);
          std::vector<int> got = petal_lengths(w, c, stage);
          std::sort(expect.begin(), expect.end());
          std::sort(got.begin(), got.end());
          for (int l : expect) count += l - 1;
          s.expect(got == expect && g.degree(c) == 2 * static_cast<int>(expect.size()),
                   [&] { return text + " center " + std::to_string(c) + " stage " + std::to_string(stage); });
        }
        s.expect(g.size() == count, [&] { return text + " size at stage " + std::to_string(stage); });
        if (stage > 0) {
          const Structure prev = daisy_bunch(w, centers, stage - 1);
          Tuple prefix(prev.size());
          for (int i = 0; i < prev.size(); ++i) prefix[i] = i;
          s.expect(g.induced(prefix) == prev, [&] { return text + " prefix at stage " + std::to_string(stage); });
        }
      }
  }
  return s.done();
}

}  // namespace

std::vector<CorpusRow> run_corpus(int max_size, int jobs) {
  if (max_size < 1 || max_size > 4) throw Error("corpus: size must be between 1 and 4");
  const std::vector<Structure> graphs = all_graphs_up_to(max_size);
  const std::vector<Structure> small = all_graphs_up_to(std::min(max_size, 2));
  const std::vector<Formula> inv = forcing_inventory();
  std::vector<CorpusRow> rows;
  rows.push_back(karp_level_one(graphs));
  rows.push_back(rank_oracles(graphs, jobs));
  rows.push_back(embedding_iso(graphs));
  rows.push_back(rank_correspondence(graphs));
  rows.push_back(encoding(graphs));
  rows.push_back(orbits(graphs));
  rows.push_back(forcing_properties(small, inv));
  rows.push_back(forcing_definable(small, inv));
  rows.push_back(generic_paths(graphs));
  rows.push_back(daisies());
  return rows;
}

}  // namespace scottkit
