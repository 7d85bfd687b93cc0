#include <algorithm>
#include <set>

#include "scottkit/core.hpp"

namespace scottkit {

// Layout: element i is vertex i; each element carries a tag path i - p1 - p2.
// A fact of the k-th symbol (0-based) gets a cycle of length k+4 through a hub;
// the hub reaches argument j (1-based) along a path of j edges.
Structure graph_encode(const Structure& s) {
  if (s.size() == 0) return empty_graph(1);
  std::vector<std::pair<int, int>> edges;
  int next = s.size();
  for (int e = 0; e < s.size(); ++e) {
    edges.push_back({e, next});
    edges.push_back({next, next + 1});
    next += 2;
  }
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    const int len = static_cast<int>(r) + 4;
    for (const auto& f : s.facts(r)) {
      const int hub = next;
      for (int i = 0; i < len; ++i) edges.push_back({hub + i, hub + (i + 1) % len});
      next += len;
      for (std::size_t j = 0; j < f.size(); ++j) {
        int prev = hub;
        for (std::size_t step = 1; step <= j; ++step) {
          edges.push_back({prev, next});
          prev = next++;
        }
        edges.push_back({prev, f[j]});
      }
    }
  }
  Structure g(Signature::graph(), next);
  for (auto [u, v] : edges) g.add(0, {u, v});
  return g;
}

Structure graph_decode(const Structure& g, SignaturePtr sig) {
  if (!g.signature().undirected_graph()) throw Error("graph_decode expects an undirected graph");
  const int n = g.size();
  std::vector<std::vector<int>> adj(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && g.edge(u, v)) adj[u].push_back(v);
  auto deg = [&](int v) { return static_cast<int>(adj[v].size()); };

  // Elements: v with a neighbour y of degree 2 whose other neighbour is a leaf.
  std::vector<bool> is_elem(n, false), is_tag(n, false);
  for (int v = 0; v < n; ++v) {
    for (int y : adj[v]) {
      if (deg(y) != 2) continue;
      int z = adj[y][0] == v ? adj[y][1] : adj[y][0];
      if (deg(z) == 1) is_elem[v] = true;
    }
  }
  // An isolated tagged element is a bare P3; keep its smaller end.
  for (int v = 0; v < n; ++v) {
    if (!is_elem[v] || deg(v) != 1) continue;
    int y = adj[v][0];
    int z = adj[y][0] == v ? adj[y][1] : adj[y][0];
    if (is_elem[z] && z < v) is_elem[v] = false;
  }
  std::vector<int> elems, pos(n, -1);
  for (int v = 0; v < n; ++v)
    if (is_elem[v]) {
      pos[v] = static_cast<int>(elems.size());
      elems.push_back(v);
    }
  for (int v : elems)
    for (int y : adj[v]) {
      if (deg(y) != 2) continue;
      int z = adj[y][0] == v ? adj[y][1] : adj[y][0];
      if (deg(z) == 1 && !is_elem[z]) {
        is_tag[y] = true;
        is_tag[z] = true;
      }
    }

  Structure out(sig, static_cast<int>(elems.size()));
  std::vector<bool> seen(n, false);
  for (int start = 0; start < n; ++start) {
    if (seen[start] || is_elem[start] || is_tag[start]) continue;
    // Gadget component with elements removed.
    std::vector<int> comp{start};
    seen[start] = true;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (int w : adj[comp[i]])
        if (!seen[w] && !is_elem[w] && !is_tag[w]) {
          seen[w] = true;
          comp.push_back(w);
        }
    std::set<int> inside(comp.begin(), comp.end());
    std::vector<int> cdeg(n, 0);
    for (int v : comp)
      for (int w : adj[v])
        if (inside.count(w)) ++cdeg[v];
    // Peel to the 2-core: that is the cycle.
    std::set<int> core = inside;
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = core.begin(); it != core.end();) {
        if (cdeg[*it] <= 1) {
          for (int w : adj[*it])
            if (core.count(w)) --cdeg[w];
          it = core.erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
    if (core.empty()) {
      if (comp.size() == 1 && deg(start) == 0 && elems.empty()) continue;  // empty-structure gadget
      throw Error("graph is not an encoding: gadget without cycle");
    }
    const int len = static_cast<int>(core.size());
    const std::size_t rel = static_cast<std::size_t>(len - 4);
    if (len < 4 || rel >= sig->size()) throw Error("graph is not an encoding: unknown cycle length");
    int hub = -1;
    for (int v : core)
      if (deg(v) > 2) hub = v;
    if (hub < 0) throw Error("graph is not an encoding: no hub");
    Tuple args((*sig)[rel].arity, -1);
    for (int u : adj[hub]) {
      if (core.count(u)) continue;
      int prev = hub, cur = u, dist = 1;
      while (!is_elem[cur]) {
        int nxt = -1;
        for (int w : adj[cur])
          if (w != prev) nxt = w;
        if (nxt < 0 || deg(cur) != 2) throw Error("graph is not an encoding: broken argument path");
        prev = cur;
        cur = nxt;
        ++dist;
      }
      if (dist > static_cast<int>(args.size()) || args[dist - 1] != -1)
        throw Error("graph is not an encoding: bad argument path length");
      args[dist - 1] = pos[cur];
    }
    for (int a : args)
      if (a < 0) throw Error("graph is not an encoding: missing argument");
    out.add(rel, args);
  }
  return out;
}

}  // namespace scottkit
