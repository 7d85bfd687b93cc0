#include <algorithm>
#include <map>
#include <numeric>

#include "scottkit/core.hpp"

namespace scottkit {

namespace {

// Per-element fact index: (rel, position, fact) for every fact mentioning the element.
struct Incidence {
  std::vector<std::vector<std::pair<std::size_t, int>>> at;  // element -> (fact id, position)
  std::vector<std::pair<std::size_t, Tuple>> facts;           // fact id -> (rel, args)
};

Incidence index_facts(const Structure& s) {
  Incidence inc;
  inc.at.resize(s.size());
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    for (auto& f : s.facts(r)) {
      const std::size_t id = inc.facts.size();
      for (std::size_t p = 0; p < f.size(); ++p) inc.at[f[p]].push_back({id, static_cast<int>(p)});
      inc.facts.push_back({r, std::move(f)});
    }
  }
  return inc;
}

using Colors = std::vector<int>;

// Joint colour refinement of two structures.  Returns false when the colour
// class sizes diverge, which rules out any isomorphism respecting the colours.
bool refine(const Incidence& ia, const Incidence& ib, Colors& ca, Colors& cb) {
  const std::size_t n = ca.size();
  int classes = -1;
  while (true) {
    std::map<std::vector<int>, int> names;
    auto sig_of = [](const Incidence& inc, const Colors& c, int v) {
      std::vector<std::vector<int>> entries;
      entries.reserve(inc.at[v].size());
      for (auto [fid, pos] : inc.at[v]) {
        const auto& [rel, args] = inc.facts[fid];
        std::vector<int> e{static_cast<int>(rel), pos};
        for (int x : args) e.push_back(c[x]);
        entries.push_back(std::move(e));
      }
      std::sort(entries.begin(), entries.end());
      std::vector<int> key{c[v]};
      for (auto& e : entries) {
        key.push_back(static_cast<int>(e.size()));
        key.insert(key.end(), e.begin(), e.end());
      }
      return key;
    };
    std::vector<std::vector<int>> ka(n), kb(n);
    for (std::size_t v = 0; v < n; ++v) {
      ka[v] = sig_of(ia, ca, static_cast<int>(v));
      kb[v] = sig_of(ib, cb, static_cast<int>(v));
      names.emplace(ka[v], 0);
      names.emplace(kb[v], 0);
    }
    int next = 0;
    for (auto& [k, id] : names) id = next++;
    std::vector<int> count(next, 0);
    for (std::size_t v = 0; v < n; ++v) {
      ca[v] = names[ka[v]];
      cb[v] = names[kb[v]];
      ++count[ca[v]];
      --count[cb[v]];
    }
    for (int c : count)
      if (c != 0) return false;
    if (next == classes) return true;
    classes = next;
  }
}

struct IsoSearch {
  const Structure& s;
  const Structure& t;
  Incidence ia, ib;

  IsoSearch(const Structure& s_, const Structure& t_) : s(s_), t(t_), ia(index_facts(s_)), ib(index_facts(t_)) {}

  std::optional<std::vector<int>> run(Colors ca, Colors cb) {
    if (!refine(ia, ib, ca, cb)) return std::nullopt;
    const int n = s.size();
    std::vector<int> size(n + 2, 0);
    for (int c : ca) ++size[c];
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (size[ca[v]] > 1 && (best < 0 || size[ca[v]] < size[ca[best]])) best = v;
    }
    if (best < 0) {
      std::vector<int> f(n);
      std::vector<int> inv(n + 1, -1);
      for (int v = 0; v < n; ++v) inv[cb[v]] = v;
      for (int v = 0; v < n; ++v) f[v] = inv[ca[v]];
      if (is_isomorphism(s, t, f)) return f;
      return std::nullopt;
    }
    const int fresh = *std::max_element(ca.begin(), ca.end()) + 1;
    for (int w = 0; w < n; ++w) {
      if (cb[w] != ca[best]) continue;
      Colors na = ca, nb = cb;
      na[best] = fresh;
      nb[w] = fresh;
      if (auto r = run(std::move(na), std::move(nb))) return r;
    }
    return std::nullopt;
  }
};

}  // namespace

bool is_isomorphism(const Structure& s, const Structure& t, const std::vector<int>& f) {
  if (s.size() != t.size() || static_cast<int>(f.size()) != s.size()) return false;
  if (s.signature().symbols() != t.signature().symbols()) return false;
  std::vector<bool> hit(t.size(), false);
  for (int x : f) {
    if (x < 0 || x >= t.size() || hit[x]) return false;
    hit[x] = true;
  }
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    auto fs = s.facts(r);
    if (fs.size() != t.facts(r).size()) return false;
    for (const auto& fact : fs) {
      Tuple img(fact.size());
      for (std::size_t i = 0; i < fact.size(); ++i) img[i] = f[fact[i]];
      if (!t.holds(r, img)) return false;
    }
  }
  return true;
}

std::optional<std::vector<int>> find_isomorphism(const Structure& s, std::span<const int> a,
                                                 const Structure& t, std::span<const int> b) {
  if (s.size() != t.size() || a.size() != b.size()) return std::nullopt;
  if (s.signature().symbols() != t.signature().symbols()) return std::nullopt;
  check_tuple(s, a);
  check_tuple(t, b);
  const int n = s.size();
  // Individualized entries get colours 1..k; everything else starts at 0.
  Colors ca(n, 0), cb(n, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] = static_cast<int>(i) + 1;
    cb[b[i]] = static_cast<int>(i) + 1;
  }
  IsoSearch search(s, t);
  return search.run(std::move(ca), std::move(cb));
}

int OrbitPartition::index_of(std::span<const int> t) const {
  auto it = std::lower_bound(tuples.begin(), tuples.end(), t,
                             [](const Tuple& x, std::span<const int> y) {
                               return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
                             });
  if (it == tuples.end() || !std::equal(it->begin(), it->end(), t.begin(), t.end()))
    throw Error("tuple not in orbit partition");
  return static_cast<int>(it - tuples.begin());
}

OrbitPartition automorphism_orbits(const Structure& s, int m) {
  if (m < 0 || m > s.size()) throw Error("orbit tuple length exceeds domain size");
  OrbitPartition out;
  out.length = m;
  out.tuples = distinct_tuples(s.size(), m);
  out.class_of.assign(out.tuples.size(), -1);
  out.witness.resize(out.tuples.size());

  // Cheap invariant: refined colours of the entries with nothing individualized,
  // plus the atomic type.  Only tuples agreeing on it are compared by search.
  Incidence inc = index_facts(s);
  Colors base(s.size(), 0), base2(s.size(), 0);
  refine(inc, inc, base, base2);
  std::map<std::pair<std::vector<int>, std::vector<bool>>, std::vector<int>> buckets;  // -> class ids

  IsoSearch search(s, s);
  std::vector<int> identity(s.size());
  std::iota(identity.begin(), identity.end(), 0);

  for (std::size_t ti = 0; ti < out.tuples.size(); ++ti) {
    const Tuple& t = out.tuples[ti];
    std::vector<int> colours;
    for (int x : t) colours.push_back(base[x]);
    auto key = std::make_pair(colours, atomic_diagram(s, t).signs());
    auto& cand = buckets[key];
    for (int cls : cand) {
      const Tuple& rep = out.tuples[out.classes[cls][0]];
      Colors ca(s.size(), 0), cb(s.size(), 0);
      for (std::size_t i = 0; i < t.size(); ++i) {
        ca[rep[i]] = static_cast<int>(i) + 1;
        cb[t[i]] = static_cast<int>(i) + 1;
      }
      if (auto f = search.run(std::move(ca), std::move(cb))) {
        out.class_of[ti] = cls;
        out.classes[cls].push_back(static_cast<int>(ti));
        out.witness[ti] = std::move(*f);
        break;
      }
    }
    if (out.class_of[ti] < 0) {
      out.class_of[ti] = static_cast<int>(out.classes.size());
      cand.push_back(out.class_of[ti]);
      out.classes.push_back({static_cast<int>(ti)});
      out.witness[ti] = identity;
    }
  }
  return out;
}

}  // namespace scottkit
