#include "scottkit/generic.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace scottkit {

namespace {

bool in_budget(const LabeledTree& t, int level, int beta) {
  try {
    check_tree_budget(t, level, beta);
    return true;
  } catch (const ResourceError&) {
    return false;
  }
}

Tuple iota(int from, int to) {
  Tuple t;
  for (int i = from; i < to; ++i) t.push_back(i);
  return t;
}

bool any_selection(const std::vector<int>& avail, int m, const std::function<bool(const Tuple&)>& fn) {
  Tuple cur;
  std::vector<bool> used(avail.size(), false);
  std::function<bool()> rec = [&]() -> bool {
    if (static_cast<int>(cur.size()) == m) return fn(cur);
    for (std::size_t i = 0; i < avail.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      cur.push_back(avail[i]);
      bool done = rec();
      cur.pop_back();
      used[i] = false;
      if (done) return true;
    }
    return false;
  };
  return rec();
}

void check_path(const LabeledTree& t, const std::vector<int>& path) {
  if (path.empty() || path[0] != 0) throw Error("path must start at the root");
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] < 0 || path[i] >= t.size()) throw Error("path node out of range");
    if (i > 0 && (t.node(path[i]).parent != path[i - 1] || path[i] == path[i - 1]))
      throw Error("path nodes are not consecutive");
  }
}

class Requirements {
 public:
  Requirements(const LabeledTree& t, int alpha) : t_(t), bf_(t, t), q_(bf_.quotient_of(0)), alpha_(alpha) {}

  // In-budget requirements for nu, ordered by (id of tau, beta); one tau per class.
  const std::vector<Requirement>& for_nu(int nu) {
    auto it = cache_.find(nu);
    if (it != cache_.end()) return it->second;
    std::vector<int> below{nu};
    for (std::size_t i = 0; i < below.size(); ++i)
      for (int c : t_.children(below[i])) below.push_back(c);
    std::sort(below.begin(), below.end(), [&](int a, int b) { return t_.node(a).id < t_.node(b).id; });
    std::vector<Requirement> out;
    std::set<int> seen;
    for (int tau : below) {
      if (!seen.insert(q_.class_of[tau]).second) continue;
      for (int beta = 0; beta < alpha_; ++beta)
        if (in_budget(t_, t_.node(tau).level, beta)) out.push_back({nu, tau, beta});
    }
    return cache_[nu] = std::move(out);
  }

  bool satisfied_by(const Requirement& r, int tp) {
    const int ln = t_.node(r.nu).level, lt = t_.node(r.tau).level, lp = t_.node(tp).level;
    const int m = lt - ln;
    if (lp - ln < m || !in_budget(t_, lp, r.beta)) return false;
    const Tuple xs = iota(0, ln);
    std::vector<int> avail;
    for (int v = ln; v < lp; ++v) avail.push_back(v);
    const int ct = q_.class_of[r.tau], cp = q_.class_of[tp];
    return any_selection(avail, m, [&](const Tuple& zs) {
      Tuple sel = xs;
      sel.insert(sel.end(), zs.begin(), zs.end());
      return bf_.rel(0, ct, iota(0, lt), cp, sel, r.beta);
    });
  }

  // Met by some node of path[from..] (nodes extending nu along the path).
  bool met_on(const Requirement& r, const std::vector<int>& path, std::size_t from) {
    for (std::size_t i = from; i < path.size(); ++i)
      if (satisfied_by(r, path[i])) return true;
    return false;
  }

 private:
  const LabeledTree& t_;
  TreeBF bf_;
  const TreeQuotient& q_;
  int alpha_;
  std::map<int, std::vector<Requirement>> cache_;
};

std::string note_for(const LabeledTree& t) {
  return t.closed() ? "exact on a closed tree" : "relative to the depth budget";
}

}  // namespace

std::vector<Requirement> unmet_requirements(const LabeledTree& t, const std::vector<int>& path, int alpha) {
  check_path(t, path);
  Requirements reqs(t, alpha);
  std::vector<Requirement> out;
  for (std::size_t i = 0; i < path.size(); ++i)
    for (const auto& r : reqs.for_nu(path[i]))
      if (!reqs.met_on(r, path, i)) out.push_back(r);
  return out;
}

GenericPath build_generic_path(const LabeledTree& t, int sigma0, int alpha, int max_steps) {
  if (sigma0 < 0 || sigma0 >= t.size()) throw Error("generic path: node index out of range");
  if (alpha < 0) throw Error("generic path: negative alpha");
  Requirements reqs(t, alpha);
  GenericPath g;
  g.nodes = t.path_to(sigma0);
  g.note = note_for(t);
  std::set<std::pair<int, std::pair<int, int>>> done, abandoned;
  auto key = [](const Requirement& r) { return std::make_pair(r.nu, std::make_pair(r.tau, r.beta)); };
  int steps = 0;
  while (true) {
    const int cur = g.nodes.back();
    std::optional<Requirement> need;
    for (std::size_t i = 0; i < g.nodes.size() && !need; ++i) {
      for (const auto& r : reqs.for_nu(g.nodes[i])) {
        if (done.count(key(r)) || abandoned.count(key(r))) continue;
        if (reqs.met_on(r, g.nodes, i)) {
          done.insert(key(r));
          continue;
        }
        need = r;
        break;
      }
    }
    int next = -1;
    if (need) {
      std::vector<int> below;
      for (int c : t.children(cur)) below.push_back(c);
      for (std::size_t i = 0; i < below.size(); ++i)
        for (int c : t.children(below[i])) below.push_back(c);
      std::sort(below.begin(), below.end(), [&](int a, int b) { return t.node(a).id < t.node(b).id; });
      for (int tp : below)
        if (reqs.satisfied_by(*need, tp)) {
          next = tp;
          break;
        }
      if (next < 0) {
        abandoned.insert(key(*need));
        continue;
      }
      g.served.push_back(*need);
      done.insert(key(*need));
    } else {
      for (int c : t.children(cur))
        if (next < 0 || t.node(c).id < t.node(next).id) next = c;
      if (next < 0) break;
    }
    if (++steps > max_steps) break;
    const auto full = t.path_to(next);
    g.nodes.insert(g.nodes.end(), full.begin() + static_cast<std::ptrdiff_t>(g.nodes.size()), full.end());
  }
  g.unmet = unmet_requirements(t, g.nodes, alpha);
  g.generic = g.unmet.empty();
  return g;
}

Structure extract_structure(const LabeledTree& t, const std::vector<int>& path) {
  check_path(t, path);
  for (std::size_t i = 0; i < path.size(); ++i)
    if (t.node(path[i]).level != static_cast<int>(i)) throw Error("extract_structure: levels along the path are wrong");
  const auto& last = t.node(path.back()).label;
  if (!last) throw Error("extract_structure: unlabeled node");
  for (int n : path) {
    const auto& lab = t.node(n).label;
    if (!lab || !(last->restrict_to(lab->vars()) == *lab))
      throw Error("extract_structure: inconsistent labels along the path");
  }
  return last->model();
}

GoodMatchResult good_match_verify(const LabeledTree& t1, const LabeledTree& t2, int alpha) {
  TreeBF bf(t1, t2);
  const auto& q1 = bf.quotient_of(0);
  const auto& q2 = bf.quotient_of(1);
  check_tree_budget(t1, 0, alpha);
  check_tree_budget(t2, 0, alpha);
  auto id1 = [&](int c) { return std::to_string(t1.node(q1.rep[c]).id); };
  auto id2 = [&](int c) { return std::to_string(t2.node(q2.rep[c]).id); };
  auto match = [&](int a, int b) {
    if (q1.level[a] != q2.level[b]) return false;
    const Tuple full = iota(0, q1.level[a]);
    return bf.rel(0, a, full, b, full, alpha) && bf.rel(1, b, full, a, full, alpha);
  };
  GoodMatchResult res;
  const int r1 = q1.class_of[0], r2 = q2.class_of[0];
  if (!match(r1, r2)) {
    res.trace.push_back("fail base: root " + id1(r1) + " does not match root " + id2(r2));
    return res;
  }
  res.trace.push_back("base " + id1(r1) + " -> " + id2(r2));
  std::set<std::pair<int, int>> seen{{r1, r2}};
  std::vector<std::pair<int, int>> todo{{r1, r2}};
  while (!todo.empty()) {
    auto [a, b] = todo.front();
    todo.erase(todo.begin());
    const int next = q1.level[a] + 1;
    if (!in_budget(t1, next, alpha) || !in_budget(t2, next, alpha)) continue;
    for (int ca : q1.children[a]) {
      int found = -1;
      for (int cb : q2.children[b])
        if (match(ca, cb)) {
          found = cb;
          break;
        }
      if (found < 0) {
        res.trace.push_back("fail forth at level " + std::to_string(next) + ": no match for " + id1(ca) + " under " +
                            id2(b));
        return res;
      }
      res.trace.push_back("forth " + id1(ca) + " -> " + id2(found));
      if (seen.insert({ca, found}).second) todo.push_back({ca, found});
    }
    for (int cb : q2.children[b]) {
      int found = -1;
      for (int ca : q1.children[a])
        if (match(ca, cb)) {
          found = ca;
          break;
        }
      if (found < 0) {
        res.trace.push_back("fail back at level " + std::to_string(next) + ": no match for " + id2(cb) + " under " +
                            id1(a));
        return res;
      }
      res.trace.push_back("back " + id1(found) + " <- " + id2(cb));
      if (seen.insert({found, cb}).second) todo.push_back({found, cb});
    }
  }
  res.ok = true;
  return res;
}

}  // namespace scottkit
