#include "scottkit/tree_bf.hpp"

#include <algorithm>
#include <functional>

namespace scottkit {

namespace {

// Calls fn on every injective selection of m entries of avail, in
// lexicographic order of positions; stops when fn returns true.
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

std::vector<int> unused(int level, const Tuple& sel) {
  std::vector<int> out;
  for (int v = 0; v < level; ++v)
    if (std::find(sel.begin(), sel.end(), v) == sel.end()) out.push_back(v);
  return out;
}

Tuple iota(int from, int to) {
  Tuple t;
  for (int i = from; i < to; ++i) t.push_back(i);
  return t;
}

Tuple cat(Tuple a, const Tuple& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string node_text(const LabeledTree& t, const TreeQuotient& q, int cls) {
  return std::to_string(t.node(q.rep[cls]).id);
}

}  // namespace

void check_tree_budget(const LabeledTree& t, int level, int alpha) {
  if (t.closed()) return;
  const int d = t.depth();
  const int ext = std::min(std::max(d - level, 0), 2);
  if (d < level + alpha * ext)
    throw ResourceError("tree_bf: depth budget exceeded (d=" + std::to_string(d) + ", level " + std::to_string(level) +
                        ", alpha " + std::to_string(alpha) + ")");
}

TreeBF::TreeBF(const LabeledTree& left, const LabeledTree& right)
    : t_{left, right}, q_{quotient(left), quotient(right)} {
  if (!(*left.signature_ptr() == *right.signature_ptr())) throw Error("tree_bf: trees over different signatures");
}

void TreeBF::validate(int side, int node, std::span<const int> sel) const {
  const auto& t = t_[side];
  if (node < 0 || node >= t.size()) throw Error("tree_bf: node index out of range");
  const int lv = t.node(node).level;
  for (std::size_t i = 0; i < sel.size(); ++i) {
    if (sel[i] < 0 || sel[i] >= lv) throw Error("tree_bf: variable not among the node's variables");
    for (std::size_t j = 0; j < i; ++j)
      if (sel[i] == sel[j]) throw Error("tree_bf: repeated variable in selection");
  }
}

bool TreeBF::le(int sigma, std::span<const int> x, int tau, std::span<const int> y, int alpha) {
  if (x.size() != y.size()) throw Error("tree_bf: selections of different length");
  if (alpha < 0) throw Error("tree_bf: negative level");
  validate(0, sigma, x);
  validate(1, tau, y);
  check_tree_budget(t_[0], t_[0].node(sigma).level, alpha);
  check_tree_budget(t_[1], t_[1].node(tau).level, alpha);
  return rel(0, q_[0].class_of[sigma], Tuple(x.begin(), x.end()), q_[1].class_of[tau], Tuple(y.begin(), y.end()), alpha);
}

bool TreeBF::ge(int tau, std::span<const int> y, int sigma, std::span<const int> x, int alpha) {
  if (x.size() != y.size()) throw Error("tree_bf: selections of different length");
  if (alpha < 0) throw Error("tree_bf: negative level");
  validate(0, sigma, x);
  validate(1, tau, y);
  check_tree_budget(t_[0], t_[0].node(sigma).level, alpha);
  check_tree_budget(t_[1], t_[1].node(tau).level, alpha);
  return rel(1, q_[1].class_of[tau], Tuple(y.begin(), y.end()), q_[0].class_of[sigma], Tuple(x.begin(), x.end()), alpha);
}

bool TreeBF::rel(int s, int a, const Tuple& sa, int b, const Tuple& sb, int alpha) {
  auto key = std::make_tuple(s, a, sa, b, sb, alpha);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const TreeQuotient& qa = q_[s];
  const TreeQuotient& qb = q_[1 - s];
  bool result;
  if (alpha == 0) {
    const auto& la = qa.label[a];
    const auto& lb = qb.label[b];
    if (!la || !lb) throw Error("tree_bf: unlabeled node");
    result = la->select(sa) == lb->select(sb);
  } else {
    // Only beta = alpha - 1 is needed: the relation is antitone, so a
    // response at alpha - 1 answers every smaller beta.  Likewise only the
    // challenge naming all remaining variables of tau' is needed, since
    // responses to it restrict to responses for sub-selections.
    result = rel(s, a, sa, b, sb, alpha - 1);
    for (std::size_t i = 0; result && i < qb.desc[b].size(); ++i) {
      const int tp = qb.desc[b][i];
      const Tuple ext = cat(sb, unused(qb.level[tp], sb));
      const int m = static_cast<int>(ext.size() - sb.size());
      bool found = false;
      for (int sp : qa.desc[a]) {
        if (qa.level[sp] - static_cast<int>(sa.size()) < m) continue;
        found = any_selection(unused(qa.level[sp], sa), m,
                              [&](const Tuple& xs) { return rel(1 - s, tp, ext, sp, cat(sa, xs), alpha - 1); });
        if (found) break;
      }
      result = found;
    }
  }
  memo_[key] = result;
  return result;
}

bool tree_bf_le(const LabeledTree& t, int sigma, std::span<const int> x, const LabeledTree& u, int tau,
                std::span<const int> y, int alpha) {
  TreeBF bf(t, u);
  return bf.le(sigma, x, tau, y, alpha);
}

// ---------------------------------------------------------------- properties

namespace {

// Budget check for a class-level query inside one tree.
void budget(const LabeledTree& t, const TreeQuotient& q, int cls, int alpha) {
  check_tree_budget(t, q.level[cls], alpha);
}

}  // namespace

Verdict check_agreement(const LabeledTree& t, int alpha, AgreementBase base) {
  TreeBF bf(t, t);
  const auto& q = bf.quotient_of(0);
  PropertyResult r{"agreement", true, ""};
  for (int nu = 0; nu < q.size() && r.pass; ++nu) {
    const Tuple xs = iota(0, q.level[nu]);
    for (int sigma : q.desc[nu]) {
      for (int tau : q.desc[nu]) {
        const Tuple full = iota(0, q.level[tau]);
        const int m = q.level[tau] - q.level[nu];
        for (int beta = 0; beta < alpha; ++beta) {
          budget(t, q, tau, beta);
          bool found = false;
          for (int tp : q.desc[base == AgreementBase::Sigma ? sigma : nu]) {
            if (q.level[tp] - q.level[nu] < m) continue;
            budget(t, q, tp, beta);
            found = any_selection(unused(q.level[tp], xs), m,
                                  [&](const Tuple& zs) { return bf.rel(0, tau, full, tp, cat(xs, zs), beta); });
            if (found) break;
          }
          if (!found) {
            r.pass = false;
            r.witness = "nu=" + node_text(t, q, nu) + " sigma=" + node_text(t, q, sigma) + " tau=" + node_text(t, q, tau) +
                        " beta=" + std::to_string(beta);
            return Verdict{{r}};
          }
        }
      }
    }
  }
  return Verdict{{r}};
}

Verdict check_permutation(const LabeledTree& t, int alpha) {
  TreeBF bf(t, t);
  const auto& q = bf.quotient_of(0);
  PropertyResult r{"permutation", true, ""};
  for (int sigma = 0; sigma < q.size(); ++sigma) {
    const int l = q.level[sigma];
    const Tuple xs = iota(0, l);
    for (int tau : q.desc[sigma]) {
      if (q.level[tau] <= l) continue;
      for (int z = l; z < q.level[tau]; ++z) {
        Tuple ys;
        for (int v = l; v < q.level[tau]; ++v)
          if (v != z) ys.push_back(v);
        const Tuple lhs = cat(cat(xs, ys), {z});
        for (int beta = 0; beta < alpha; ++beta) {
          budget(t, q, tau, beta);
          bool found = false;
          for (int tp : q.desc[sigma]) {
            if (q.level[tp] < l + 1 + static_cast<int>(ys.size())) continue;
            budget(t, q, tp, beta);
            found = any_selection(unused(q.level[tp], iota(0, l + 1)), static_cast<int>(ys.size()), [&](const Tuple& us) {
              return bf.rel(0, tau, lhs, tp, cat(cat(xs, us), {l}), beta);
            });
            if (found) break;
          }
          if (!found) {
            r.pass = false;
            r.witness = "sigma=" + node_text(t, q, sigma) + " tau=" + node_text(t, q, tau) + " z=x" +
                        std::to_string(z + 1) + " beta=" + std::to_string(beta);
            return Verdict{{r}};
          }
        }
      }
    }
  }
  return Verdict{{r}};
}

Verdict check_support(const LabeledTree& t, int alpha) {
  TreeBF bf(t, t);
  const auto& q = bf.quotient_of(0);
  PropertyResult r{"support", true, ""};
  for (int sigma = 0; sigma < q.size(); ++sigma) {
    const int l = q.level[sigma];
    const Tuple xs = iota(0, l);
    bool supported = false;
    for (int beta = 0; beta < alpha && !supported; ++beta) {
      for (int tau : q.desc[sigma]) {
        const int lt = q.level[tau];
        const Tuple full = iota(0, lt);
        budget(t, q, tau, beta);
        budget(t, q, sigma, alpha);
        bool ok = true;
        for (int tp = 0; tp < q.size() && ok; ++tp) {
          if (q.level[tp] < lt) continue;
          budget(t, q, tp, alpha);
          // a violating (x', y') refutes this candidate
          ok = !any_selection(iota(0, q.level[tp]), lt, [&](const Tuple& sel) {
            if (!bf.rel(0, tau, full, tp, sel, beta)) return false;
            return !bf.rel(0, sigma, xs, tp, Tuple(sel.begin(), sel.begin() + l), alpha);
          });
        }
        if (ok) {
          supported = true;
          break;
        }
      }
    }
    if (!supported) {
      r.pass = false;
      r.witness = "sigma=" + node_text(t, q, sigma);
      break;
    }
  }
  return Verdict{{r}};
}

Membership membership_verdict(const LabeledTree& t, int alpha, AgreementBase base) {
  Membership m;
  m.verdict = check_simple_properties(t);
  const bool simple_ok = m.verdict.results[0].pass && m.verdict.results[1].pass;
  if (simple_ok) {
    for (auto v : {check_agreement(t, alpha, base), check_permutation(t, alpha), check_support(t, alpha)})
      m.verdict.results.push_back(v.results[0]);
  } else {
    for (const char* name : {"agreement", "permutation", "support"})
      m.verdict.results.push_back({name, false, "skipped: levels or consistency failed"});
  }
  m.member = m.verdict.ok();
  if (auto f = m.verdict.first_failure()) m.reason = f->name;
  m.note = "Pi_" + std::to_string(2 * alpha + 2) + (t.closed() ? " (exact on a closed tree)" : " (within budget)");
  return m;
}

}  // namespace scottkit
