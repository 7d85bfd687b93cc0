#include "scottkit/scott.hpp"

#include <set>

namespace scottkit {

namespace {

// Distinct-element tuples of length len avoiding the entries of base, lexicographic.
std::vector<Tuple> fresh_tuples(int n, std::span<const int> base, int len) {
  std::vector<Tuple> out;
  std::vector<bool> used(n, false);
  for (int x : base) used[x] = true;
  Tuple cur;
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == len) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = true;
      cur.push_back(v);
      self(self);
      cur.pop_back();
      used[v] = false;
    }
  };
  rec(rec);
  return out;
}

Tuple concat(std::span<const int> a, std::span<const int> b) {
  Tuple t(a.begin(), a.end());
  t.insert(t.end(), b.begin(), b.end());
  return t;
}

}  // namespace

ScottEngine::ScottEngine(const Structure& s, int jobs) : s_(s) {
  try {
    table_ = std::make_unique<BFTable>(s_, s_, 16, -1, jobs);
  } catch (const ResourceError&) {
    table_.reset();
  }
}

bool ScottEngine::le(std::span<const int> a, std::span<const int> b, int n) const {
  if (table_) return table_->le(a, b, n);
  return bf_le_single(s_, a, b, n);
}

std::optional<OrbitWitness> ScottEngine::orbit_definable(std::span<const int> a, int alpha) const {
  if (alpha < 1) throw Error("orbit_definable: alpha must be at least 1");
  check_tuple(s_, a);
  const int n = s_.size();
  const int k = static_cast<int>(a.size());
  if (!table_) {
    // Naming every remaining element pins the tuple down up to automorphism.
    std::vector<bool> used(n, false);
    for (int x : a) used[x] = true;
    Tuple rest;
    for (int v = 0; v < n; ++v)
      if (!used[v]) rest.push_back(v);
    return OrbitWitness{0, rest};
  }
  for (int beta = 0; beta < alpha; ++beta) {
    for (int len = 0; len <= n - k; ++len) {
      const auto all = distinct_tuples(n, k + len);
      for (const auto& b : fresh_tuples(n, a, len)) {
        const Tuple ab = concat(a, b);
        bool ok = true;
        for (const auto& other : all) {
          if (le(ab, other, beta) && !le(a, std::span<const int>(other).first(k), alpha)) {
            ok = false;
            break;
          }
        }
        if (ok) return OrbitWitness{beta, b};
      }
    }
  }
  return std::nullopt;
}

Formula ScottEngine::pi_type_formula(std::span<const int> a, int alpha) const {
  if (alpha < 0) throw Error("pi_type_formula: negative level");
  check_tuple(s_, a);
  Tuple key(a.begin(), a.end());
  if (auto it = pi_memo_.find({key, alpha}); it != pi_memo_.end()) return it->second;
  const int n = s_.size();
  const int k = static_cast<int>(a.size());
  Formula result;
  if (alpha == 0) {
    result = type_formula(atomic_diagram(s_, a));
  } else {
    std::vector<Formula> parts{type_formula(atomic_diagram(s_, a))};
    for (const auto& b : distinct_tuples(n, k)) {
      if (le(a, b, alpha)) continue;
      // smallest level, then shortest extension of b with no counterpart over a
      Formula sep;
      for (int beta = 0; beta < alpha && !sep; ++beta) {
        for (int len = 0; len <= n - k && !sep; ++len) {
          const auto cs = fresh_tuples(n, a, len);
          for (const auto& d : fresh_tuples(n, b, len)) {
            const Tuple bd = concat(b, d);
            bool matched = false;
            for (const auto& c : cs)
              if (le(bd, concat(a, c), beta)) {
                matched = true;
                break;
              }
            if (!matched) {
              sep = forall_(var_names(k + 1, k + len), neg(pi_type_formula(bd, beta)));
              break;
            }
          }
        }
      }
      if (!sep) throw Error("pi_type_formula: no separating extension found");
      parts.push_back(sep);
    }
    result = and_merge(parts);
    if (result->kind != FormulaNode::Kind::And) result = conj({{{}, result}});
  }
  pi_memo_[{key, alpha}] = result;
  return result;
}

Formula ScottEngine::defining_sigma_formula(std::span<const int> a, int alpha) const {
  auto w = orbit_definable(a, alpha);
  if (!w) throw Error("defining_sigma_formula: the orbit is not Sigma_" + std::to_string(alpha) + "-definable");
  const int k = static_cast<int>(a.size());
  const int m = static_cast<int>(w->b.size());
  Formula f = exists_(var_names(k + 1, k + m), pi_type_formula(concat(a, w->b), w->beta));
  if (f->kind != FormulaNode::Kind::Or) f = disj({{{}, f}});
  return f;
}

bool orbit_definable(const Structure& s, std::span<const int> a, int alpha, OrbitWitness* witness) {
  ScottEngine e(s);
  auto w = e.orbit_definable(a, alpha);
  if (w && witness) *witness = *w;
  return w.has_value();
}

Formula pi_type_formula(const Structure& s, std::span<const int> a, int alpha) {
  return ScottEngine(s).pi_type_formula(a, alpha);
}

Formula defining_sigma_formula(const Structure& s, std::span<const int> a, int alpha) {
  return ScottEngine(s).defining_sigma_formula(a, alpha);
}

RankReport scott_rank_report(const Structure& s, int witness_len, int jobs) {
  if (s.size() == 0) throw Error("scott_rank: empty structure");
  ScottEngine e(s, jobs);
  RankReport rep;
  rep.method = e.tabled() ? "table" : "certificate";
  const int n = s.size();
  // orbit-definability is automorphism invariant, so one tuple per orbit suffices
  std::vector<Tuple> reps;
  if (e.tabled()) {
    for (int k = 0; k <= n; ++k) {
      auto op = automorphism_orbits(s, k);
      for (const auto& cls : op.classes) reps.push_back(op.tuples[cls[0]]);
    }
  } else {
    for (int k = 0; k <= std::min(n, witness_len); ++k) {
      auto op = automorphism_orbits(s, k);
      for (const auto& cls : op.classes) reps.push_back(op.tuples[cls[0]]);
    }
  }
  for (int alpha = 1;; ++alpha) {
    if (alpha > 64) throw Error("scott_rank: no rank found below 64");
    bool all = true;
    std::vector<std::pair<Tuple, OrbitWitness>> ws;
    for (const auto& a : reps) {
      auto w = e.orbit_definable(a, alpha);
      if (!w) {
        all = false;
        break;
      }
      if (static_cast<int>(a.size()) <= witness_len) ws.push_back({a, *w});
    }
    if (all) {
      rep.rank = alpha;
      rep.witnesses = std::move(ws);
      return rep;
    }
  }
}

int scott_rank(const Structure& s) { return scott_rank_report(s, 0).rank; }

bool orbit_sigma_definable_direct(const ScottEngine& e, std::span<const int> a, int alpha, const OrbitPartition& op) {
  const Structure& s = e.structure();
  const int n = s.size();
  const int k = static_cast<int>(a.size());
  const int cls = op.class_of[op.index_of(a)];
  for (int beta = 0; beta < alpha; ++beta)
    for (int len = 0; len <= n - k; ++len)
      for (const auto& b : fresh_tuples(n, a, len)) {
        Formula f = exists_(var_names(k + 1, k + len), e.pi_type_formula(concat(a, b), beta));
        bool equal = true;
        for (std::size_t i = 0; i < op.tuples.size() && equal; ++i) {
          Assignment asg;
          for (int j = 0; j < k; ++j) asg[var_name(j + 1)] = op.tuples[i][j];
          equal = evaluate(s, f, asg) == (op.class_of[i] == cls);
        }
        if (equal) return true;
      }
  return false;
}

int scott_rank_direct(const Structure& s, int max_alpha) {
  if (s.size() == 0) throw Error("scott_rank: empty structure");
  ScottEngine e(s);
  std::vector<OrbitPartition> ops;
  for (int k = 0; k <= s.size(); ++k) ops.push_back(automorphism_orbits(s, k));
  for (int alpha = 1; alpha <= max_alpha; ++alpha) {
    bool all = true;
    for (int k = 0; k <= s.size() && all; ++k)
      for (const auto& cls : ops[k].classes) {
        if (!orbit_sigma_definable_direct(e, ops[k].tuples[cls[0]], alpha, ops[k])) {
          all = false;
          break;
        }
      }
    if (all) return alpha;
  }
  throw Error("scott_rank_direct: no rank found up to " + std::to_string(max_alpha));
}

Formula scott_sentence(const Structure& s) {
  const int n = s.size();
  Tuple all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  auto names = var_names(1, n);
  Formula d = type_formula(atomic_diagram(s, all), names);
  std::vector<Formula> cover{neg(d)};
  const std::string y = var_name(n + 1);
  for (const auto& x : names) cover.push_back(atom(true, "=", {y, x}));
  auto block = names;
  block.push_back(y);
  return conj({{{}, disj({{names, d}})}, {block, qfree(false, cover)}});
}

}  // namespace scottkit
