#include "scottkit/forcing.hpp"

#include <algorithm>
#include <functional>

#include "scottkit/tree_bf.hpp"

namespace scottkit {

namespace {

using Kind = FormulaNode::Kind;

bool is_qf(const Formula& f) { return f->kind == Kind::Atom || f->kind == Kind::QFree; }

// Highest x<i> index among the free variables; throws on other names.
int max_free_index(const Formula& f) {
  int m = 0;
  for (const auto& v : free_vars(f)) {
    const int i = var_index(v);
    if (i < 1) throw Error("forcing: free variable " + v + " is not a tree variable x<i>");
    m = std::max(m, i);
  }
  return m;
}

// Calls fn on every map from k positions into 1..n (repeats allowed).
bool any_assignment(int k, int n, const std::function<bool(const std::vector<int>&)>& fn) {
  if (k > 0 && n == 0) return false;
  std::vector<int> t(k, 1);
  while (true) {
    if (fn(t)) return true;
    int i = k - 1;
    while (i >= 0 && ++t[i] > n) t[i--] = 1;
    if (i < 0) return false;
  }
}

Formula instantiate(const Branch& b, const std::vector<int>& t) {
  std::map<std::string, std::string> m;
  for (std::size_t j = 0; j < b.vars.size(); ++j) m[b.vars[j]] = var_name(t[j]);
  return rename_free(b.body, m);
}

}  // namespace

// ---------------------------------------------------------------- forcing

Forcing::Forcing(const LabeledTree& t) : t_(t), q_(quotient(t)) {
  models_.resize(q_.size());
  for (int c = 0; c < q_.size(); ++c)
    if (q_.label[c]) models_[c] = q_.label[c]->model();
}

void Forcing::check(int node, const Formula& psi) const {
  if (node < 0 || node >= t_.size()) throw Error("forcing: node index out of range");
  max_free_index(psi);
  check_tree_budget(t_, t_.node(node).level, classify(psi).rank);
}

bool Forcing::forces(int node, const Formula& psi) {
  check(node, psi);
  return forces_class(q_.class_of[node], psi);
}

bool Forcing::weakly_forces(int node, const Formula& psi) {
  check(node, psi);
  const Formula n = neg(psi);
  for (int d : q_.desc[q_.class_of[node]])
    if (forces_class(d, n)) return false;
  return true;
}

bool Forcing::forces_class(int cls, const Formula& psi) {
  auto key = std::make_pair(cls, to_sexpr(psi));
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const int l = q_.level[cls];
  bool result = false;
  if (is_qf(psi)) {
    if (max_free_index(psi) <= l) {
      if (!models_[cls]) throw Error("forcing: unlabeled node");
      Assignment asg;
      for (const auto& v : free_vars(psi)) asg[v] = var_index(v) - 1;
      result = evaluate(*models_[cls], psi, asg);
    }
  } else if (psi->kind == Kind::Or) {
    for (const auto& b : psi->branches) {
      result = any_assignment(static_cast<int>(b.vars.size()), l,
                              [&](const std::vector<int>& t) { return forces_class(cls, instantiate(b, t)); });
      if (result) break;
    }
  } else if (max_free_index(psi) <= l) {
    const Formula n = neg(psi);
    result = true;
    for (int d : q_.desc[cls])
      if (forces_class(d, n)) {
        result = false;
        break;
      }
  }
  memo_[key] = result;
  return result;
}

bool forces(const LabeledTree& t, int node, const Formula& psi) { return Forcing(t).forces(node, psi); }
bool weakly_forces(const LabeledTree& t, int node, const Formula& psi) { return Forcing(t).weakly_forces(node, psi); }

// ---------------------------------------------------------------- trees as structures

namespace {

std::vector<AtomicType> consistent_types(const SignaturePtr& sig, int n) {
  std::vector<AtomicType> out;
  Tuple all;
  for (int i = 0; i < n; ++i) all.push_back(i);
  if (sig->undirected_graph()) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
    if (pairs.size() > 12) throw ResourceError("tree signature: too many atomic types");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
      Structure s(sig, n);
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if (mask >> i & 1) s.add(0, {pairs[i].first, pairs[i].second});
      out.push_back(atomic_diagram(s, all));
    }
  } else {
    const std::size_t atoms = AtomicType::atom_count(*sig, n);
    if (atoms > 12) throw ResourceError("tree signature: too many atomic types");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms); ++mask) {
      std::vector<bool> signs(atoms);
      for (std::size_t i = 0; i < atoms; ++i) signs[i] = mask >> i & 1;
      AtomicType t(sig, n, signs);
      if (atomic_diagram(t.model(), all) == t) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string level_rel(int n) { return "L" + std::to_string(n); }

}  // namespace

TreeSignature tree_signature(SignaturePtr base, int depth) {
  if (depth < 0) throw Error("tree signature: negative depth");
  TreeSignature ts;
  ts.base = base;
  ts.depth = depth;
  for (int n = 0; n <= depth; ++n) {
    auto ty = consistent_types(base, n);
    ts.types.insert(ts.types.end(), ty.begin(), ty.end());
    if (ts.types.size() > 4096) throw ResourceError("tree signature: more than 4096 atomic types");
  }
  std::vector<RelationSymbol> syms{{"P", 2}, {"Ext", 2}};
  for (int n = 0; n <= depth; ++n) syms.push_back({level_rel(n), 1});
  for (const auto& t : ts.types) syms.push_back({t.code(), 1});
  ts.sig = std::make_shared<const Signature>(std::move(syms));
  return ts;
}

Structure tree_structure(const LabeledTree& t, const TreeSignature& ts) {
  if (!(*t.signature_ptr() == *ts.base)) throw Error("tree structure: signature mismatch");
  if (t.depth() > ts.depth) throw Error("tree structure: tree deeper than the signature");
  Structure s(ts.sig, t.size());
  const std::size_t lv0 = *ts.sig->find("L0");
  for (int i = 0; i < t.size(); ++i) {
    const auto& n = t.node(i);
    if (n.level > ts.depth) throw Error("tree structure: node level beyond the signature");
    s.add(0, {i, n.parent});
    s.add(lv0 + n.level, {i});
    if (!n.label) throw Error("tree structure: unlabeled node");
    auto r = ts.sig->find(n.label->code());
    if (!r) throw Error("tree structure: label is not a consistent type");
    s.add(*r, {i});
    for (int a : t.path_to(i)) s.add(1, {a, i});
  }
  return s;
}

// ---------------------------------------------------------------- definable forcing

namespace {

Formula rel1(bool pos, const std::string& r, const std::string& v) { return atom(pos, r, {v}); }

class Translator {
 public:
  explicit Translator(const TreeSignature& ts) : ts_(ts) {}

  std::string fresh() { return "z" + std::to_string(++counter_); }

  // Disjunction of L_n(y) for n >= m.
  Formula level_ge(const std::string& y, int m) const {
    if (m <= 0) return qf_true();
    std::vector<Formula> ps;
    for (int n = m; n <= ts_.depth; ++n) ps.push_back(rel1(true, level_rel(n), y));
    return qfree(false, ps);
  }

  // Types with at least m variables satisfying (or failing) theta.
  std::vector<const AtomicType*> types_where(const Formula& theta, int m, bool value) const {
    std::vector<const AtomicType*> out;
    for (const auto& d : ts_.types) {
      if (d.vars() < m) continue;
      Assignment asg;
      for (const auto& v : free_vars(theta)) asg[v] = var_index(v) - 1;
      if (evaluate(d.model(), theta, asg) == value) out.push_back(&d);
    }
    return out;
  }

  Formula translate(const Formula& theta, const std::string& y, QFreeForm form) {
    const int m = max_free_index(theta);
    if (is_qf(theta)) {
      if (form == QFreeForm::Sigma1) {
        std::vector<Formula> ps;
        for (const auto* d : types_where(theta, m, true)) ps.push_back(rel1(true, d->code(), y));
        return disj({{{}, qfree(false, ps)}});
      }
      std::vector<Formula> ps;
      for (const auto* d : types_where(theta, m, false)) ps.push_back(rel1(false, d->code(), y));
      const std::string z = fresh();
      return and_merge({level_ge(y, m), forall_({z}, or_merge({atom(false, "Ext", {y, z}), qfree(true, ps)}))});
    }
    if (theta->kind == Kind::Or) {
      std::vector<Branch> bs;
      for (const auto& b : theta->branches) {
        any_assignment(static_cast<int>(b.vars.size()), ts_.depth, [&](const std::vector<int>& t) {
          Formula f = translate(instantiate(b, t), y, form);
          if (f->kind == Kind::Or) {
            for (const auto& fb : f->branches) bs.push_back(fb);
          } else {
            bs.push_back({{}, f});
          }
          return false;
        });
      }
      if (bs.empty()) return disj({{{}, qf_false()}});
      return disj(std::move(bs));
    }
    const std::string z = fresh();
    Formula inner = neg(translate(neg(theta), z, form));
    return and_merge({level_ge(y, m), forall_({z}, or_merge({atom(false, "Ext", {y, z}), inner}))});
  }

  // p (a conjunction of universal branches) or s (Sigma), keeping p's side.
  Formula or_pi(const Formula& p, const Formula& s) {
    if (p->kind != Kind::And) return or_merge({p, s});
    const auto avoid = free_vars(s);
    std::vector<Branch> bs;
    for (Branch b : p->branches) {
      std::map<std::string, std::string> ren;
      for (auto& v : b.vars)
        if (avoid.count(v)) {
          ren[v] = fresh();
          v = ren[v];
        }
      bs.push_back({b.vars, or_merge({rename_free(b.body, ren), s})});
    }
    return conj(std::move(bs));
  }

 private:
  const TreeSignature& ts_;
  int counter_ = 0;
};

}  // namespace

Formula force_formula(const Formula& theta, const TreeSignature& ts, QFreeForm form, const std::string& y) {
  max_free_index(theta);
  if (var_index(y) >= 1) throw Error("force_formula: the node variable must not be a tree variable");
  Translator tr(ts);
  return tr.translate(theta, y, form);
}

// ---------------------------------------------------------------- axioms

Formula emit_axioms(int alpha, const std::vector<Formula>& inventory, const std::optional<Formula>& scott,
                    const TreeSignature& ts, int width) {
  if (alpha < 2) throw Error("emit_axioms: alpha must be at least 2");
  if (width < 1) throw Error("emit_axioms: width must be positive");
  const int d = ts.depth;
  Translator tr(ts);
  std::vector<Formula> parts;
  auto L = [&](int n, const std::string& v, bool pos = true) { return rel1(pos, level_rel(n), v); };
  auto U = [&](const AtomicType& t, const std::string& v, bool pos = true) { return rel1(pos, t.code(), v); };
  auto P = [](const std::string& a, const std::string& b, bool pos = true) { return atom(pos, "P", {a, b}); };
  auto Ext = [](const std::string& a, const std::string& b, bool pos = true) { return atom(pos, "Ext", {a, b}); };
  auto eq = [](const std::string& a, const std::string& b, bool pos = true) { return atom(pos, "=", {a, b}); };
  auto exactly_one = [](const std::vector<Formula>& pos, const std::vector<Formula>& negs) {
    std::vector<Formula> ps{qfree(false, pos)};
    for (std::size_t i = 0; i < negs.size(); ++i)
      for (std::size_t j = i + 1; j < negs.size(); ++j) ps.push_back(qfree(false, {negs[i], negs[j]}));
    return qfree(true, ps);
  };

  // Levels: labels, levels and the parent function.
  {
    std::vector<Formula> up, un, lp, ln;
    for (const auto& t : ts.types) {
      up.push_back(U(t, "x"));
      un.push_back(U(t, "x", false));
    }
    for (int n = 0; n <= d; ++n) {
      lp.push_back(L(n, "x"));
      ln.push_back(L(n, "x", false));
    }
    std::vector<Formula> q{exactly_one(up, un), exactly_one(lp, ln), qfree(false, {L(0, "x", false), P("x", "x")}),
                           qfree(false, {L(0, "x"), P("x", "x", false)})};
    for (int n = 0; n <= d; ++n) {
      std::vector<Formula> ok{L(n, "x", false)};
      for (const auto& t : ts.types)
        if (t.vars() == n) ok.push_back(U(t, "x"));
      q.push_back(qfree(false, ok));
    }
    parts.push_back(forall_({"x"}, qfree(true, q)));

    std::vector<Formula> step{P("y", "x", false), eq("x", "y")};
    for (int n = 0; n < d; ++n) step.push_back(qfree(true, {L(n, "x"), L(n + 1, "y")}));
    parts.push_back(forall_({"x", "y"}, qfree(false, step)));
    parts.push_back(forall_({"y", "x", "w"}, qfree(false, {P("y", "x", false), P("y", "w", false), eq("x", "w")})));
    parts.push_back(forall_({"y"}, exists_({"x"}, P("y", "x"))));

    // Ext is the reflexive-transitive closure of the child relation.
    Formula back = or_merge({Ext("y", "z", false), eq("z", "y"),
                             exists_({"w"}, qfree(true, {P("z", "w"), eq("w", "z", false), Ext("y", "w")}))});
    Formula fwd = or_merge(
        {Ext("y", "z"), and_merge({eq("z", "y", false),
                                   forall_({"w"}, qfree(false, {P("z", "w", false), eq("w", "z"), Ext("y", "w", false)}))})});
    parts.push_back(forall_({"y", "z"}, and_merge({back, fwd})));
  }

  // Consistency: child labels extend parent labels.
  {
    std::vector<Formula> ok{P("y", "x", false), eq("x", "y")};
    for (const auto& a : ts.types)
      for (const auto& b : ts.types)
        if (b.vars() == a.vars() + 1 && b.restrict_to(a.vars()) == a) ok.push_back(qfree(true, {U(a, "x"), U(b, "y")}));
    parts.push_back(forall_({"x", "y"}, qfree(false, ok)));
  }

  // Replication: every child has width - 1 further siblings with its label.
  if (width > 1) {
    std::vector<std::string> sib;
    for (int i = 2; i <= width; ++i) sib.push_back("y" + std::to_string(i));
    std::vector<Formula> alts{P("y", "x", false), eq("x", "y")};
    for (const auto& t : ts.types) {
      if (t.vars() == 0) continue;
      std::vector<Formula> q{U(t, "y")};
      for (std::size_t i = 0; i < sib.size(); ++i) {
        q.push_back(P(sib[i], "x"));
        q.push_back(eq(sib[i], "x", false));
        q.push_back(eq(sib[i], "y", false));
        q.push_back(U(t, sib[i]));
        for (std::size_t j = 0; j < i; ++j) q.push_back(eq(sib[i], sib[j], false));
      }
      alts.push_back(exists_(sib, qfree(true, q)));
    }
    parts.push_back(forall_({"x", "y"}, or_merge(alts)));
  }

  // Agreement and permutation over the inventory.
  for (const auto& entry : inventory) {
    const Complexity c = classify(entry);
    if (c.rank >= alpha) throw Error("emit_axioms: inventory formula of rank " + std::to_string(c.rank) + " >= alpha");
    // Universal entries are instantiated through their existential negation.
    const Formula psi = entry->kind == Kind::And ? neg(entry) : entry;
    const int m = max_free_index(psi);
    if (m > d) continue;

    {
      const std::string s = tr.fresh(), t = tr.fresh(), t2 = tr.fresh();
      Formula some = exists_({t}, and_merge({Ext(s, t), tr.translate(psi, t, QFreeForm::Sigma1)}));
      Formula none = forall_({t2}, or_merge({Ext(s, t2, false), neg(tr.translate(neg(psi), t2, QFreeForm::Sigma1))}));
      parts.push_back(forall_({s}, or_merge({neg(tr.level_ge(s, m)), neg(some), none})));
    }

    const auto fv = free_vars(psi);
    if (fv.empty()) continue;
    std::string z;
    int rest = 0;
    for (const auto& v : fv)
      if (var_index(v) == m) z = v;
    for (const auto& v : fv)
      if (v != z) rest = std::max(rest, var_index(v));
    for (int n = rest; n < d; ++n) {
      const Formula next = rename_free(psi, {{z, var_name(n + 1)}});
      for (int k = n + 2; k <= d; ++k) {
        const Formula far = rename_free(psi, {{z, var_name(k)}});
        const std::string s = tr.fresh(), t = tr.fresh(), c1 = tr.fresh(), t2 = tr.fresh();
        Formula some = exists_({t}, and_merge({Ext(s, t), tr.translate(far, t, QFreeForm::Sigma1)}));
        Formula child = exists_({c1, t2}, and_merge({qfree(true, {P(c1, s), eq(c1, s, false), Ext(c1, t2)}),
                                                     tr.translate(next, t2, QFreeForm::Sigma1)}));
        Formula body = tr.or_pi(or_merge({L(n, s, false), neg(some)}), child);
        parts.push_back(forall_({s}, body));
      }
    }
  }

  if (scott) {
    if (!free_vars(*scott).empty()) throw Error("emit_axioms: the Scott sentence has free variables");
    const std::string r = tr.fresh(), t = tr.fresh();
    parts.push_back(forall_(
        {r, t}, or_merge({L(0, r, false), Ext(r, t, false), neg(tr.translate(neg(*scott), t, QFreeForm::Sigma1))})));
  }
  return and_merge(parts);
}

// ---------------------------------------------------------------- inventory

namespace {

// Signed atoms over the names, each mentioning `must` when it is nonempty.
std::vector<Formula> literals(const Signature& sig, const std::vector<std::string>& names, const std::string& must) {
  std::vector<Formula> out;
  auto mentions = [&](const std::vector<std::string>& args) {
    return must.empty() || std::find(args.begin(), args.end(), must) != args.end();
  };
  const int n = static_cast<int>(names.size());
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const int ar = sig[r].arity;
    std::vector<int> idx(ar, 0);
    if (n == 0) continue;
    while (true) {
      std::vector<std::string> args;
      for (int i : idx) args.push_back(names[i]);
      bool skip = sig.undirected_graph() && (args[0] == args[1] || idx[0] > idx[1]);
      if (!skip && mentions(args)) {
        out.push_back(atom(true, sig[r].name, args));
        out.push_back(atom(false, sig[r].name, args));
      }
      int i = ar - 1;
      while (i >= 0 && ++idx[i] == n) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (mentions({names[i], names[j]})) {
        out.push_back(atom(true, "=", {names[i], names[j]}));
        out.push_back(atom(false, "=", {names[i], names[j]}));
      }
  return out;
}

// Existential formulas in `free` with one bound variable u: every body is a
// conjunction of one or two literals mentioning u.
std::vector<Formula> sigma1_family(const Signature& sig, const std::vector<std::string>& free, const std::string& u,
                                   int max_width) {
  std::vector<std::string> names = free;
  names.push_back(u);
  auto lits = literals(sig, names, u);
  std::vector<Formula> bodies;
  for (const auto& l : lits) bodies.push_back(l);
  for (std::size_t i = 0; i < lits.size(); ++i)
    for (std::size_t j = i + 1; j < lits.size(); ++j) bodies.push_back(qfree(true, {lits[i], lits[j]}));
  std::vector<Formula> out;
  for (const auto& b : bodies) out.push_back(disj({{{u}, b}}));
  for (int w = 2; w <= max_width; ++w)
    for (std::size_t i = 0; i + w <= bodies.size(); i += w) {
      std::vector<Branch> bs;
      for (int k = 0; k < w; ++k) bs.push_back({{u}, bodies[i + k]});
      out.push_back(disj(std::move(bs)));
    }
  return out;
}

}  // namespace

std::vector<Formula> formula_inventory(SignaturePtr sig, int free_count, int max_rank, int max_width) {
  if (free_count < 0 || max_rank < 0 || max_width < 1) throw Error("formula_inventory: bad arguments");
  const auto free = var_names(1, free_count);
  std::vector<Formula> out;
  auto lits = literals(*sig, free, "");
  for (const auto& l : lits) out.push_back(l);
  for (std::size_t i = 0; i < lits.size(); ++i)
    for (std::size_t j = i + 1; j < lits.size(); ++j) {
      out.push_back(qfree(true, {lits[i], lits[j]}));
      out.push_back(qfree(false, {lits[i], lits[j]}));
    }
  if (max_rank >= 1) {
    for (const auto& f : sigma1_family(*sig, free, "u1", max_width)) {
      out.push_back(f);
      out.push_back(neg(f));
    }
  }
  if (max_rank >= 2) {
    std::vector<std::string> inner = free;
    inner.push_back("u2");
    const auto fam = sigma1_family(*sig, inner, "u1", max_width);
    for (std::size_t i = 0; i < fam.size(); i += 7) {
      Formula f = exists_({"u2"}, neg(fam[i]));
      out.push_back(f);
      out.push_back(neg(f));
    }
  }
  return out;
}

}  // namespace scottkit
