#include <algorithm>
#include <cctype>
#include <sstream>

#include "scottkit/formula.hpp"

namespace scottkit {

using Kind = FormulaNode::Kind;

Formula atom(bool positive, std::string rel, std::vector<std::string> args) {
  if (rel.empty()) throw Error("atom without relation");
  if (rel == "=" && args.size() != 2) throw Error("equality atom needs two arguments");
  auto n = std::make_shared<FormulaNode>();
  n->kind = Kind::Atom;
  n->positive = positive;
  n->rel = std::move(rel);
  n->args = std::move(args);
  return n;
}

Formula qfree(bool conjunction, std::vector<Formula> parts) {
  for (const auto& p : parts)
    if (p->kind != Kind::Atom && p->kind != Kind::QFree) throw Error("qfree part must be quantifier-free");
  auto n = std::make_shared<FormulaNode>();
  n->kind = Kind::QFree;
  n->conjunction = conjunction;
  n->parts = std::move(parts);
  return n;
}

Formula qf_true() { return qfree(true, {}); }
Formula qf_false() { return qfree(false, {}); }

namespace {

Formula make_block(Kind k, std::vector<Branch> branches) {
  if (branches.empty()) throw Error("connective needs at least one branch");
  for (const auto& b : branches)
    if (!b.body) throw Error("branch without body");
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->branches = std::move(branches);
  return n;
}

bool is_qf(const Formula& f) { return f->kind == Kind::Atom || f->kind == Kind::QFree; }

}  // namespace

Formula disj(std::vector<Branch> branches) { return make_block(Kind::Or, std::move(branches)); }
Formula conj(std::vector<Branch> branches) { return make_block(Kind::And, std::move(branches)); }

Complexity classify(const Formula& f) {
  if (is_qf(f)) return {Side::Sigma, 0};
  const Side side = f->kind == Kind::Or ? Side::Sigma : Side::Pi;
  int r = 1;
  for (const auto& b : f->branches) {
    Complexity c = classify(b.body);
    int contrib = c.rank == 0 ? 1 : (c.side == side ? c.rank : c.rank + 1);
    r = std::max(r, contrib);
  }
  return {side, r};
}

std::string complexity_name(const Complexity& c) {
  if (c.rank == 0) return "QF";
  return std::string(c.side == Side::Sigma ? "Sigma_" : "Pi_") + std::to_string(c.rank);
}

Formula neg(const Formula& f) {
  switch (f->kind) {
    case Kind::Atom:
      return atom(!f->positive, f->rel, f->args);
    case Kind::QFree: {
      std::vector<Formula> ps;
      for (const auto& p : f->parts) ps.push_back(neg(p));
      return qfree(!f->conjunction, std::move(ps));
    }
    case Kind::Or:
    case Kind::And: {
      std::vector<Branch> bs;
      for (const auto& b : f->branches) bs.push_back({b.vars, neg(b.body)});
      return f->kind == Kind::Or ? conj(std::move(bs)) : disj(std::move(bs));
    }
  }
  throw Error("unreachable");
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Atom:
      return a->positive == b->positive && a->rel == b->rel && a->args == b->args;
    case Kind::QFree:
      if (a->conjunction != b->conjunction || a->parts.size() != b->parts.size()) return false;
      for (std::size_t i = 0; i < a->parts.size(); ++i)
        if (!structurally_equal(a->parts[i], b->parts[i])) return false;
      return true;
    default:
      if (a->branches.size() != b->branches.size()) return false;
      for (std::size_t i = 0; i < a->branches.size(); ++i)
        if (a->branches[i].vars != b->branches[i].vars ||
            !structurally_equal(a->branches[i].body, b->branches[i].body))
          return false;
      return true;
  }
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f->kind) {
    case Kind::Atom:
      for (const auto& v : f->args)
        if (!bound.count(v)) out.insert(v);
      return;
    case Kind::QFree:
      for (const auto& p : f->parts) collect_free(p, bound, out);
      return;
    default:
      for (const auto& b : f->branches) {
        std::set<std::string> inner = bound;
        inner.insert(b.vars.begin(), b.vars.end());
        collect_free(b.body, inner, out);
      }
  }
}

void collect_names(const Formula& f, std::set<std::string>& out) {
  switch (f->kind) {
    case Kind::Atom:
      out.insert(f->args.begin(), f->args.end());
      return;
    case Kind::QFree:
      for (const auto& p : f->parts) collect_names(p, out);
      return;
    default:
      for (const auto& b : f->branches) {
        out.insert(b.vars.begin(), b.vars.end());
        collect_names(b.body, out);
      }
  }
}

std::string fresh_name(const std::string& base, std::set<std::string>& used) {
  for (int k = 1;; ++k) {
    std::string cand = base + "_" + std::to_string(k);
    if (!used.count(cand)) {
      used.insert(cand);
      return cand;
    }
  }
}

// Renames the block variables of a branch that clash with `avoid`.
Branch freshen(const Branch& b, std::set<std::string>& avoid) {
  std::map<std::string, std::string> m;
  Branch out{b.vars, b.body};
  for (auto& v : out.vars) {
    if (avoid.count(v)) {
      std::string nv = fresh_name(v, avoid);
      m[v] = nv;
      v = nv;
    } else {
      avoid.insert(v);
    }
  }
  if (!m.empty()) out.body = rename_free(b.body, m);
  return out;
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

Formula rename_free(const Formula& f, const std::map<std::string, std::string>& m) {
  if (m.empty()) return f;
  switch (f->kind) {
    case Kind::Atom: {
      std::vector<std::string> args = f->args;
      for (auto& a : args)
        if (auto it = m.find(a); it != m.end()) a = it->second;
      return atom(f->positive, f->rel, std::move(args));
    }
    case Kind::QFree: {
      std::vector<Formula> ps;
      for (const auto& p : f->parts) ps.push_back(rename_free(p, m));
      return qfree(f->conjunction, std::move(ps));
    }
    default: {
      // Targets of the renaming must not be captured by a block.
      std::set<std::string> targets;
      for (const auto& [k, v] : m) targets.insert(v);
      std::vector<Branch> bs;
      for (const auto& b0 : f->branches) {
        Branch b = b0;
        bool captures = false;
        for (const auto& v : b.vars) captures = captures || targets.count(v);
        if (captures) {
          std::set<std::string> avoid = targets;
          collect_names(b.body, avoid);
          for (const auto& [k, v] : m) avoid.insert(k);
          std::map<std::string, std::string> inner;
          for (auto& v : b.vars)
            if (targets.count(v)) {
              std::string nv = fresh_name(v, avoid);
              inner[v] = nv;
              v = nv;
            }
          b.body = rename_free(b.body, inner);
        }
        std::map<std::string, std::string> sub;
        for (const auto& [k, v] : m)
          if (std::find(b.vars.begin(), b.vars.end(), k) == b.vars.end()) sub[k] = v;
        bs.push_back({b.vars, rename_free(b.body, sub)});
      }
      return f->kind == Kind::Or ? disj(std::move(bs)) : conj(std::move(bs));
    }
  }
}

// ---------------------------------------------------------------- combinators

namespace {

// Product of branch lists: block variables are concatenated, bodies combined.
std::vector<Branch> product(const std::vector<std::vector<Branch>>& groups, std::set<std::string> avoid,
                            Formula (*combine)(const std::vector<Formula>&)) {
  std::vector<Branch> out;
  std::vector<std::size_t> idx(groups.size(), 0);
  while (true) {
    std::set<std::string> used = avoid;
    std::vector<std::string> vars;
    std::vector<Formula> bodies;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      Branch b = freshen(groups[g][idx[g]], used);
      vars.insert(vars.end(), b.vars.begin(), b.vars.end());
      bodies.push_back(b.body);
    }
    out.push_back({vars, combine(bodies)});
    std::size_t g = groups.size();
    while (g > 0) {
      --g;
      if (++idx[g] < groups[g].size()) break;
      idx[g] = 0;
      if (g == 0) return out;
    }
    if (groups.empty()) return out;
  }
}

Formula merge(const std::vector<Formula>& fs, bool is_or) {
  if (fs.empty()) return is_or ? qf_false() : qf_true();
  if (fs.size() == 1) return fs[0];
  const Kind same = is_or ? Kind::Or : Kind::And;
  const Kind dual = is_or ? Kind::And : Kind::Or;
  std::vector<Formula> qf;
  bool any_same = false, any_dual = false;
  for (const auto& f : fs) {
    if (is_qf(f)) qf.push_back(f);
    any_same = any_same || f->kind == same;
    any_dual = any_dual || f->kind == dual;
  }
  if (!any_same && !any_dual) return qfree(!is_or, fs);

  std::set<std::string> avoid;
  for (const auto& f : fs)
    for (const auto& v : free_vars(f)) avoid.insert(v);

  if (!any_same) {
    // All quantified parts are of the dual kind: distribute to stay on the dual side.
    std::vector<std::vector<Branch>> groups;
    for (const auto& f : fs)
      if (!is_qf(f)) groups.push_back(f->branches);
    Formula rest = qf.empty() ? nullptr : (qf.size() == 1 ? qf[0] : qfree(!is_or, qf));
    auto combine = is_or ? +[](const std::vector<Formula>& b) { return or_merge(b); }
                         : +[](const std::vector<Formula>& b) { return and_merge(b); };
    auto bs = product(groups, avoid, combine);
    if (rest)
      for (auto& b : bs) b.body = merge({rest, b.body}, is_or);
    return dual == Kind::And ? conj(std::move(bs)) : disj(std::move(bs));
  }

  std::vector<Branch> bs;
  for (const auto& f : fs) {
    if (f->kind == same) {
      for (const auto& b : f->branches) bs.push_back(b);
    } else if (!is_qf(f)) {
      bs.push_back({{}, f});
    }
  }
  if (!qf.empty()) bs.push_back({{}, qf.size() == 1 ? qf[0] : qfree(!is_or, qf)});
  return is_or ? disj(std::move(bs)) : conj(std::move(bs));
}

Formula quantify(std::vector<std::string> vars, const Formula& f, bool exists) {
  if (vars.empty()) return f;
  const Kind k = exists ? Kind::Or : Kind::And;
  std::set<std::string> outer(vars.begin(), vars.end());
  if (f->kind == k) {
    std::vector<Branch> bs;
    for (const auto& b : f->branches) {
      std::set<std::string> avoid = outer;
      for (const auto& v : free_vars(b.body)) avoid.insert(v);
      for (const auto& v : b.vars) avoid.erase(v);
      Branch nb = freshen(b, avoid);
      std::vector<std::string> all = vars;
      all.insert(all.end(), nb.vars.begin(), nb.vars.end());
      bs.push_back({all, nb.body});
    }
    return exists ? disj(std::move(bs)) : conj(std::move(bs));
  }
  return exists ? disj({{vars, f}}) : conj({{vars, f}});
}

}  // namespace

Formula or_merge(const std::vector<Formula>& fs) { return merge(fs, true); }
Formula and_merge(const std::vector<Formula>& fs) { return merge(fs, false); }
Formula exists_(std::vector<std::string> vars, const Formula& f) { return quantify(std::move(vars), f, true); }
Formula forall_(std::vector<std::string> vars, const Formula& f) { return quantify(std::move(vars), f, false); }

// ---------------------------------------------------------------- s-expressions

namespace {

void print(const Formula& f, std::string& out) {
  switch (f->kind) {
    case Kind::Atom:
      out += "(atom ";
      out += f->positive ? '+' : '-';
      out += ' ';
      out += f->rel;
      for (const auto& a : f->args) out += ' ' + a;
      out += ')';
      return;
    case Kind::QFree:
      out += f->conjunction ? "(qfree and" : "(qfree or";
      for (const auto& p : f->parts) {
        out += ' ';
        print(p, out);
      }
      out += ')';
      return;
    default: {
      const bool ex = f->kind == Kind::Or;
      out += ex ? "(or" : "(and";
      for (const auto& b : f->branches) {
        out += ex ? " (exists (" : " (forall (";
        for (std::size_t i = 0; i < b.vars.size(); ++i) out += (i ? " " : "") + b.vars[i];
        out += ") ";
        print(b.body, out);
        out += ')';
      }
      out += ')';
    }
  }
}

struct Lexer {
  std::string_view s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool at_end() {
    skip();
    return pos >= s.size();
  }
  char peek() {
    skip();
    if (pos >= s.size()) throw ParseError("unexpected end of formula");
    return s[pos];
  }
  void open() {
    if (peek() != '(') throw ParseError("expected '(' at offset " + std::to_string(pos));
    ++pos;
  }
  void close() {
    if (peek() != ')') throw ParseError("expected ')' at offset " + std::to_string(pos));
    ++pos;
  }
  std::string word() {
    skip();
    std::size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' && s[pos] != ')')
      ++pos;
    if (start == pos) throw ParseError("expected a word at offset " + std::to_string(pos));
    return std::string(s.substr(start, pos - start));
  }
};

Formula parse(Lexer& lx) {
  lx.open();
  std::string head = lx.word();
  if (head == "atom") {
    std::string sign = lx.word();
    if (sign != "+" && sign != "-") throw ParseError("atom sign must be + or -");
    std::string rel = lx.word();
    std::vector<std::string> args;
    while (lx.peek() != ')') args.push_back(lx.word());
    lx.close();
    try {
      return atom(sign == "+", rel, std::move(args));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
  }
  if (head == "qfree") {
    std::string op = lx.word();
    if (op != "and" && op != "or") throw ParseError("qfree connective must be and/or");
    std::vector<Formula> parts;
    while (lx.peek() != ')') {
      Formula p = parse(lx);
      if (!is_qf(p)) throw ParseError("qfree part must be quantifier-free");
      parts.push_back(p);
    }
    lx.close();
    return qfree(op == "and", std::move(parts));
  }
  if (head == "or" || head == "and") {
    const std::string q = head == "or" ? "exists" : "forall";
    std::vector<Branch> bs;
    while (lx.peek() != ')') {
      lx.open();
      if (lx.word() != q) throw ParseError("expected (" + q + " ...) branch");
      lx.open();
      std::vector<std::string> vars;
      while (lx.peek() != ')') vars.push_back(lx.word());
      lx.close();
      Formula body = parse(lx);
      lx.close();
      bs.push_back({std::move(vars), body});
    }
    lx.close();
    if (bs.empty()) throw ParseError("(" + head + ") needs at least one branch");
    return head == "or" ? disj(std::move(bs)) : conj(std::move(bs));
  }
  throw ParseError("unknown formula head '" + head + "'");
}

}  // namespace

std::string to_sexpr(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

Formula parse_formula(std::string_view text) {
  Lexer lx{text};
  Formula f = parse(lx);
  if (!lx.at_end()) throw ParseError("trailing text after formula");
  return f;
}

// ---------------------------------------------------------------- evaluation

namespace {

bool eval(const Structure& s, const Formula& f, Assignment& asg) {
  switch (f->kind) {
    case Kind::Atom: {
      std::vector<int> vals;
      for (const auto& a : f->args) {
        auto it = asg.find(a);
        if (it == asg.end()) throw Error("unbound free variable " + a);
        vals.push_back(it->second);
      }
      bool v;
      if (f->rel == "=") {
        v = vals[0] == vals[1];
      } else {
        auto r = s.signature().find(f->rel);
        if (!r) throw Error("unknown relation " + f->rel);
        if (static_cast<int>(vals.size()) != s.signature()[*r].arity) throw Error("arity mismatch for " + f->rel);
        v = s.holds(*r, vals);
      }
      return v == f->positive;
    }
    case Kind::QFree:
      for (const auto& p : f->parts)
        if (eval(s, p, asg) != f->conjunction) return !f->conjunction;
      return f->conjunction;
    default: {
      const bool ex = f->kind == Kind::Or;
      for (const auto& b : f->branches) {
        // iterate over all assignments of the block
        std::vector<std::optional<int>> saved;
        for (const auto& v : b.vars) {
          auto it = asg.find(v);
          saved.push_back(it == asg.end() ? std::nullopt : std::optional<int>(it->second));
        }
        const std::size_t k = b.vars.size();
        std::vector<int> idx(k, 0);
        bool result = !ex;  // value of the branch
        bool empty_domain = k > 0 && s.size() == 0;
        if (!empty_domain) {
          while (true) {
            for (std::size_t i = 0; i < k; ++i) asg[b.vars[i]] = idx[i];
            bool v = eval(s, b.body, asg);
            if (v == ex) {
              result = ex;
              break;
            }
            std::size_t i = k;
            bool done = true;
            while (i > 0) {
              --i;
              if (++idx[i] < s.size()) {
                done = false;
                break;
              }
              idx[i] = 0;
            }
            if (done) break;
          }
        }
        for (std::size_t i = k; i > 0; --i) {
          if (saved[i - 1])
            asg[b.vars[i - 1]] = *saved[i - 1];
          else
            asg.erase(b.vars[i - 1]);
        }
        if (result == ex) return ex;
      }
      return !ex;
    }
  }
}

}  // namespace

bool evaluate(const Structure& s, const Formula& f, const Assignment& asg) {
  Assignment a = asg;
  return eval(s, f, a);
}

// ---------------------------------------------------------------- names and types

std::string var_name(int i) { return "x" + std::to_string(i); }

std::vector<std::string> var_names(int from, int to) {
  std::vector<std::string> out;
  for (int i = from; i <= to; ++i) out.push_back(var_name(i));
  return out;
}

int var_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'x' || name[1] == '0') return -1;
  int v = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
    if (v > 100000) return -1;
    v = v * 10 + (name[i] - '0');
  }
  return v;
}

Formula type_formula(const AtomicType& t) { return type_formula(t, var_names(1, t.vars())); }

Formula type_formula(const AtomicType& t, const std::vector<std::string>& names) {
  const int n = t.vars();
  if (static_cast<int>(names.size()) != n) throw Error("type_formula: wrong number of names");
  std::vector<Formula> parts;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) parts.push_back(atom(false, "=", {names[i], names[j]}));
  const Signature& sig = *t.signature_ptr();
  std::size_t k = 0;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const int ar = sig[r].arity;
    if (n == 0) continue;
    std::vector<int> idx(ar, 0);
    while (true) {
      std::vector<std::string> args;
      for (int x : idx) args.push_back(names[x]);
      parts.push_back(atom(t.signs()[k++], sig[r].name, std::move(args)));
      int i = ar - 1;
      while (i >= 0 && ++idx[i] == n) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  return qfree(true, std::move(parts));
}

AtomicType type_from_formula(const Formula& f, SignaturePtr sig, int vars) {
  std::vector<Formula> atoms;
  if (f->kind == Kind::Atom) {
    atoms.push_back(f);
  } else if (f->kind == Kind::QFree && f->conjunction) {
    for (const auto& p : f->parts) {
      if (p->kind != Kind::Atom) throw ParseError("label must be a conjunction of atoms");
      atoms.push_back(p);
    }
  } else {
    throw ParseError("label must be (qfree and ...)");
  }
  int n = 0;
  for (const auto& a : atoms)
    for (const auto& v : a->args) {
      int i = var_index(v);
      if (i < 1) throw ParseError("label variable '" + v + "' is not of the form x<k>");
      n = std::max(n, i);
    }
  if (vars >= 0) {
    if (n > vars) throw ParseError("label mentions a variable beyond x" + std::to_string(vars));
    n = vars;
  }
  std::vector<int> sign(AtomicType::atom_count(*sig, n), -1);
  std::vector<std::size_t> offset;
  std::size_t off = 0;
  for (const auto& r : sig->symbols()) {
    offset.push_back(off);
    std::size_t c = 1;
    for (int i = 0; i < r.arity; ++i) c *= static_cast<std::size_t>(n);
    off += c;
  }
  for (const auto& a : atoms) {
    if (a->rel == "=") {
      bool same = a->args[0] == a->args[1];
      if (a->positive != same) throw ParseError("label asserts an equality between distinct variables");
      continue;
    }
    auto r = sig->find(a->rel);
    if (!r) throw ParseError("label uses unknown relation " + a->rel);
    if (static_cast<int>(a->args.size()) != (*sig)[*r].arity) throw ParseError("label arity mismatch for " + a->rel);
    std::size_t idx = 0;
    for (const auto& v : a->args) idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(var_index(v) - 1);
    int s = a->positive ? 1 : 0;
    int& slot = sign[offset[*r] + idx];
    if (slot != -1 && slot != s) throw ParseError("label is contradictory");
    slot = s;
  }
  std::vector<bool> bits;
  for (int s : sign) {
    if (s < 0) throw ParseError("label is not a complete atomic type");
    bits.push_back(s == 1);
  }
  return AtomicType(sig, n, std::move(bits));
}

std::size_t formula_size(const Formula& f) {
  std::size_t c = 1;
  for (const auto& p : f->parts) c += formula_size(p);
  for (const auto& b : f->branches) c += formula_size(b.body);
  return c;
}

}  // namespace scottkit
