#include "scottkit/core.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace scottkit {

namespace {

constexpr std::size_t kMaxRelationCells = std::size_t{1} << 26;

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (b != 0 && r > kMaxRelationCells / b) throw ResourceError("relation table too large");
    r *= b;
  }
  return r;
}

}  // namespace

Signature::Signature(std::vector<RelationSymbol> symbols, bool undirected_graph)
    : symbols_(std::move(symbols)), undirected_(undirected_graph) {
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.name.empty()) throw Error("empty relation name");
    if (s.arity < 1) throw Error("relation " + s.name + " has arity < 1");
    if (!seen.insert(s.name).second) throw Error("duplicate relation " + s.name);
  }
  if (undirected_ && !(symbols_.size() == 1 && symbols_[0].arity == 2))
    throw Error("undirected graph signature must be a single binary symbol");
}

std::shared_ptr<const Signature> Signature::graph() {
  static const auto g = std::make_shared<const Signature>(std::vector<RelationSymbol>{{"E", 2}}, true);
  return g;
}

std::optional<std::size_t> Signature::find(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

std::string Signature::header() const {
  if (undirected_) return "graph";
  std::string out = "sig ";
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (i) out += ',';
    out += symbols_[i].name + ":" + std::to_string(symbols_[i].arity);
  }
  return out;
}

Structure::Structure(SignaturePtr sig, int size) : sig_(std::move(sig)), n_(size) {
  if (!sig_) throw Error("null signature");
  if (size < 0) throw Error("negative domain size");
  for (const auto& r : sig_->symbols()) bits_.emplace_back(ipow(static_cast<std::size_t>(n_), r.arity), 0);
}

std::size_t Structure::index(std::size_t rel, std::span<const int> args) const {
  if (rel >= sig_->size()) throw Error("relation index out of range");
  if (static_cast<int>(args.size()) != (*sig_)[rel].arity)
    throw Error("arity mismatch for " + (*sig_)[rel].name);
  std::size_t idx = 0;
  for (int a : args) {
    if (a < 0 || a >= n_) throw Error("element index out of range");
    idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(a);
  }
  return idx;
}

void Structure::add(std::size_t rel, std::span<const int> args) {
  bits_[rel][index(rel, args)] = 1;
  if (sig_->undirected_graph()) {
    if (args[0] == args[1]) throw Error("self-loop in undirected graph");
    int rev[2] = {args[1], args[0]};
    bits_[rel][index(rel, rev)] = 1;
  }
}

bool Structure::holds(std::size_t rel, std::span<const int> args) const {
  return bits_[rel][index(rel, args)] != 0;
}

std::vector<Tuple> Structure::facts(std::size_t rel) const {
  std::vector<Tuple> out;
  const int k = (*sig_)[rel].arity;
  const auto& b = bits_[rel];
  for (std::size_t idx = 0; idx < b.size(); ++idx) {
    if (!b[idx]) continue;
    Tuple t(k);
    std::size_t r = idx;
    for (int i = k - 1; i >= 0; --i) {
      t[i] = static_cast<int>(r % static_cast<std::size_t>(n_));
      r /= static_cast<std::size_t>(n_);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::size_t Structure::fact_count() const {
  std::size_t c = 0;
  for (const auto& b : bits_) c += static_cast<std::size_t>(std::count(b.begin(), b.end(), 1));
  return c;
}

int Structure::degree(int v) const {
  int d = 0;
  for (int u = 0; u < n_; ++u)
    if (u != v && edge(v, u)) ++d;
  return d;
}

Structure Structure::induced(std::span<const int> elems) const {
  Structure out(sig_, static_cast<int>(elems.size()));
  std::vector<int> pos(n_, -1);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (pos[elems[i]] != -1) throw Error("repeated element in induced substructure");
    pos[elems[i]] = static_cast<int>(i);
  }
  for (std::size_t r = 0; r < sig_->size(); ++r) {
    for (const auto& f : facts(r)) {
      Tuple g(f.size());
      bool inside = true;
      for (std::size_t i = 0; i < f.size() && inside; ++i) {
        g[i] = pos[f[i]];
        inside = g[i] >= 0;
      }
      if (inside) out.bits_[r][out.index(r, g)] = 1;
    }
  }
  return out;
}

bool Structure::operator==(const Structure& o) const {
  return n_ == o.n_ && sig_->symbols() == o.sig_->symbols() && bits_ == o.bits_;
}

// ---------------------------------------------------------------- AtomicType

std::size_t AtomicType::atom_count(const Signature& sig, int vars) {
  std::size_t c = 0;
  for (const auto& r : sig.symbols()) c += ipow(static_cast<std::size_t>(vars), r.arity);
  return c;
}

AtomicType::AtomicType(SignaturePtr sig, int vars, std::vector<bool> signs)
    : sig_(std::move(sig)), n_(vars), signs_(std::move(signs)) {
  if (!sig_) throw Error("null signature");
  if (signs_.size() != atom_count(*sig_, n_)) throw Error("atomic type has wrong number of atoms");
}

bool AtomicType::same_signature(const AtomicType& o) const {
  if (sig_ == o.sig_) return true;
  if (!sig_ || !o.sig_) return false;
  return sig_->symbols() == o.sig_->symbols();
}

bool AtomicType::holds(std::size_t rel, std::span<const int> positions) const {
  std::size_t off = 0;
  for (std::size_t r = 0; r < rel; ++r) off += ipow(static_cast<std::size_t>(n_), (*sig_)[r].arity);
  if (static_cast<int>(positions.size()) != (*sig_)[rel].arity) throw Error("arity mismatch");
  std::size_t idx = 0;
  for (int p : positions) {
    if (p < 0 || p >= n_) throw Error("variable index out of range");
    idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(p);
  }
  return signs_[off + idx];
}

AtomicType AtomicType::select(std::span<const int> positions) const {
  const int k = static_cast<int>(positions.size());
  std::vector<bool> out;
  out.reserve(atom_count(*sig_, k));
  for (std::size_t r = 0; r < sig_->size(); ++r) {
    const int ar = (*sig_)[r].arity;
    std::vector<int> idx(ar, 0), mapped(ar);
    const std::size_t total = ipow(static_cast<std::size_t>(k), ar);
    for (std::size_t c = 0; c < total; ++c) {
      for (int i = 0; i < ar; ++i) mapped[i] = positions[idx[i]];
      out.push_back(holds(r, mapped));
      for (int i = ar - 1; i >= 0; --i) {
        if (++idx[i] < k) break;
        idx[i] = 0;
      }
    }
  }
  return AtomicType(sig_, k, std::move(out));
}

AtomicType AtomicType::restrict_to(int k) const {
  if (k < 0 || k > n_) throw Error("restriction beyond variable count");
  std::vector<int> pos(k);
  for (int i = 0; i < k; ++i) pos[i] = i;
  return select(pos);
}

Structure AtomicType::model() const {
  SignaturePtr sig = sig_;
  if (sig->undirected_graph()) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (holds(0, std::vector<int>{i, j}) != holds(0, std::vector<int>{j, i}) ||
            (i == j && holds(0, std::vector<int>{i, i})))
          sig = std::make_shared<const Signature>(sig_->symbols(), false);
  }
  Structure s(sig, n_);
  std::size_t off = 0;
  for (std::size_t r = 0; r < sig->size(); ++r) {
    const int ar = (*sig)[r].arity;
    const std::size_t total = ipow(static_cast<std::size_t>(n_), ar);
    for (std::size_t c = 0; c < total; ++c) {
      if (!signs_[off + c]) continue;
      Tuple t(ar);
      std::size_t rem = c;
      for (int i = ar - 1; i >= 0; --i) {
        t[i] = static_cast<int>(rem % static_cast<std::size_t>(n_));
        rem /= static_cast<std::size_t>(n_);
      }
      s.add(r, t);
    }
    off += total;
  }
  return s;
}

std::string AtomicType::code() const {
  std::string s = "D" + std::to_string(n_) + "_";
  for (bool b : signs_) s += b ? '1' : '0';
  return s;
}

void check_tuple(const Structure& s, std::span<const int> a) {
  if (static_cast<int>(a.size()) > s.size()) throw Error("tuple longer than domain");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || a[i] >= s.size()) throw Error("tuple entry out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (a[i] == a[j]) throw Error("repeated entry in tuple");
  }
}

AtomicType atomic_diagram(const Structure& s, std::span<const int> a) {
  check_tuple(s, a);
  const int k = static_cast<int>(a.size());
  std::vector<bool> out;
  out.reserve(AtomicType::atom_count(s.signature(), k));
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    const int ar = s.signature()[r].arity;
    std::vector<int> idx(ar, 0), mapped(ar);
    const std::size_t total = ipow(static_cast<std::size_t>(k), ar);
    for (std::size_t c = 0; c < total; ++c) {
      for (int i = 0; i < ar; ++i) mapped[i] = a[idx[i]];
      out.push_back(s.holds(r, mapped));
      for (int i = ar - 1; i >= 0; --i) {
        if (++idx[i] < k) break;
        idx[i] = 0;
      }
    }
  }
  return AtomicType(s.signature_ptr(), k, std::move(out));
}

// ---------------------------------------------------------------- file format

namespace {

std::string strip(std::string_view v) {
  std::string out;
  for (char c : v)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::string s = strip(cur);
    if (!s.empty() && s[0] != '#') out.push_back(s);
    cur.clear();
  };
  for (char c : text) {
    if (c == '\n' || c == ';')
      flush();
    else
      cur += c;
  }
  flush();
  return out;
}

int parse_int(const std::string& s, std::size_t& pos) {
  std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (start == pos) throw ParseError("expected integer in '" + s + "'");
  if (pos - start > 9) throw ParseError("integer too large in '" + s + "'");
  return std::stoi(s.substr(start, pos - start));
}

void expect(const std::string& s, std::size_t& pos, char c) {
  if (pos >= s.size() || s[pos] != c) throw ParseError(std::string("expected '") + c + "' in '" + s + "'");
  ++pos;
}

}  // namespace

SignaturePtr parse_signature(std::string_view header) {
  const std::string line = strip(header);
  if (line == "graph") return Signature::graph();
  if (line.rfind("sig", 0) != 0) throw ParseError("signature must be 'graph' or 'sig ...'");
  std::vector<RelationSymbol> syms;
  std::stringstream ss(line.substr(3));
  std::string item;
  std::set<std::string> names;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos || colon == 0) throw ParseError("bad signature entry '" + item + "'");
    std::size_t p = colon + 1;
    int ar = parse_int(item, p);
    if (p != item.size()) throw ParseError("bad signature entry '" + item + "'");
    std::string name = item.substr(0, colon);
    if (!names.insert(name).second) throw ParseError("duplicate relation declaration " + name);
    if (ar < 1) throw ParseError("arity must be positive for " + name);
    syms.push_back({name, ar});
  }
  return std::make_shared<const Signature>(std::move(syms));
}

Structure parse_structure(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty structure file");
  SignaturePtr sig = parse_signature(lines[0]);
  if (lines.size() < 2 || lines[1].rfind("n=", 0) != 0) throw ParseError("second line must be n=<int>");
  std::size_t p = 2;
  int n = parse_int(lines[1], p);
  if (p != lines[1].size()) throw ParseError("bad domain size line");

  std::vector<std::vector<Tuple>> rels(sig->size());
  std::vector<bool> declared(sig->size(), false);
  for (std::size_t li = 2; li < lines.size(); ++li) {
    const std::string& l = lines[li];
    auto eq = l.find('=');
    if (eq == std::string::npos) throw ParseError("expected <Rel>={...} in '" + l + "'");
    std::string name = l.substr(0, eq);
    auto r = sig->find(name);
    if (!r) throw ParseError("unknown relation " + name);
    if (declared[*r]) throw ParseError("duplicate relation declaration " + name);
    declared[*r] = true;
    const int ar = (*sig)[*r].arity;
    std::size_t q = eq + 1;
    expect(l, q, '{');
    if (q < l.size() && l[q] == '}') {
      ++q;
    } else {
      while (true) {
        expect(l, q, '(');
        Tuple t;
        while (true) {
          t.push_back(parse_int(l, q));
          if (q < l.size() && l[q] == ',') {
            ++q;
            continue;
          }
          break;
        }
        expect(l, q, ')');
        if (static_cast<int>(t.size()) != ar)
          throw ParseError("arity mismatch for " + name + ": expected " + std::to_string(ar));
        for (int x : t)
          if (x >= n) throw ParseError("index out of range: " + std::to_string(x) + " >= n=" + std::to_string(n));
        rels[*r].push_back(std::move(t));
        if (q < l.size() && l[q] == ',') {
          ++q;
          continue;
        }
        break;
      }
      expect(l, q, '}');
    }
    if (q != l.size()) throw ParseError("trailing characters in '" + l + "'");
  }
  if (sig->undirected_graph()) {
    std::set<Tuple> es(rels[0].begin(), rels[0].end());
    for (const auto& e : es) {
      if (e[0] == e[1]) throw ParseError("graph has a self-loop at " + std::to_string(e[0]));
      if (!es.count(Tuple{e[1], e[0]}))
        throw ParseError("graph edge (" + std::to_string(e[0]) + "," + std::to_string(e[1]) + ") is not symmetric");
    }
  }
  Structure s(sig, n);
  for (std::size_t r = 0; r < rels.size(); ++r)
    for (const auto& t : rels[r]) s.add(r, t);
  return s;
}

std::string format_structure(const Structure& s) {
  std::ostringstream out;
  out << s.signature().header() << "\n";
  out << "n=" << s.size() << "\n";
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    out << s.signature()[r].name << "={";
    bool first = true;
    for (const auto& t : s.facts(r)) {
      if (!first) out << ',';
      first = false;
      out << '(';
      for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << t[i];
      out << ')';
    }
    out << "}\n";
  }
  return out.str();
}

Structure load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_structure(ss.str());
}

// ---------------------------------------------------------------- named graphs

Structure make_graph(int n, std::initializer_list<std::pair<int, int>> edges) {
  Structure g(Signature::graph(), n);
  for (auto [u, v] : edges) g.add(0, {u, v});
  return g;
}

Structure complete_graph(int n) {
  Structure g(Signature::graph(), n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add(0, {u, v});
  return g;
}

Structure empty_graph(int n) { return Structure(Signature::graph(), n); }

Structure path_graph(int n) {
  Structure g(Signature::graph(), n);
  for (int v = 0; v + 1 < n; ++v) g.add(0, {v, v + 1});
  return g;
}

Structure star_union(std::initializer_list<int> leaves) {
  int n = 0;
  for (int l : leaves) n += l + 1;
  Structure g(Signature::graph(), n);
  int base = 0;
  for (int l : leaves) {
    for (int i = 1; i <= l; ++i) g.add(0, {base, base + i});
    base += l + 1;
  }
  return g;
}

std::vector<Tuple> distinct_tuples(int n, int k) {
  std::vector<Tuple> out;
  if (k > n || k < 0) return out;
  Tuple cur;
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == k) {
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

}  // namespace scottkit
