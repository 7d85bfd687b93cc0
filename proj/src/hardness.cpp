#include "scottkit/hardness.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <tuple>

#include "scottkit/backforth.hpp"
#include "scottkit/scott.hpp"

namespace scottkit {

// ---------------------------------------------------------------- enumerated sets

namespace {

std::vector<int> parse_list(std::string_view s, char sep) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = s.find(sep, pos);
    const std::string item(s.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos || item.size() > 6)
      throw ParseError("enumerated set: bad number '" + item + "'");
    out.push_back(std::stoi(item));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string join(const std::vector<int>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
  return s;
}

bool has(const std::vector<int>& v, int k) { return std::binary_search(v.begin(), v.end(), k); }

}  // namespace

EnumeratedSet EnumeratedSet::parse(std::string_view text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  const auto colon = t.find(':');
  if (colon == std::string::npos) throw ParseError("enumerated set: expected <kind>:<description>");
  const std::string kind = t.substr(0, colon);
  const std::string_view body = std::string_view(t).substr(colon + 1);
  EnumeratedSet w;
  if (kind == "finite" || kind == "cofinite") {
    w.kind = kind == "finite" ? Kind::Finite : Kind::Cofinite;
    w.list = parse_list(body, ',');
    return w;
  }
  if (kind != "periodic") throw ParseError("enumerated set: unknown kind '" + kind + "'");
  w.kind = Kind::Periodic;
  bool seen_m = false, seen_r = false;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t end = std::min(body.find(',', pos), body.size());
    const std::string_view item = body.substr(pos, end - pos);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("enumerated set: expected key=value in periodic set");
    const std::string_view key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "m") {
      auto v = parse_list(val, '/');
      if (v.size() != 1 || v[0] < 1) throw ParseError("enumerated set: modulus must be a positive number");
      w.modulus = v[0];
      seen_m = true;
    } else if (key == "r") {
      w.residues = parse_list(val, '/');
      seen_r = true;
    } else if (key == "t") {
      auto v = parse_list(val, '/');
      if (v.size() != 1) throw ParseError("enumerated set: bad threshold");
      w.threshold = v[0];
    } else if (key == "h") {
      w.head = parse_list(val, '/');
    } else {
      throw ParseError("enumerated set: unknown key '" + std::string(key) + "'");
    }
    pos = end + 1;
  }
  if (!seen_m || !seen_r) throw ParseError("enumerated set: periodic sets need m= and r=");
  for (int r : w.residues)
    if (r >= w.modulus) throw ParseError("enumerated set: residue not below the modulus");
  return w;
}

std::string EnumeratedSet::text() const {
  switch (kind) {
    case Kind::Finite:
      return "finite:" + join(list, ',');
    case Kind::Cofinite:
      return "cofinite:" + join(list, ',');
    default: {
      std::string s = "periodic:m=" + std::to_string(modulus) + ",r=" + join(residues, '/') + ",t=" + std::to_string(threshold);
      if (!head.empty()) s += ",h=" + join(head, '/');
      return s;
    }
  }
}

bool EnumeratedSet::contains(int k) const {
  if (k < 0) return false;
  switch (kind) {
    case Kind::Finite:
      return has(list, k);
    case Kind::Cofinite:
      return !has(list, k);
    default:
      return has(head, k) || (k >= threshold && has(residues, k % modulus));
  }
}

std::vector<int> EnumeratedSet::stage(int s) const {
  std::vector<int> out;
  for (int k = 0; k <= s; ++k)
    if (contains(k)) out.push_back(k);
  return out;
}

bool EnumeratedSet::cofinite() const {
  switch (kind) {
    case Kind::Finite:
      return false;
    case Kind::Cofinite:
      return true;
    default:
      return static_cast<int>(residues.size()) == modulus;
  }
}

std::vector<int> EnumeratedSet::complement() const {
  if (!cofinite()) throw Error("enumerated set: the complement is infinite");
  std::vector<int> out;
  const int bound = kind == Kind::Cofinite ? (list.empty() ? 0 : list.back() + 1) : threshold;
  for (int k = 0; k < bound; ++k)
    if (!contains(k)) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------- daisies

namespace {

struct Petal {
  int appears, center, length;
  auto key() const { return std::make_tuple(appears, center, length); }
};

std::vector<Petal> petals(const EnumeratedSet& w, int center, int stage) {
  std::vector<Petal> out;
  if (w.contains(center)) {
    for (int k : w.stage(stage)) out.push_back({k, center, k + 3});
  } else {
    out.push_back({0, center, center + 3});
    for (int k : w.stage(stage))
      if (k < center) out.push_back({k, center, k + 3});
  }
  return out;
}

}  // namespace

std::vector<int> petal_lengths(const EnumeratedSet& w, int center, int stage) {
  std::vector<int> out;
  for (const auto& p : petals(w, center, stage)) out.push_back(p.length);
  return out;
}

Structure daisy_bunch(const EnumeratedSet& w, int centers, int stage) {
  if (!w.contains(0)) throw Error("daisy bunch: 0 must belong to the set");
  if (centers < 0 || stage < 0) throw Error("daisy bunch: negative parameter");
  std::vector<Petal> all;
  for (int c = 0; c < centers; ++c)
    for (const auto& p : petals(w, c, stage)) all.push_back(p);
  std::sort(all.begin(), all.end(), [](const Petal& a, const Petal& b) { return a.key() < b.key(); });
  long total = centers;
  for (const auto& p : all) total += p.length - 1;
  if (total > 100000) throw ResourceError("daisy bunch: too many vertices");
  Structure g(Signature::graph(), static_cast<int>(total));
  int next = centers;
  for (const auto& p : all) {
    int prev = p.center;
    for (int j = 1; j < p.length; ++j) {
      g.add(0, {prev, next});
      prev = next++;
    }
    g.add(0, {prev, p.center});
  }
  return g;
}

DaisyClassification classify_daisy(const EnumeratedSet& w, int sizes) {
  DaisyClassification d;
  if (!w.contains(0)) throw Error("daisy classification: 0 must belong to the set");
  if (w.cofinite()) {
    d.rank = 1;
    const auto out = w.complement();
    const int b = out.empty() ? 0 : out.back() + 1;
    d.certificate.push_back("centers: vertices with at least 3 neighbours");
    d.certificate.push_back("bound b=" + std::to_string(b));
    for (int i : out)
      d.certificate.push_back("c" + std::to_string(i) + ": the only center with a petal of length " +
                              std::to_string(i + 3));
    d.certificate.push_back("centers c_i with i in W: centers with a petal of length " + std::to_string(b + 3));
    return d;
  }
  d.rank = 2;
  for (int s = 1; s <= sizes; ++s) {
    int b = std::max(0, s - 2);
    while (w.contains(b)) {
      if (++b > 10000000) throw ResourceError("daisy classification: escape search bound");
    }
    d.certificate.push_back("size " + std::to_string(s) + ": escape b=" + std::to_string(b) + " (b not in W, b+3=" +
                            std::to_string(b + 3) + " > " + std::to_string(s) + ")");
  }
  return d;
}

// ---------------------------------------------------------------- coding

namespace {

SignaturePtr coding_signature() {
  static const SignaturePtr sig = std::make_shared<const Signature>(
      std::vector<RelationSymbol>{{"U", 1}, {"V", 1}, {"c0", 3}, {"c1", 3}, {"R", 2}});
  return sig;
}

struct ClassInfo {
  int x, y, i;
  int start, size;  // element range
  bool is_g;
};

struct Coded {
  Structure b;
  std::vector<ClassInfo> classes;
  std::vector<int> class_of;  // element -> class index, -1 on U
};

void check_graph(const Structure& s, const char* what) {
  if (!s.signature().undirected_graph()) throw Error(std::string("coding: ") + what + " must be a graph");
}

Coded build_coded(const Structure& a, const SurrogatePair& pair, int width) {
  check_graph(a, "A");
  check_graph(pair.g, "G");
  check_graph(pair.h, "H");
  if (width < 1) throw Error("coding: width must be at least 1");
  const int n = a.size();
  std::vector<ClassInfo> classes;
  int next = n;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      for (int i = 0; i < 2; ++i) {
        const bool g = a.edge(x, y) == (i == 1);
        const int size = width * (g ? pair.g.size() : pair.h.size());
        classes.push_back({x, y, i, next, size, g});
        next += size;
      }
    }
  if (next > 5000) throw ResourceError("coding: coded structure too large");
  Coded c{Structure(coding_signature(), next), classes, std::vector<int>(next, -1)};
  for (int x = 0; x < n; ++x) c.b.add(0, {x});
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    const auto& cl = classes[ci];
    const Structure& copy = cl.is_g ? pair.g : pair.h;
    for (int v = cl.start; v < cl.start + cl.size; ++v) {
      c.b.add(1, {v});
      c.b.add(cl.i == 0 ? 2 : 3, {v, cl.x, cl.y});
      c.class_of[v] = static_cast<int>(ci);
    }
    for (int w = 0; w < width; ++w) {
      const int base = cl.start + w * copy.size();
      for (const auto& e : copy.facts(0)) c.b.add(4, {base + e[0], base + e[1]});
    }
  }
  return c;
}

// The class as a graph, with the positions of v inside it.
Structure class_graph(const Coded& c, int ci) {
  const auto& cl = c.classes[ci];
  Structure g(Signature::graph(), cl.size);
  for (int u = 0; u < cl.size; ++u)
    for (int v = u + 1; v < cl.size; ++v)
      if (c.b.holds(4, {cl.start + u, cl.start + v})) g.add(0, {u, v});
  return g;
}

}  // namespace

Structure code_structure(const Structure& a, const SurrogatePair& pair, int width) {
  return build_coded(a, pair, width).b;
}

CodingReport verify_coding_bf(const Structure& a, const SurrogatePair& pair, int m) {
  if (a.size() > 3) throw ResourceError("coding check: A is limited to 3 elements");
  if (m > 3) throw ResourceError("coding check: levels are limited to 3");
  if (m < 1) throw Error("coding check: m must be at least 1");
  const Coded c = build_coded(a, pair, 1);
  const int n = a.size();
  CodingReport rep;
  std::map<int, Structure> graphs;
  auto graph = [&](int ci) -> const Structure& {
    auto it = graphs.find(ci);
    if (it == graphs.end()) it = graphs.emplace(ci, class_graph(c, ci)).first;
    return it->second;
  };
  auto find_class = [&](int x, int y, int i) {
    for (std::size_t ci = 0; ci < c.classes.size(); ++ci)
      if (c.classes[ci].x == x && c.classes[ci].y == y && c.classes[ci].i == i) return static_cast<int>(ci);
    return -1;
  };

  struct Probe {
    Tuple a;
    int pos_x = -1, pos_y = -1, i = 0, offset = -1;  // v = offset inside class (a[pos_x], a[pos_y], i)
  };
  std::vector<Probe> probes;
  for (int len = 2; len <= n; ++len)
    for (const Tuple& t : distinct_tuples(n, len)) {
      probes.push_back({t});
      for (int px = 0; px < len; ++px)
        for (int py = 0; py < len; ++py) {
          if (px == py) continue;
          for (int i = 0; i < 2; ++i) {
            const int ci = find_class(t[px], t[py], i);
            for (int off = 0; off < c.classes[ci].size; ++off) probes.push_back({t, px, py, i, off});
          }
        }
    }

  auto btuple = [&](const Probe& p) {
    Tuple b = p.a;
    if (p.offset >= 0) b.push_back(c.classes[find_class(p.a[p.pos_x], p.a[p.pos_y], p.i)].start + p.offset);
    return b;
  };
  auto text = [&](const Probe& p) {
    std::string s = "a=" + tuple_text(p.a);
    if (p.offset >= 0)
      s += " v=" + std::to_string(btuple(p).back()) + " in V(" + std::to_string(p.a[p.pos_x]) + "," +
           std::to_string(p.a[p.pos_y]) + "," + std::to_string(p.i) + ")";
    return s;
  };

  for (const auto& p : probes)
    for (const auto& q : probes) {
      if (p.a.size() != q.a.size() || p.pos_x != q.pos_x || p.pos_y != q.pos_y || p.i != q.i) continue;
      if ((p.offset < 0) != (q.offset < 0)) continue;
      const Tuple bp = btuple(p), bq = btuple(q);
      const Structure* gp = nullptr;
      const Structure* gq = nullptr;
      if (p.offset >= 0) {
        gp = &graph(find_class(p.a[p.pos_x], p.a[p.pos_y], p.i));
        gq = &graph(find_class(q.a[q.pos_x], q.a[q.pos_y], q.i));
      }
      for (int level = 1; level <= m; ++level) {
        ++rep.checked;
        const bool lhs = bf_le_single(c.b, bp, bq, level);
        bool rhs;
        if (level == 1) {
          // distinct U elements on both sides: the equality patterns agree
          rhs = p.offset < 0 || bf_le(*gp, Tuple{p.offset}, *gq, Tuple{q.offset}, 1);
        } else {
          rhs = bf_le_single(a, p.a, q.a, level - 1) &&
                (p.offset < 0 || find_isomorphism(*gp, Tuple{p.offset}, *gq, Tuple{q.offset}).has_value());
        }
        if (lhs != rhs)
          rep.violations.push_back(std::string(level == 1 ? "(a)" : "(b)") + " level " + std::to_string(level) + ": " +
                                   text(p) + " vs " + text(q) + ": coded structure says " + (lhs ? "yes" : "no") +
                                   ", criterion says " + (rhs ? "yes" : "no"));
      }
    }
  rep.rank_a = n == 0 ? 1 : scott_rank(a);
  rep.rank_b = c.b.size() == 0 ? 1 : scott_rank(c.b);
  rep.rank_shift = rep.rank_b == 1 + rep.rank_a;
  return rep;
}

// ---------------------------------------------------------------- surrogate search

SurrogatePair find_surrogate_pair(int k, int max_size) {
  if (k < 0) throw Error("surrogate search: negative level");
  const int enumerable = std::min(max_size, 6);
  std::vector<std::vector<Structure>> by_size(enumerable + 1);
  for (int s = 1; s <= enumerable; ++s) by_size[s] = enumerate_structures(Signature::graph(), s);
  auto rigid = [](const Structure& s) { return automorphism_orbits(s, 1).classes.size() == static_cast<std::size_t>(s.size()); };
  auto equivalent = [&](const Structure& g, const Structure& h) {
    if (k == 0) return true;
    // level 1 first: every tuple of each side must embed in the other
    if (!sigma1_oracle(g, {}, h, {}) || !sigma1_oracle(h, {}, g, {})) return false;
    BFOracle fwd(g, h), bwd(h, g);
    return fwd.le({}, {}, k) && bwd.le({}, {}, k);
  };
  for (int total = 2; total <= 2 * enumerable; ++total) {
    std::optional<SurrogatePair> best;
    for (int sg = 1; sg <= enumerable && sg <= total - sg; ++sg) {
      const int sh = total - sg;
      if (sh > enumerable) continue;
      // From level 1 on, the full domain of each side extends to a distinct
      // tuple of the other, so the sizes agree.
      if (k >= 1 && sg != sh) continue;
      for (std::size_t ig = 0; ig < by_size[sg].size(); ++ig)
        for (std::size_t ih = (sg == sh ? ig + 1 : 0); ih < by_size[sh].size(); ++ih) {
          const Structure& g = by_size[sg][ig];
          const Structure& h = by_size[sh][ih];
          if (!equivalent(g, h)) continue;
          const bool r = rigid(g) && rigid(h);
          if (!best || (r && !best->rigid)) best = SurrogatePair{g, h, k, r};
          if (best->rigid) break;
        }
    }
    if (best) return *best;
  }
  std::string msg = "surrogate search: no non-isomorphic pair of graphs with G =_" + std::to_string(k) +
                    " H up to size " + std::to_string(max_size);
  if (k >= 1) {
    msg += " (pairs enumerated up to size " + std::to_string(enumerable) +
           "; for any size, equal sizes are forced and a same-size induced embedding of finite graphs is an isomorphism)";
  }
  else if (max_size < 2)
    msg += " (need a graph of size 2)";
  throw Error(msg);
}

}  // namespace scottkit
