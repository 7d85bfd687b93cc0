#include "scottkit/tree.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "scottkit/backforth.hpp"
#include "scottkit/formula.hpp"

namespace scottkit {

LabeledTree::LabeledTree(SignaturePtr sig, int depth, int width, bool symbolic, bool closed)
    : sig_(std::move(sig)), depth_(depth), width_(width), symbolic_(symbolic), closed_(closed) {
  if (depth < 0) throw Error("tree depth must be nonnegative");
  if (width < 1) throw Error("tree width must be at least 1");
}

int LabeledTree::add_node(int id, int parent, int level, std::optional<AtomicType> label, Tuple tuple, int copy) {
  const int idx = size();
  if (parent < 0) {
    if (idx != 0) throw Error("the root must be the first node");
    parent = 0;
  } else if (parent >= idx) {
    throw Error("parent must be added before its children");
  }
  auto pos = std::lower_bound(id_index_.begin(), id_index_.end(), std::make_pair(id, -1));
  if (pos != id_index_.end() && pos->first == id) throw Error("duplicate node id " + std::to_string(id));
  id_index_.insert(pos, {id, idx});
  nodes_.push_back({id, parent, level, std::move(label), std::move(tuple), copy});
  children_.emplace_back();
  if (idx != 0) children_[parent].push_back(idx);
  return idx;
}

int LabeledTree::find_id(int id) const {
  auto pos = std::lower_bound(id_index_.begin(), id_index_.end(), std::make_pair(id, -1));
  if (pos == id_index_.end() || pos->first != id) throw Error("unknown node id " + std::to_string(id));
  return pos->second;
}

bool LabeledTree::extends(int b, int a) const {
  while (true) {
    if (b == a) return true;
    if (b == 0) return false;
    b = nodes_[b].parent;
  }
}

std::vector<int> LabeledTree::path_to(int i) const {
  std::vector<int> out{i};
  while (i != 0) {
    i = nodes_[i].parent;
    out.push_back(i);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

int LabeledTree::depth_of(int i) const { return static_cast<int>(path_to(i).size()) - 1; }

LabeledTree embed_tree(const Structure& s, int depth, int width) {
  const int n = s.size();
  if (depth > n) throw Error("embed_tree: depth exceeds the domain size");
  if (depth < 0) throw Error("embed_tree: negative depth");
  if (width < 1) throw Error("embed_tree: width must be at least 1");
  double count = 1, layer = 1;
  for (int k = 1; k <= depth; ++k) {
    layer *= static_cast<double>(n - k + 1) * width;
    count += layer;
  }
  if (count > 4e6) throw ResourceError("embed_tree: more than 4000000 nodes");
  LabeledTree t(s.signature_ptr(), depth, width, true, depth == n);
  t.add_node(0, -1, 0, atomic_diagram(s, Tuple{}), Tuple{}, 0);
  std::vector<int> frontier{0};
  for (int k = 1; k <= depth; ++k) {
    std::vector<int> next;
    for (int p : frontier) {
      const Tuple base = t.node(p).tuple;
      for (int e = 0; e < n; ++e) {
        if (std::find(base.begin(), base.end(), e) != base.end()) continue;
        Tuple ext = base;
        ext.push_back(e);
        AtomicType lab = atomic_diagram(s, ext);
        for (int c = 0; c < width; ++c) next.push_back(t.add_node(t.size(), p, k, lab, ext, c));
      }
    }
    frontier = std::move(next);
  }
  return t;
}

// ---------------------------------------------------------------- file format

std::string format_tree(const LabeledTree& t) {
  std::ostringstream out;
  const auto& sig = *t.signature_ptr();
  out << "tree d=" << t.depth() << " w=" << t.width() << " symbolic=" << (t.symbolic() ? 1 : 0)
      << " closed=" << (t.closed() ? 1 : 0) << " sig=" << (sig.undirected_graph() ? "graph" : sig.header().substr(4))
      << "\n";
  for (const auto& nd : t.nodes()) {
    out << nd.id << ' ' << t.node(nd.parent).id << ' ' << nd.level << ' '
        << (nd.label ? to_sexpr(type_formula(*nd.label)) : std::string("none"));
    if (!nd.tuple.empty() || nd.copy >= 0) out << " # " << tuple_text(nd.tuple) << " copy " << nd.copy;
    out << "\n";
  }
  return out.str();
}

namespace {

int to_int(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad integer for " + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw ParseError("bad integer for " + what + ": '" + s + "'");
  return v;
}

}  // namespace

LabeledTree parse_tree(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::string cur;
    std::istringstream in{std::string(text)};
    while (std::getline(in, cur)) {
      if (auto h = cur.find('#'); h != std::string::npos) cur.erase(h);
      if (cur.find_first_not_of(" \t\r") == std::string::npos) continue;
      lines.push_back(cur);
    }
  }
  if (lines.empty()) throw ParseError("empty tree file");
  std::istringstream head(lines[0]);
  std::string word;
  head >> word;
  if (word != "tree") throw ParseError("tree file must start with 'tree'");
  std::map<std::string, std::string> kv;
  while (head >> word) {
    auto eq = word.find('=');
    if (eq == std::string::npos) throw ParseError("bad header field '" + word + "'");
    kv[word.substr(0, eq)] = word.substr(eq + 1);
  }
  for (const auto& [k, v] : kv)
    if (k != "d" && k != "w" && k != "symbolic" && k != "closed" && k != "sig")
      throw ParseError("unknown header field '" + k + "'");
  if (!kv.count("d") || !kv.count("w") || !kv.count("symbolic")) throw ParseError("header needs d=, w= and symbolic=");
  auto flag = [&](const std::string& key, bool dflt) {
    if (!kv.count(key)) return dflt;
    if (kv[key] == "0") return false;
    if (kv[key] == "1") return true;
    throw ParseError(key + " must be 0 or 1");
  };
  SignaturePtr sig = Signature::graph();
  if (kv.count("sig") && kv["sig"] != "graph") sig = parse_signature("sig " + kv["sig"]);
  LabeledTree t(sig, to_int(kv["d"], "d"), to_int(kv["w"], "w"), flag("symbolic", false), flag("closed", false));

  struct Raw {
    int id, parent, level;
    std::optional<AtomicType> label;
  };
  std::vector<Raw> raw;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream ls(lines[i]);
    std::string a, b, c;
    if (!(ls >> a >> b >> c)) throw ParseError("node line needs id, parent and level: '" + lines[i] + "'");
    std::string rest;
    std::getline(ls, rest);
    rest.erase(0, rest.find_first_not_of(" \t"));
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.pop_back();
    Raw r{to_int(a, "node id"), to_int(b, "parent id"), to_int(c, "level"), std::nullopt};
    if (r.level < 0) throw ParseError("negative level");
    if (rest.empty()) throw ParseError("node " + a + " has no label (use 'none')");
    if (rest != "none") r.label = type_from_formula(parse_formula(rest), sig, r.level);
    raw.push_back(std::move(r));
  }
  int root = -1;
  std::map<int, std::vector<int>> kids;
  std::map<int, int> seen;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!seen.emplace(raw[i].id, static_cast<int>(i)).second)
      throw ParseError("duplicate node id " + std::to_string(raw[i].id));
    if (raw[i].id == raw[i].parent) {
      if (root >= 0) throw ParseError("more than one root");
      root = static_cast<int>(i);
    } else {
      kids[raw[i].parent].push_back(static_cast<int>(i));
    }
  }
  if (root < 0) throw ParseError("no root (a node whose parent is itself)");
  // breadth-first from the root, children in file order
  std::vector<std::pair<int, int>> queue{{root, -1}};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const auto [ri, parent_index] = queue[q];
    const Raw& r = raw[ri];
    int idx = t.add_node(r.id, parent_index, r.level, r.label);
    for (int k : kids[r.id]) queue.push_back({k, idx});
  }
  if (t.size() != static_cast<int>(raw.size())) throw ParseError("some nodes are not connected to the root");
  return t;
}

LabeledTree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_tree(ss.str());
}

// ---------------------------------------------------------------- properties

bool Verdict::ok() const {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.pass; });
}

const PropertyResult* Verdict::first_failure() const {
  for (const auto& r : results)
    if (!r.pass) return &r;
  return nullptr;
}

Verdict check_simple_properties(const LabeledTree& t) {
  Verdict v;
  PropertyResult levels{"levels", true, ""};
  for (int i = 0; i < t.size() && levels.pass; ++i) {
    const auto& nd = t.node(i);
    const int expect = i == 0 ? 0 : t.node(nd.parent).level + 1;
    std::string why;
    if (!nd.label)
      why = "has no label";
    else if (nd.level != expect)
      why = "has level " + std::to_string(nd.level) + ", expected " + std::to_string(expect);
    else if (nd.label->vars() != nd.level)
      why = "label types " + std::to_string(nd.label->vars()) + " variables at level " + std::to_string(nd.level);
    else if (nd.level > t.depth())
      why = "lies below the truncation depth";
    else if (!(*nd.label->signature_ptr() == *t.signature_ptr()))
      why = "label uses a different signature";
    if (!why.empty()) {
      levels.pass = false;
      levels.witness = "node " + std::to_string(nd.id) + " " + why;
    }
  }
  v.results.push_back(levels);

  PropertyResult cons{"consistency", true, ""};
  for (int i = 1; i < t.size() && cons.pass; ++i) {
    const auto& nd = t.node(i);
    const auto& par = t.node(nd.parent);
    if (!nd.label || !par.label || nd.label->vars() < par.label->vars()) continue;
    if (!(nd.label->restrict_to(par.label->vars()) == *par.label)) {
      cons.pass = false;
      cons.witness = "node " + std::to_string(nd.id) + " does not imply the label of node " + std::to_string(par.id);
    }
  }
  v.results.push_back(cons);

  PropertyResult rep{"replication", true, t.symbolic() ? "symbolic" : ""};
  if (!t.symbolic()) {
    for (int i = 0; i < t.size() && rep.pass; ++i) {
      std::map<std::string, int> count;
      for (int c : t.children(i)) {
        const auto& lab = t.node(c).label;
        ++count[lab ? lab->code() : std::string("none")];
      }
      for (const auto& [code, k] : count)
        if (k < t.width()) {
          rep.pass = false;
          rep.witness = "node " + std::to_string(t.node(i).id) + " has " + std::to_string(k) + " children labeled " +
                        code + ", fewer than w=" + std::to_string(t.width());
          break;
        }
    }
  }
  v.results.push_back(rep);
  return v;
}

// ---------------------------------------------------------------- quotient and isomorphism

namespace {

std::string label_key(const std::optional<AtomicType>& l) { return l ? l->code() : std::string("-"); }

// Nodes ordered deepest first so children are keyed before parents.
std::vector<int> bottom_up(const LabeledTree& t) {
  std::vector<int> order{0};
  for (std::size_t q = 0; q < order.size(); ++q)
    for (int c : t.children(order[q])) order.push_back(c);
  std::reverse(order.begin(), order.end());
  return order;
}

}  // namespace

TreeQuotient quotient(const LabeledTree& t) {
  using Key = std::tuple<std::string, int, std::vector<int>>;
  std::map<Key, int> ids;
  std::vector<int> tmp(t.size());
  for (int i : bottom_up(t)) {
    std::vector<int> ch;
    for (int c : t.children(i)) ch.push_back(tmp[c]);
    std::sort(ch.begin(), ch.end());
    ch.erase(std::unique(ch.begin(), ch.end()), ch.end());
    Key key{label_key(t.node(i).label), t.node(i).level, ch};
    auto [it, fresh] = ids.emplace(key, static_cast<int>(ids.size()));
    tmp[i] = it->second;
  }
  // renumber by first node index
  std::vector<int> renum(ids.size(), -1);
  TreeQuotient q;
  q.class_of.resize(t.size());
  for (int i = 0; i < t.size(); ++i) {
    if (renum[tmp[i]] < 0) {
      renum[tmp[i]] = q.size();
      q.rep.push_back(i);
      q.level.push_back(t.node(i).level);
      q.label.push_back(t.node(i).label);
    }
    q.class_of[i] = renum[tmp[i]];
  }
  q.children.resize(q.size());
  for (int c = 0; c < q.size(); ++c) {
    for (int ch : t.children(q.rep[c])) q.children[c].push_back(q.class_of[ch]);
    std::sort(q.children[c].begin(), q.children[c].end());
    q.children[c].erase(std::unique(q.children[c].begin(), q.children[c].end()), q.children[c].end());
  }
  q.desc.resize(q.size());
  std::vector<bool> done(q.size(), false);
  for (int i : bottom_up(t)) {
    const int c = q.class_of[i];
    if (done[c]) continue;
    std::vector<int> d{c};
    for (int ch : q.children[c]) d.insert(d.end(), q.desc[ch].begin(), q.desc[ch].end());
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    q.desc[c] = std::move(d);
    done[c] = true;
  }
  return q;
}

std::optional<std::vector<int>> tree_iso(const LabeledTree& t1, const LabeledTree& t2) {
  if (t1.size() != t2.size() || !(*t1.signature_ptr() == *t2.signature_ptr())) return std::nullopt;
  // shared canonical ids: (label, level, sorted multiset of child ids)
  using Key = std::tuple<std::string, int, std::vector<int>>;
  std::map<Key, int> ids;
  auto canon = [&](const LabeledTree& t) {
    std::vector<int> id(t.size());
    for (int i : bottom_up(t)) {
      std::vector<int> ch;
      for (int c : t.children(i)) ch.push_back(id[c]);
      std::sort(ch.begin(), ch.end());
      auto [it, fresh] = ids.emplace(Key{label_key(t.node(i).label), t.node(i).level, ch}, static_cast<int>(ids.size()));
      id[i] = it->second;
    }
    return id;
  };
  const auto c1 = canon(t1);
  const auto c2 = canon(t2);
  if (c1[0] != c2[0]) return std::nullopt;
  std::vector<int> map(t1.size(), -1);
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    map[a] = b;
    auto ka = t1.children(a), kb = t2.children(b);
    auto by_id = [](const std::vector<int>& c) { return [&c](int x, int y) { return c[x] < c[y] || (c[x] == c[y] && x < y); }; };
    std::sort(ka.begin(), ka.end(), by_id(c1));
    std::sort(kb.begin(), kb.end(), by_id(c2));
    for (std::size_t i = 0; i < ka.size(); ++i) stack.push_back({ka[i], kb[i]});
  }
  return map;
}

}  // namespace scottkit
