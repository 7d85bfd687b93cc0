#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scottkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input (structure files, formulas, trees, set descriptions).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A computation would exceed a documented size bound.
class ResourceError : public Error {
 public:
  using Error::Error;
};

using Tuple = std::vector<int>;

struct RelationSymbol {
  std::string name;
  int arity = 0;
  bool operator==(const RelationSymbol&) const = default;
};

class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<RelationSymbol> symbols, bool undirected_graph = false);

  // The single binary symbol E, flagged as an undirected graph.
  static std::shared_ptr<const Signature> graph();

  const std::vector<RelationSymbol>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  const RelationSymbol& operator[](std::size_t i) const { return symbols_[i]; }
  std::optional<std::size_t> find(std::string_view name) const;
  bool undirected_graph() const { return undirected_; }
  // "graph" or "sig E:2,U:1"
  std::string header() const;

  bool operator==(const Signature& o) const {
    return undirected_ == o.undirected_ && symbols_ == o.symbols_;
  }

 private:
  std::vector<RelationSymbol> symbols_;
  bool undirected_ = false;
};

using SignaturePtr = std::shared_ptr<const Signature>;

class Structure {
 public:
  Structure() : Structure(Signature::graph(), 0) {}
  Structure(SignaturePtr sig, int size);

  int size() const { return n_; }
  const Signature& signature() const { return *sig_; }
  const SignaturePtr& signature_ptr() const { return sig_; }

  // Adds a fact.  On undirected graphs the reverse pair is added too.
  void add(std::size_t rel, std::span<const int> args);
  void add(std::size_t rel, std::initializer_list<int> args) {
    add(rel, std::span<const int>(args.begin(), args.size()));
  }
  bool holds(std::size_t rel, std::span<const int> args) const;
  bool holds(std::size_t rel, std::initializer_list<int> args) const {
    return holds(rel, std::span<const int>(args.begin(), args.size()));
  }
  // Facts of one relation, lexicographically sorted.
  std::vector<Tuple> facts(std::size_t rel) const;
  std::size_t fact_count() const;

  // Graph conveniences (relation 0).
  bool edge(int u, int v) const { return holds(0, {u, v}); }
  int degree(int v) const;

  // Substructure induced on the listed elements, renumbered in list order.
  Structure induced(std::span<const int> elems) const;

  bool operator==(const Structure& o) const;

 private:
  std::size_t index(std::size_t rel, std::span<const int> args) const;

  SignaturePtr sig_;
  int n_ = 0;
  std::vector<std::vector<std::uint8_t>> bits_;
};

// Complete atomic type in variables x1..xn.  Atoms are R(x_{i1},...,x_{ik}) for
// every symbol and every index tuple (repeats allowed), in signature order then
// lexicographic index order; equalities between distinct variables are fixed false.
class AtomicType {
 public:
  AtomicType() = default;
  AtomicType(SignaturePtr sig, int vars, std::vector<bool> signs);

  int vars() const { return n_; }
  const SignaturePtr& signature_ptr() const { return sig_; }
  const std::vector<bool>& signs() const { return signs_; }
  // positions are 0-based variable indices
  bool holds(std::size_t rel, std::span<const int> positions) const;

  AtomicType restrict_to(int k) const;
  // Type of the selected variables (pairwise distinct), in selection order.
  AtomicType select(std::span<const int> positions) const;
  // Canonical model on {0..n-1}.
  Structure model() const;
  // "D<n>_<bits>"
  std::string code() const;

  bool operator==(const AtomicType& o) const {
    return n_ == o.n_ && signs_ == o.signs_ && same_signature(o);
  }
  bool operator<(const AtomicType& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return signs_ < o.signs_;
  }

  static std::size_t atom_count(const Signature& sig, int vars);

 private:
  bool same_signature(const AtomicType& o) const;

  SignaturePtr sig_;
  int n_ = 0;
  std::vector<bool> signs_;
};

void check_tuple(const Structure& s, std::span<const int> a);
AtomicType atomic_diagram(const Structure& s, std::span<const int> a);

// "graph" or "sig E:2,U:1"
SignaturePtr parse_signature(std::string_view header);
Structure parse_structure(std::string_view text);
std::string format_structure(const Structure& s);
Structure load_structure(const std::string& path);

struct OrbitPartition {
  int length = 0;
  std::vector<Tuple> tuples;            // all distinct-element tuples, lexicographic
  std::vector<int> class_of;            // index into classes
  std::vector<std::vector<int>> classes;  // tuple indices; first is the representative
  // witness[t] maps the representative of t's class onto t (a full automorphism)
  std::vector<std::vector<int>> witness;

  int index_of(std::span<const int> t) const;
};

// Isomorphism S->T extending a->b, if any.
std::optional<std::vector<int>> find_isomorphism(const Structure& s, std::span<const int> a,
                                                 const Structure& t, std::span<const int> b);
inline std::optional<std::vector<int>> find_isomorphism(const Structure& s, const Structure& t) {
  return find_isomorphism(s, {}, t, {});
}
bool is_isomorphism(const Structure& s, const Structure& t, const std::vector<int>& f);

OrbitPartition automorphism_orbits(const Structure& s, int m);

// Lexicographically ordered distinct-element tuples of length k over {0..n-1}.
std::vector<Tuple> distinct_tuples(int n, int k);

// Practical bounds: graphs up to 6 vertices; other signatures up to 16 atoms.
std::vector<Structure> enumerate_structures(SignaturePtr sig, int n);
std::vector<Structure> all_graphs_up_to(int n);

Structure graph_encode(const Structure& s);
// Recovers a copy of a structure over sig from an encoding.
Structure graph_decode(const Structure& g, SignaturePtr sig);

// Small named graphs used throughout tests and the CLI.
Structure make_graph(int n, std::initializer_list<std::pair<int, int>> edges);
Structure complete_graph(int n);
Structure empty_graph(int n);
Structure path_graph(int n);
Structure star_union(std::initializer_list<int> leaves);

}  // namespace scottkit
