#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scottkit/core.hpp"

namespace scottkit {

struct TreeNode {
  int id = 0;      // external id (file ids, CLI output)
  int parent = 0;  // internal index; the root is its own parent
  int level = 0;
  std::optional<AtomicType> label;
  Tuple tuple;     // represented tuple, when known
  int copy = -1;   // replication index among siblings representing the same tuple
};

// Finite truncation of a labeled tree of tuples.  Nodes are stored by
// internal index; index 0 is the root.  `symbolic` marks replication as
// conceptually infinite; `closed` marks a tree whose frontier is the true
// end of every branch (every tuple is maximal), so extension quantifiers
// are exact.
class LabeledTree {
 public:
  LabeledTree(SignaturePtr sig, int depth, int width, bool symbolic, bool closed);

  const SignaturePtr& signature_ptr() const { return sig_; }
  int depth() const { return depth_; }
  int width() const { return width_; }
  bool symbolic() const { return symbolic_; }
  bool closed() const { return closed_; }
  void set_closed(bool c) { closed_ = c; }
  void set_symbolic(bool s) { symbolic_ = s; }

  // parent < 0 creates the root (must be the first node).
  int add_node(int id, int parent, int level, std::optional<AtomicType> label, Tuple tuple = {}, int copy = -1);

  int size() const { return static_cast<int>(nodes_.size()); }
  const TreeNode& node(int i) const { return nodes_.at(i); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<int>& children(int i) const { return children_.at(i); }
  int find_id(int id) const;  // throws on unknown id
  // a is an ancestor of b or equal to it
  bool extends(int b, int a) const;
  std::vector<int> path_to(int i) const;  // root first
  // Length of the parent chain from the root (independent of the level field).
  int depth_of(int i) const;

 private:
  SignaturePtr sig_;
  int depth_, width_;
  bool symbolic_, closed_;
  std::vector<TreeNode> nodes_;
  std::vector<std::vector<int>> children_;
  std::vector<std::pair<int, int>> id_index_;  // sorted (id, index)
};

// Full-depth trees of a finite structure are closed (d = domain size).
LabeledTree embed_tree(const Structure& s, int depth, int width);

// Header "tree d=<int> w=<int> symbolic=<0|1> [closed=<0|1>] [sig=graph|E:2,U:1]",
// then one line per node "<id> <parent-id> <level> <label-sexpr|none>".
std::string format_tree(const LabeledTree& t);
LabeledTree parse_tree(std::string_view text);
LabeledTree load_tree(const std::string& path);

struct PropertyResult {
  std::string name;
  bool pass = true;
  std::string witness;  // counterexample or explanation
};

struct Verdict {
  std::vector<PropertyResult> results;
  bool ok() const;
  const PropertyResult* first_failure() const;
};

// Levels, Consistency, Replication.
Verdict check_simple_properties(const LabeledTree& t);

// Nodes with isomorphic subtrees up to child multiplicity share a class.
// Every query defined through labels of extensions factors through it.
struct TreeQuotient {
  std::vector<int> class_of;  // node -> class
  std::vector<int> rep;       // class -> smallest node index
  std::vector<int> level;     // class -> level of its nodes
  std::vector<std::optional<AtomicType>> label;
  std::vector<std::vector<int>> children;  // distinct child classes, sorted
  std::vector<std::vector<int>> desc;      // reflexive descendant classes, sorted
  int size() const { return static_cast<int>(rep.size()); }
};
TreeQuotient quotient(const LabeledTree& t);

// Label- and level-preserving rooted isomorphism (node index map T1 -> T2).
std::optional<std::vector<int>> tree_iso(const LabeledTree& t1, const LabeledTree& t2);

}  // namespace scottkit
