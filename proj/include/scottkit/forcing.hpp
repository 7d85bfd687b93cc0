#pragma once

#include <optional>

#include "scottkit/formula.hpp"
#include "scottkit/tree.hpp"

namespace scottkit {

// Forcing over the nodes of a labeled tree.  Formulas speak about the tree
// variables x1, x2, ...; extension quantifiers range over realized nodes.
class Forcing {
 public:
  explicit Forcing(const LabeledTree& t);

  // Node indices.  Throws on free variables outside the x<i> names and when
  // the rank of psi exceeds the depth budget at the node.
  bool forces(int node, const Formula& psi);
  bool weakly_forces(int node, const Formula& psi);

  const LabeledTree& tree() const { return t_; }
  const TreeQuotient& classes() const { return q_; }
  // Class-level relation, no checks.
  bool forces_class(int cls, const Formula& psi);

 private:
  void check(int node, const Formula& psi) const;

  LabeledTree t_;
  TreeQuotient q_;
  std::vector<std::optional<Structure>> models_;
  std::map<std::pair<int, std::string>, bool> memo_;
};

bool forces(const LabeledTree& t, int node, const Formula& psi);
bool weakly_forces(const LabeledTree& t, int node, const Formula& psi);

// Trees viewed as structures: P(y,x) says x is the parent of y (the root is
// its own parent), Ext(y,z) says z extends y (reflexive), L<n> marks level n,
// and one unary relation per atomic type D in at most `depth` variables,
// named by D's code.
struct TreeSignature {
  SignaturePtr base;
  int depth = 0;
  SignaturePtr sig;
  std::vector<AtomicType> types;  // every complete type in 0..depth variables
};
TreeSignature tree_signature(SignaturePtr base, int depth);
Structure tree_structure(const LabeledTree& t, const TreeSignature& ts);

enum class QFreeForm { Sigma1, Pi1 };

// Formula in the free variable y defining { sigma : sigma forces theta } on
// tree structures over ts.
Formula force_formula(const Formula& theta, const TreeSignature& ts, QFreeForm form = QFreeForm::Sigma1,
                      const std::string& y = "y");

// Sentence stating Levels (with the parent, level and extension relations),
// Consistency, Replication at the given width, and beta-agreement and
// beta-permutation instantiated over the inventory (Sigma_beta formulas with
// beta < alpha); with a Scott sentence, also that the root weakly forces it.
Formula emit_axioms(int alpha, const std::vector<Formula>& inventory, const std::optional<Formula>& scott,
                    const TreeSignature& ts, int width = 2);

// Deterministic family of normal-form formulas in x1..x<free_vars>: rank 0
// literals and small Boolean combinations, Sigma_1 / Pi_1 formulas with one
// quantified variable, and Sigma_2 / Pi_2 formulas with two, at most
// max_width branches each.
std::vector<Formula> formula_inventory(SignaturePtr sig, int free_vars, int max_rank = 2, int max_width = 3);

}  // namespace scottkit
