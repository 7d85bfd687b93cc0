#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "scottkit/core.hpp"

namespace scottkit {

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct Branch {
  std::vector<std::string> vars;  // quantifier block, possibly empty
  Formula body;
};

// Negation normal form.  Atom and QFree are the finitary quantifier-free layer;
// Or is a disjunction of existential branches, And a conjunction of universal ones.
struct FormulaNode {
  enum class Kind { Atom, QFree, Or, And };
  Kind kind = Kind::Atom;

  // Atom: rel "=" is equality
  bool positive = true;
  std::string rel;
  std::vector<std::string> args;

  // QFree: conjunction or disjunction of Atom/QFree parts (empty allowed: true/false)
  bool conjunction = true;
  std::vector<Formula> parts;

  // Or / And (nonempty)
  std::vector<Branch> branches;
};

Formula atom(bool positive, std::string rel, std::vector<std::string> args);
Formula qfree(bool conjunction, std::vector<Formula> parts);
Formula disj(std::vector<Branch> branches);
Formula conj(std::vector<Branch> branches);
Formula qf_true();
Formula qf_false();

enum class Side { Sigma, Pi };

struct Complexity {
  Side side = Side::Sigma;
  int rank = 0;
  bool operator==(const Complexity&) const = default;
};

Complexity classify(const Formula& f);
std::string complexity_name(const Complexity& c);  // "Sigma_2", "Pi_1", "QF"

Formula neg(const Formula& f);
bool structurally_equal(const Formula& a, const Formula& b);

std::set<std::string> free_vars(const Formula& f);
// Renames free occurrences only.
Formula rename_free(const Formula& f, const std::map<std::string, std::string>& m);

// Normal-form combinators that keep the rank minimal.
Formula or_merge(const std::vector<Formula>& fs);
Formula and_merge(const std::vector<Formula>& fs);
Formula exists_(std::vector<std::string> vars, const Formula& f);
Formula forall_(std::vector<std::string> vars, const Formula& f);

std::string to_sexpr(const Formula& f);
Formula parse_formula(std::string_view text);

using Assignment = std::map<std::string, int>;
bool evaluate(const Structure& s, const Formula& f, const Assignment& asg);

// Variable names x1..xn
std::string var_name(int i);
std::vector<std::string> var_names(int from, int to);  // x_from..x_to inclusive
// Index of "x<k>" or -1 for other names.
int var_index(const std::string& name);

// The conjunction of signed atoms of a complete type (distinctness included).
Formula type_formula(const AtomicType& t);
Formula type_formula(const AtomicType& t, const std::vector<std::string>& names);
// Inverse of type_formula; throws ParseError if f is not a complete type in x1..xn.
// vars < 0 infers the variable count from the highest index used.
AtomicType type_from_formula(const Formula& f, SignaturePtr sig, int vars = -1);

std::size_t formula_size(const Formula& f);

}  // namespace scottkit
