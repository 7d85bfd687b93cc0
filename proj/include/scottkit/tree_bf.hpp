#pragma once

#include <map>
#include <span>
#include <tuple>

#include "scottkit/tree.hpp"

namespace scottkit {

// Extension quantifiers are exact on closed trees.  On open trees a query at
// level l with level alpha needs d >= l + alpha * min(d - l, 2); otherwise
// ResourceError.
void check_tree_budget(const LabeledTree& t, int level, int alpha);

// (sigma, x) <=_alpha (tau, y) between nodes of two labeled trees.  Variable
// selections are 0-based positions (x1 is 0).  Answers factor through the
// copy quotient and are memoized.
class TreeBF {
 public:
  TreeBF(const LabeledTree& left, const LabeledTree& right);

  // Node indices; budget checked on both sides.
  bool le(int sigma, std::span<const int> x, int tau, std::span<const int> y, int alpha);
  // (right tau, y) <=_alpha (left sigma, x)
  bool ge(int tau, std::span<const int> y, int sigma, std::span<const int> x, int alpha);

  const LabeledTree& left() const { return t_[0]; }
  const LabeledTree& right() const { return t_[1]; }
  const TreeQuotient& quotient_of(int side) const { return q_[side]; }

  // Class-level relation without budget checks: side s class a with sel sa
  // against side 1-s class b with sel sb.
  bool rel(int s, int a, const Tuple& sa, int b, const Tuple& sb, int alpha);

 private:
  void validate(int side, int node, std::span<const int> sel) const;

  LabeledTree t_[2];
  TreeQuotient q_[2];
  std::map<std::tuple<int, int, Tuple, int, Tuple, int>, bool> memo_;
};

bool tree_bf_le(const LabeledTree& t, int sigma, std::span<const int> x, const LabeledTree& u, int tau,
                std::span<const int> y, int alpha);

enum class AgreementBase { Sigma, Nu };

// Node-level property checks; quantifiers range over one node per quotient class.
Verdict check_agreement(const LabeledTree& t, int alpha, AgreementBase base = AgreementBase::Sigma);
Verdict check_permutation(const LabeledTree& t, int alpha);
Verdict check_support(const LabeledTree& t, int alpha);

struct Membership {
  Verdict verdict;       // six lines: levels, consistency, replication, agreement, permutation, support
  bool member = false;
  std::string reason;    // first failing property, empty for members
  std::string note;      // complexity of the untruncated test
};
Membership membership_verdict(const LabeledTree& t, int alpha, AgreementBase base = AgreementBase::Sigma);

}  // namespace scottkit
