#pragma once

#include "scottkit/tree_bf.hpp"

namespace scottkit {

// Witnessing requirement W(nu, tau, beta): some node tau' on the path with
// nu <= tau' and (tau, x y) <=_beta (tau', x z), where x are nu's variables.
struct Requirement {
  int nu = 0;   // node indices
  int tau = 0;
  int beta = 0;
  bool operator==(const Requirement&) const = default;
};

struct GenericPath {
  std::vector<int> nodes;          // root first; consecutive parent-child
  std::vector<Requirement> served;  // requirements that triggered an extension, in order
  std::vector<Requirement> unmet;   // in-budget requirements left unsatisfied
  bool generic = false;
  std::string note;                 // "exact on a closed tree" or "relative to the depth budget"
};

// Serves the first requirement needing attention, ordered by (level of nu,
// id of nu, id of tau, beta), with the smallest-id extension that satisfies
// it; once none needs attention the path descends through smallest-id
// children to the frontier.  max_steps bounds the number of extensions.
GenericPath build_generic_path(const LabeledTree& t, int sigma0, int alpha, int max_steps = 100000);

// In-budget requirements with nu on the path that no node of the path satisfies.
std::vector<Requirement> unmet_requirements(const LabeledTree& t, const std::vector<int>& path, int alpha);

// Structure on x1..xk (element i is x_{i+1}) read off the labels along the path.
Structure extract_structure(const LabeledTree& t, const std::vector<int>& path);

struct GoodMatchResult {
  bool ok = false;
  std::vector<std::string> trace;  // matched pairs, then the failing step if any
};

// Back-and-forth family of level-preserving node pairs whose full variable
// tuples are <=_alpha in both directions, grown from the roots through
// children until the truncation frontier.
GoodMatchResult good_match_verify(const LabeledTree& t1, const LabeledTree& t2, int alpha);

}  // namespace scottkit
