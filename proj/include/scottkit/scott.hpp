#pragma once

#include <memory>
#include <optional>

#include "scottkit/backforth.hpp"
#include "scottkit/formula.hpp"

namespace scottkit {

struct OrbitWitness {
  int beta = 0;
  Tuple b;  // extra parameters named after a
};

// Back-and-forth queries inside one structure.  Uses a BFTable when the
// structure fits the table bound, otherwise the exact single-structure rule
// (<=_0 is type equality, <=_n for n >= 1 is orbit equivalence).
class ScottEngine {
 public:
  explicit ScottEngine(const Structure& s, int jobs = 1);

  const Structure& structure() const { return s_; }
  bool tabled() const { return table_ != nullptr; }
  bool le(std::span<const int> a, std::span<const int> b, int n) const;

  // Condition: some beta < alpha and parameters b such that every (a' b') with
  // (a b) <=_beta (a' b') has a <=_alpha a'.  Smallest beta, then shortest b,
  // then lexicographically least b.  Untabled structures get the
  // all-remaining-elements certificate at beta 0 without a search.
  std::optional<OrbitWitness> orbit_definable(std::span<const int> a, int alpha) const;

  // Pi_alpha formula in x1..x|a| defining { b : a <=_alpha b }.
  Formula pi_type_formula(std::span<const int> a, int alpha) const;
  // Sigma_alpha formula (exists u) pi(a u) defining the orbit of a.
  Formula defining_sigma_formula(std::span<const int> a, int alpha) const;

 private:
  Structure s_;
  std::unique_ptr<BFTable> table_;
  mutable std::map<std::pair<Tuple, int>, Formula> pi_memo_;
};

bool orbit_definable(const Structure& s, std::span<const int> a, int alpha, OrbitWitness* witness = nullptr);
Formula pi_type_formula(const Structure& s, std::span<const int> a, int alpha);
Formula defining_sigma_formula(const Structure& s, std::span<const int> a, int alpha);

struct RankReport {
  int rank = 1;
  std::string method;  // "table" or "certificate"
  // one entry per orbit representative of length <= witness_len
  std::vector<std::pair<Tuple, OrbitWitness>> witnesses;
};

RankReport scott_rank_report(const Structure& s, int witness_len = 1, int jobs = 1);
int scott_rank(const Structure& s);

// Least alpha >= 1 such that every orbit equals the evaluated extension of a
// defining_sigma_formula candidate; compares against automorphism_orbits.
int scott_rank_direct(const Structure& s, int max_alpha = 4);
// Whether the orbit of a is the extension of some candidate Sigma_alpha formula.
bool orbit_sigma_definable_direct(const ScottEngine& e, std::span<const int> a, int alpha, const OrbitPartition& op);

// Pi_2 sentence whose finite models are exactly the copies of s.
Formula scott_sentence(const Structure& s);

}  // namespace scottkit
