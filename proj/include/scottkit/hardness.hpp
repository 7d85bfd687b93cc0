#pragma once

#include <string>
#include <vector>

#include "scottkit/core.hpp"

namespace scottkit {

// Decidable set of naturals with a monotone stage enumeration: stage s lists
// the members k <= s.
//   finite:0,2,5            the listed numbers
//   cofinite:1,3            everything except the listed numbers
//   periodic:m=3,r=0/2,t=4,h=1
//                           k with k >= t and k mod m in r, plus the head h
//                           (r and h are '/'-separated; t and h optional)
struct EnumeratedSet {
  enum class Kind { Finite, Cofinite, Periodic };
  Kind kind = Kind::Finite;
  std::vector<int> list;      // finite members or cofinite exclusions
  int modulus = 1;
  std::vector<int> residues;
  int threshold = 0;
  std::vector<int> head;

  static EnumeratedSet parse(std::string_view text);
  std::string text() const;

  bool contains(int k) const;
  std::vector<int> stage(int s) const;
  bool cofinite() const;
  // Non-members, when finitely many.
  std::vector<int> complement() const;
};

// Lengths of the petals around center i at stage s, in the order they appear.
std::vector<int> petal_lengths(const EnumeratedSet& w, int center, int stage);

// Centers are vertices 0..centers-1; petals follow in order of the stage at
// which they appear (own petals of non-members at stage 0), then center,
// then length, so a stage graph is an initial segment of every later one.
Structure daisy_bunch(const EnumeratedSet& w, int centers, int stage);

struct DaisyClassification {
  int rank = 2;
  std::vector<std::string> certificate;
};
// Escape witnesses for coinfinite sets are listed for formula sizes 1..sizes.
DaisyClassification classify_daisy(const EnumeratedSet& w, int sizes = 12);

struct SurrogatePair {
  Structure g, h;
  int k = 0;
  bool rigid = false;  // both without nontrivial automorphisms
};

// Signature U:1, V:1, c0:3, c1:3, R:2.  U is A's domain (elements 0..n-1);
// for each ordered pair (x, y) of distinct elements and i in {0, 1}, a class
// V(x,y,i) of `width` disjoint copies of G or H under R, marked by
// c_i(v, x, y).  The copy is G when (xEy and i = 1) or (not xEy and i = 0).
Structure code_structure(const Structure& a, const SurrogatePair& pair, int width = 1);

struct CodingReport {
  int checked = 0;
  std::vector<std::string> violations;
  int rank_a = 0, rank_b = 0;
  bool rank_shift = false;  // rank_b == 1 + rank_a
};

// Compares <=_1 and <=_level (2 <= level <= m) on tuples (a, v) of the coded
// structure with the transfer criteria: a ranges over tuples of distinct U
// elements of length 2..|A|, v over at most one element of a class indexed
// by a pair from a, and primed tuples use the corresponding class.
CodingReport verify_coding_bf(const Structure& a, const SurrogatePair& pair, int m);

// Non-isomorphic nonempty graphs G, H with G <=_k H and H <=_k G on empty
// tuples, minimizing |G| + |H|, preferring rigid pairs, then by size and
// graph code.  Throws Error when none exists within max_size.
SurrogatePair find_surrogate_pair(int k, int max_size);

}  // namespace scottkit
