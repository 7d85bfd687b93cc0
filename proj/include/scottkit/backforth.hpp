#pragma once

#include <iosfwd>
#include <map>

#include "scottkit/core.hpp"

namespace scottkit {

// Tables of (S,a) <=_n (T,b) and (T,b) <=_n (S,a) for all same-length
// distinct-element tuples of length <= max_len, levels 0..max_level.
// Extension tuples range over distinct fresh elements only; repeated or
// reused elements are fixed by the equality atoms and never help.
class BFTable {
 public:
  static constexpr std::size_t kMaxPairs = std::size_t{1} << 22;

  // max_len < 0 means max(|S|,|T|).  jobs > 1 splits each level across threads.
  BFTable(const Structure& s, const Structure& t, int max_level, int max_len = -1, int jobs = 1);

  // (S,a) <=_n (T,b); a longer right tuple is truncated to |a|.
  bool le(std::span<const int> a, std::span<const int> b, int n) const;
  // (T,b) <=_n (S,a)
  bool ge(std::span<const int> b, std::span<const int> a, int n) const;

  int max_level() const { return max_level_; }
  int max_len() const { return max_len_; }
  // Least n with level n equal to level n+1 in both directions, or -1.
  int stable_level() const { return stable_; }
  int computed_levels() const { return static_cast<int>(levels_.size()); }

  const Structure& left() const { return s_; }
  const Structure& right() const { return t_; }

  // CSV rows "level,a,b,value" for the forward direction, tuples space-separated.
  void write_csv(std::ostream& out) const;

 private:
  struct Side {
    std::vector<Tuple> tuples;            // id -> tuple
    std::vector<int> rank;                // id -> index among tuples of its length
    std::vector<std::vector<int>> child;  // id -> element -> id of extension (or -1)
    // id -> extension length j -> ids of descendants with j more elements
    std::vector<std::vector<std::vector<int>>> desc;
    std::vector<std::vector<int>> by_len;  // length -> ids
    int find(std::span<const int> t) const;
  };
  struct Level {
    std::vector<std::vector<std::uint8_t>> fwd;  // length -> rankS * |T_len| + rankT
    std::vector<std::vector<std::uint8_t>> bwd;  // length -> rankT * |S_len| + rankS
  };

  static Side build_side(const Structure& s, int max_len);
  bool lookup(const Level& lv, bool forward, int x, int y) const;
  Level compute_level(int n, int jobs) const;
  const Level& level_for(int n) const;
  Level level_zero() const;

  Structure s_, t_;
  int max_level_, max_len_;
  Side ls_, lt_;
  std::vector<Level> levels_;
  int stable_ = -1;
};

// Pointwise evaluation of the definition by memoized recursion, independent of
// BFTable.  max_len bounds |b d| (default: larger domain size).
class BFOracle {
 public:
  BFOracle(const Structure& s, const Structure& t, int max_len = -1, int max_level = 64);
  // (S,a) <=_n (T,b)
  bool le(std::span<const int> a, std::span<const int> b, int n);

 private:
  bool rec(bool forward, const Tuple& x, const Tuple& y, int n);

  Structure s_, t_;
  int max_len_, max_level_;
  std::map<std::tuple<bool, int, Tuple, Tuple>, bool> memo_;
};

bool bf_le(const Structure& s, std::span<const int> a, const Structure& t, std::span<const int> b, int n);

// Every existential formula true of b in T is true of a in S, decided by an
// embedding search of T's full diagram over b into S over a.
bool sigma1_oracle(const Structure& s, std::span<const int> a, const Structure& t, std::span<const int> b);

// Within one finite structure, <=_n for n >= 1 is automorphism-orbit equivalence.
bool bf_le_single(const Structure& s, std::span<const int> a, std::span<const int> b, int n);

std::string tuple_text(std::span<const int> t);  // "(0 1)"

}  // namespace scottkit
