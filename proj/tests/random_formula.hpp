#pragma once
// Fixed-seed random normal-form graph formulas for property tests.

#include <random>

#include "scottkit/formula.hpp"

namespace testgen {

using namespace scottkit;

struct FormulaGen {
  std::mt19937 rng;
  int counter = 0;
  explicit FormulaGen(unsigned seed) : rng(seed) {}

  int pick(int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

  Formula random_atom(const std::vector<std::string>& vars) {
    const std::string& a = vars[pick(static_cast<int>(vars.size()))];
    const std::string& b = vars[pick(static_cast<int>(vars.size()))];
    return atom(pick(2) == 0, pick(4) == 0 ? "=" : "E", {a, b});
  }

  Formula random_qf(const std::vector<std::string>& vars, int depth) {
    if (vars.empty()) return pick(2) ? qf_true() : qf_false();
    if (depth == 0 || pick(3) == 0) return random_atom(vars);
    std::vector<Formula> parts;
    int w = 1 + pick(3);
    for (int i = 0; i < w; ++i) parts.push_back(random_qf(vars, depth - 1));
    return qfree(pick(2) == 0, std::move(parts));
  }

  // A formula with the given rank bound over free variables `vars`.
  Formula random(const std::vector<std::string>& vars, int rank) {
    if (rank == 0 || pick(4) == 0) return random_qf(vars, 2);
    const bool is_or = pick(2) == 0;
    std::vector<Branch> bs;
    int w = 1 + pick(2);
    for (int i = 0; i < w; ++i) {
      std::vector<std::string> block;
      int k = pick(3);
      for (int j = 0; j < k; ++j) block.push_back("u" + std::to_string(++counter));
      std::vector<std::string> inner = vars;
      inner.insert(inner.end(), block.begin(), block.end());
      Formula body = random(inner, rank - 1);
      bs.push_back({block, body});
    }
    return is_or ? disj(std::move(bs)) : conj(std::move(bs));
  }
};

}  // namespace testgen
