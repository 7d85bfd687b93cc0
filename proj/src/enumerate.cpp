#include <algorithm>
#include <map>

#include "scottkit/core.hpp"

namespace scottkit {

namespace {

// Isomorphism-invariant bucket key: per-relation fact counts plus sorted
// per-element incidence counts.
std::vector<int> invariant(const Structure& s) {
  std::vector<int> key;
  std::vector<std::vector<int>> per(s.size(), std::vector<int>(s.signature().size(), 0));
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    auto fs = s.facts(r);
    key.push_back(static_cast<int>(fs.size()));
    for (const auto& f : fs)
      for (int x : f) ++per[x][r];
  }
  std::sort(per.begin(), per.end());
  for (auto& p : per) key.insert(key.end(), p.begin(), p.end());
  return key;
}

}  // namespace

std::vector<Structure> enumerate_structures(SignaturePtr sig, int n) {
  if (n < 0) throw Error("negative domain size");
  struct Slot {
    std::size_t rel;
    Tuple args;
  };
  std::vector<Slot> slots;
  if (sig->undirected_graph()) {
    if (n > 6) throw ResourceError("graph enumeration is limited to 6 vertices");
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) slots.push_back({0, {u, v}});
  } else {
    if (AtomicType::atom_count(*sig, n) > 16)
      throw ResourceError("structure enumeration is limited to 16 atomic facts");
    for (std::size_t r = 0; r < sig->size(); ++r) {
      const int ar = (*sig)[r].arity;
      Tuple idx(ar, 0);
      if (n == 0) continue;
      while (true) {
        slots.push_back({r, idx});
        int i = ar - 1;
        while (i >= 0 && ++idx[i] == n) idx[i--] = 0;
        if (i < 0) break;
      }
    }
  }
  std::vector<Structure> out;
  std::map<std::vector<int>, std::vector<std::size_t>> buckets;
  const std::uint64_t total = std::uint64_t{1} << slots.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Structure s(sig, n);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (mask >> i & 1) s.add(slots[i].rel, slots[i].args);
    auto& cand = buckets[invariant(s)];
    bool fresh = true;
    for (std::size_t idx : cand) {
      if (find_isomorphism(out[idx], s)) {
        fresh = false;
        break;
      }
    }
    if (fresh) {
      cand.push_back(out.size());
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Structure> all_graphs_up_to(int n) {
  std::vector<Structure> out;
  for (int k = 0; k <= n; ++k)
    for (auto& g : enumerate_structures(Signature::graph(), k)) out.push_back(std::move(g));
  return out;
}

}  // namespace scottkit
