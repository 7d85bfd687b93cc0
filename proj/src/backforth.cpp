#include "scottkit/backforth.hpp"

#include <map>
#include <ostream>
#include <thread>

namespace scottkit {

std::string tuple_text(std::span<const int> t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + std::to_string(t[i]);
  return s + ")";
}

int BFTable::Side::find(std::span<const int> t) const {
  int id = 0;
  for (int x : t) {
    if (x < 0 || x >= static_cast<int>(child[id].size())) throw Error("tuple entry out of range");
    id = child[id][x];
    if (id < 0) throw Error("tuple not in table (repeated entry or beyond length bound)");
  }
  return id;
}

BFTable::Side BFTable::build_side(const Structure& s, int max_len) {
  Side sd;
  const int n = s.size();
  sd.tuples.push_back({});
  sd.child.push_back(std::vector<int>(n, -1));
  sd.by_len.assign(max_len + 1, {});
  sd.by_len[0].push_back(0);
  sd.rank.push_back(0);
  for (int len = 0; len < max_len; ++len) {
    for (int id : sd.by_len[len]) {
      Tuple t = sd.tuples[id];
      for (int e = 0; e < n; ++e) {
        if (std::find(t.begin(), t.end(), e) != t.end()) continue;
        Tuple u = t;
        u.push_back(e);
        const int nid = static_cast<int>(sd.tuples.size());
        sd.tuples.push_back(std::move(u));
        sd.child.push_back(std::vector<int>(n, -1));
        sd.child[id][e] = nid;
        sd.rank.push_back(static_cast<int>(sd.by_len[len + 1].size()));
        sd.by_len[len + 1].push_back(nid);
      }
    }
  }
  sd.desc.resize(sd.tuples.size());
  for (std::size_t id = 0; id < sd.tuples.size(); ++id) {
    auto& d = sd.desc[id];
    d.push_back({static_cast<int>(id)});
    while (true) {
      std::vector<int> next;
      for (int x : d.back())
        for (int c : sd.child[x])
          if (c >= 0) next.push_back(c);
      if (next.empty()) break;
      d.push_back(std::move(next));
    }
  }
  return sd;
}

BFTable::BFTable(const Structure& s, const Structure& t, int max_level, int max_len, int jobs)
    : s_(s), t_(t), max_level_(max_level) {
  if (s.signature().symbols() != t.signature().symbols()) throw Error("bf_table: signatures differ");
  if (max_level < 0) throw Error("bf_table: negative level bound");
  max_len_ = max_len < 0 ? std::max(s.size(), t.size()) : max_len;
  // Pair count per direction: sum over lengths of |S_k| * |T_k|.
  std::size_t pairs = 0;
  for (int k = 0; k <= max_len_; ++k) {
    std::size_t a = 1, b = 1;
    for (int i = 0; i < k; ++i) {
      a *= static_cast<std::size_t>(std::max(0, s.size() - i));
      b *= static_cast<std::size_t>(std::max(0, t.size() - i));
    }
    pairs += a * b;
    if (pairs > kMaxPairs)
      throw ResourceError("bf_table: more than " + std::to_string(kMaxPairs) +
                          " tuple pairs; use smaller structures or a smaller length bound");
  }
  ls_ = build_side(s_, max_len_);
  lt_ = build_side(t_, max_len_);
  levels_.push_back(level_zero());
  for (int n = 1; n <= max_level_; ++n) {
    levels_.push_back(compute_level(n, std::max(1, jobs)));
    const Level& a = levels_[n - 1];
    const Level& b = levels_[n];
    if (a.fwd == b.fwd && a.bwd == b.bwd) {
      stable_ = n - 1;
      break;
    }
  }
}

BFTable::Level BFTable::level_zero() const {
  std::map<std::vector<bool>, int> ids;
  auto type_ids = [&](const Side& sd, const Structure& st) {
    std::vector<int> out;
    for (const auto& tup : sd.tuples) out.push_back(ids.emplace(atomic_diagram(st, tup).signs(), ids.size()).first->second);
    return out;
  };
  auto ts = type_ids(ls_, s_);
  auto tt = type_ids(lt_, t_);
  Level lv;
  for (int k = 0; k <= max_len_; ++k) {
    const auto& xs = ls_.by_len[k];
    const auto& ys = lt_.by_len[k];
    std::vector<std::uint8_t> f(xs.size() * ys.size()), b(xs.size() * ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j) {
        const std::uint8_t v = ts[xs[i]] == tt[ys[j]];
        f[i * ys.size() + j] = v;
        b[j * xs.size() + i] = v;
      }
    lv.fwd.push_back(std::move(f));
    lv.bwd.push_back(std::move(b));
  }
  return lv;
}

bool BFTable::lookup(const Level& lv, bool forward, int x, int y) const {
  const Side& sx = forward ? ls_ : lt_;
  const Side& sy = forward ? lt_ : ls_;
  const int k = static_cast<int>(sx.tuples[x].size());
  const auto& tab = forward ? lv.fwd[k] : lv.bwd[k];
  return tab[static_cast<std::size_t>(sx.rank[x]) * sy.by_len[k].size() + static_cast<std::size_t>(sy.rank[y])];
}

BFTable::Level BFTable::compute_level(int n, int jobs) const {
  const Level& prev = levels_[n - 1];
  Level lv;
  for (int k = 0; k <= max_len_; ++k) {
    lv.fwd.emplace_back(prev.fwd[k].size(), 0);
    lv.bwd.emplace_back(prev.bwd[k].size(), 0);
  }
  // Work items: (forward?, length, rank of x).
  struct Item {
    bool forward;
    int k;
    int rx;
  };
  std::vector<Item> items;
  for (int dir = 0; dir < 2; ++dir)
    for (int k = 0; k <= max_len_; ++k) {
      const Side& sx = dir == 0 ? ls_ : lt_;
      for (std::size_t r = 0; r < sx.by_len[k].size(); ++r) items.push_back({dir == 0, k, static_cast<int>(r)});
    }
  auto work = [&](std::size_t from, std::size_t to) {
    for (std::size_t it = from; it < to; ++it) {
      const Item& item = items[it];
      const Side& sx = item.forward ? ls_ : lt_;
      const Side& sy = item.forward ? lt_ : ls_;
      const int x = sx.by_len[item.k][item.rx];
      auto& out = item.forward ? lv.fwd[item.k] : lv.bwd[item.k];
      const std::size_t ny = sy.by_len[item.k].size();
      for (std::size_t ry = 0; ry < ny; ++ry) {
        const int y = sy.by_len[item.k][ry];
        bool ok = n == 1 || lookup(prev, item.forward, x, y);
        // every extension y d of y is matched by some x c, one level down, reversed
        for (std::size_t j = 0; ok && j < sy.desc[y].size(); ++j) {
          const auto& xs = j < sx.desc[x].size() ? sx.desc[x][j] : std::vector<int>{};
          for (int yd : sy.desc[y][j]) {
            bool found = false;
            for (int xc : xs)
              if (lookup(prev, !item.forward, yd, xc)) {
                found = true;
                break;
              }
            if (!found) {
              ok = false;
              break;
            }
          }
        }
        out[static_cast<std::size_t>(item.rx) * ny + ry] = ok;
      }
    }
  };
  if (jobs <= 1 || items.size() < 64) {
    work(0, items.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (items.size() + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      const std::size_t from = std::min(items.size(), chunk * j);
      const std::size_t to = std::min(items.size(), from + chunk);
      pool.emplace_back(work, from, to);
    }
    for (auto& th : pool) th.join();
  }
  return lv;
}

const BFTable::Level& BFTable::level_for(int n) const {
  if (n < 0) throw Error("negative level");
  if (n < static_cast<int>(levels_.size())) return levels_[n];
  if (stable_ >= 0) return levels_[stable_];
  throw Error("level " + std::to_string(n) + " exceeds table bound " + std::to_string(max_level_));
}

bool BFTable::le(std::span<const int> a, std::span<const int> b, int n) const {
  if (a.size() > b.size()) throw Error("left tuple longer than right tuple");
  b = b.first(a.size());
  if (static_cast<int>(a.size()) > max_len_) throw Error("tuple longer than table length bound");
  return lookup(level_for(n), true, ls_.find(a), lt_.find(b));
}

bool BFTable::ge(std::span<const int> b, std::span<const int> a, int n) const {
  if (b.size() > a.size()) throw Error("left tuple longer than right tuple");
  a = a.first(b.size());
  if (static_cast<int>(b.size()) > max_len_) throw Error("tuple longer than table length bound");
  return lookup(level_for(n), false, lt_.find(b), ls_.find(a));
}

void BFTable::write_csv(std::ostream& out) const {
  out << "level,a,b,value\n";
  for (std::size_t n = 0; n < levels_.size(); ++n)
    for (int k = 0; k <= max_len_; ++k)
      for (int x : ls_.by_len[k])
        for (int y : lt_.by_len[k])
          out << n << ',' << tuple_text(ls_.tuples[x]) << ',' << tuple_text(lt_.tuples[y]) << ','
              << (lookup(levels_[n], true, x, y) ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------- pointwise oracle

BFOracle::BFOracle(const Structure& s, const Structure& t, int max_len, int max_level)
    : s_(s), t_(t), max_len_(max_len < 0 ? std::max(s.size(), t.size()) : max_len), max_level_(max_level) {
  if (s.signature().symbols() != t.signature().symbols()) throw Error("bf_le: signatures differ");
}

namespace {

void extensions(const Structure& st, const Tuple& base, int len, std::vector<Tuple>& out) {
  if (len == 0) {
    out.push_back(base);
    return;
  }
  for (int e = 0; e < st.size(); ++e) {
    if (std::find(base.begin(), base.end(), e) != base.end()) continue;
    Tuple b = base;
    b.push_back(e);
    extensions(st, b, len - 1, out);
  }
}

}  // namespace

bool BFOracle::rec(bool forward, const Tuple& x, const Tuple& y, int n) {
  const Structure& sx = forward ? s_ : t_;
  const Structure& sy = forward ? t_ : s_;
  if (n == 0) return atomic_diagram(sx, x) == atomic_diagram(sy, y);
  auto key = std::make_tuple(forward, n, x, y);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  auto cond = [&](int beta) {
    for (int len = 0; static_cast<int>(y.size()) + len <= max_len_; ++len) {
      std::vector<Tuple> ds, cs;
      extensions(sy, y, len, ds);
      extensions(sx, x, len, cs);
      for (const auto& yd : ds) {
        bool found = false;
        for (const auto& xc : cs)
          if (rec(!forward, yd, xc, beta)) {
            found = true;
            break;
          }
        if (!found) return false;
      }
    }
    return true;
  };
  bool v = true;
  if (n == 1) {
    v = cond(0);
  } else {
    for (int beta = 1; beta < n && v; ++beta) v = cond(beta);
  }
  memo_[key] = v;
  return v;
}

bool BFOracle::le(std::span<const int> a, std::span<const int> b, int n) {
  if (n < 0 || n > max_level_) throw Error("bf_le: level out of range");
  if (a.size() > b.size()) throw Error("bf_le: left tuple longer than right tuple");
  check_tuple(s_, a);
  check_tuple(t_, b);
  Tuple x(a.begin(), a.end());
  Tuple y(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(a.size()));
  return rec(true, x, y, n);
}

bool bf_le(const Structure& s, std::span<const int> a, const Structure& t, std::span<const int> b, int n) {
  BFOracle o(s, t);
  return o.le(a, b, n);
}

// ---------------------------------------------------------------- existential oracle

bool sigma1_oracle(const Structure& s, std::span<const int> a, const Structure& t, std::span<const int> b) {
  if (a.size() != b.size()) throw Error("sigma1_oracle: tuple lengths differ");
  check_tuple(s, a);
  check_tuple(t, b);
  if (atomic_diagram(s, a) != atomic_diagram(t, b)) return false;
  // Map T's elements in the order b, then the rest, into S.
  Tuple order(b.begin(), b.end());
  for (int e = 0; e < t.size(); ++e)
    if (std::find(order.begin(), order.end(), e) == order.end()) order.push_back(e);
  Tuple image(a.begin(), a.end());
  std::vector<bool> used(s.size(), false);
  for (int x : image) used[x] = true;
  auto rec = [&](auto&& self) -> bool {
    if (image.size() == order.size()) return true;
    const std::size_t k = image.size();
    Tuple pre(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k + 1));
    const AtomicType want = atomic_diagram(t, pre);
    for (int e = 0; e < s.size(); ++e) {
      if (used[e]) continue;
      image.push_back(e);
      if (atomic_diagram(s, image) == want) {
        used[e] = true;
        if (self(self)) return true;
        used[e] = false;
      }
      image.pop_back();
    }
    return false;
  };
  return rec(rec);
}

bool bf_le_single(const Structure& s, std::span<const int> a, std::span<const int> b, int n) {
  if (a.size() > b.size()) throw Error("left tuple longer than right tuple");
  b = b.first(a.size());
  if (n == 0) return atomic_diagram(s, a) == atomic_diagram(s, b);
  return find_isomorphism(s, a, s, b).has_value();
}

}  // namespace scottkit
