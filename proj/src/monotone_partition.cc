/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sisort/monotone_partition.h"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sisort {

SearchBudgetExceeded::SearchBudgetExceeded(int best_upper_bound,
                                           std::uint64_t nodes_visited)
    : std::runtime_error("monotone partition search exceeded its node budget "
                         "after " +
                         std::to_string(nodes_visited) +
                         " nodes; best upper bound " +
                         std::to_string(best_upper_bound)),
      best_upper_bound_(best_upper_bound),
      nodes_visited_(nodes_visited) {}

namespace {

// Dense ranks preserving ties; the search only ever compares values.
std::vector<int> DenseRanks(std::span<const double> seq) {
  std::vector<double> sorted(seq.begin(), seq.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> ranks;
  ranks.reserve(seq.size());
  for (double v : seq) {
    ranks.push_back(static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()));
  }
  return ranks;
}

// Row lengths of the RSK insertion tableau for weakly increasing rows.
std::vector<int> WeakRskShape(const std::vector<int>& ranks) {
  std::vector<std::vector<int>> rows;
  for (int v : ranks) {
    int x = v;
    for (std::size_t r = 0;; ++r) {
      if (r == rows.size()) {
        rows.push_back({x});
        break;
      }
      auto& row = rows[r];
      auto it = std::upper_bound(row.begin(), row.end(), x);
      if (it == row.end()) {
        row.push_back(x);
        break;
      }
      std::swap(*it, x);
    }
  }
  std::vector<int> shape;
  shape.reserve(rows.size());
  for (const auto& row : rows) shape.push_back(static_cast<int>(row.size()));
  return shape;
}

int ShapeLowerBound(const std::vector<int>& ranks) {
  const int m = static_cast<int>(ranks.size());
  if (m == 0) return 0;
  std::vector<int> negated(ranks.size());
  std::transform(ranks.begin(), ranks.end(), negated.begin(),
                 [](int v) { return -v; });
  const std::vector<int> inc = WeakRskShape(ranks);
  const std::vector<int> dec = WeakRskShape(negated);
  // prefix[a] = largest union of a non-decreasing chains.
  std::vector<int> inc_prefix(inc.size() + 1, 0), dec_prefix(dec.size() + 1, 0);
  for (std::size_t i = 0; i < inc.size(); ++i)
    inc_prefix[i + 1] = inc_prefix[i] + inc[i];
  for (std::size_t i = 0; i < dec.size(); ++i)
    dec_prefix[i + 1] = dec_prefix[i] + dec[i];
  int best = m;
  for (std::size_t a = 0; a < inc_prefix.size(); ++a) {
    for (std::size_t b = 0; b < dec_prefix.size(); ++b) {
      if (inc_prefix[a] + dec_prefix[b] >= m) {
        best = std::min(best, static_cast<int>(a + b));
        break;
      }
    }
  }
  return best;
}

// Length-maximal weakly monotone subsequence, returned as positions.
std::vector<int> LongestChain(const std::vector<int>& ranks,
                              const std::vector<int>& alive, bool increasing) {
  // Patience sorting with predecessor links.
  std::vector<int> tail_value, tail_pos;
  std::vector<int> parent(alive.size(), -1);
  for (std::size_t k = 0; k < alive.size(); ++k) {
    const int v = increasing ? ranks[alive[k]] : -ranks[alive[k]];
    auto it = std::upper_bound(tail_value.begin(), tail_value.end(), v);
    const auto pile = static_cast<std::size_t>(it - tail_value.begin());
    if (pile > 0) parent[k] = tail_pos[pile - 1];
    if (pile == tail_value.size()) {
      tail_value.push_back(v);
      tail_pos.push_back(static_cast<int>(k));
    } else {
      tail_value[pile] = v;
      tail_pos[pile] = static_cast<int>(k);
    }
  }
  std::vector<int> chain;
  for (int k = tail_pos.empty() ? -1 : tail_pos.back(); k >= 0; k = parent[k])
    chain.push_back(k);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

int GreedyCover(const std::vector<int>& ranks) {
  std::vector<int> alive(ranks.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<int>(i);
  int chains = 0;
  while (!alive.empty()) {
    std::vector<int> inc = LongestChain(ranks, alive, true);
    std::vector<int> dec = LongestChain(ranks, alive, false);
    const std::vector<int>& take = inc.size() >= dec.size() ? inc : dec;
    std::vector<int> rest;
    rest.reserve(alive.size() - take.size());
    std::size_t t = 0;
    for (std::size_t k = 0; k < alive.size(); ++k) {
      if (t < take.size() && take[t] == static_cast<int>(k)) {
        ++t;
      } else {
        rest.push_back(alive[k]);
      }
    }
    alive = std::move(rest);
    ++chains;
  }
  return chains;
}

// Online weak-RSK insertion that tracks row lengths. Row storage is kept
// across Reset calls.
class RskRows {
 public:
  void Reset() {
    for (std::size_t r = 0; r < used_; ++r) rows_[r].clear();
    used_ = 0;
  }
  void Insert(int v) {
    int x = v;
    for (std::size_t r = 0;; ++r) {
      if (r == used_) {
        if (used_ == rows_.size()) rows_.emplace_back();
        rows_[used_++].push_back(x);
        return;
      }
      auto& row = rows_[r];
      auto it = std::upper_bound(row.begin(), row.end(), x);
      if (it == row.end()) {
        row.push_back(x);
        return;
      }
      std::swap(*it, x);
    }
  }
  // Largest union of k chains, k = 0..cap.
  void Unions(int cap, std::vector<int>& out) const {
    out.assign(static_cast<std::size_t>(cap) + 1, 0);
    for (int k = 1; k <= cap; ++k) {
      const std::size_t r = static_cast<std::size_t>(k - 1);
      out[k] = out[k - 1] + (r < used_ ? static_cast<int>(rows_[r].size()) : 0);
    }
  }

 private:
  std::vector<std::vector<int>> rows_;
  std::size_t used_ = 0;
};

// Cumulative RSK row sums for every suffix of the sequence: cover(t, a, b)
// is the most elements of suffix t that a non-decreasing plus b
// non-increasing chains can hold.
class SuffixShapes {
 public:
  explicit SuffixShapes(const std::vector<int>& ranks) : m_(ranks.size()) {
    inc_.resize(m_ + 1);
    dec_.resize(m_ + 1);
    inc_[m_] = dec_[m_] = {0};
    std::vector<int> suffix, negated;
    for (std::size_t t = m_; t-- > 0;) {
      suffix.assign(ranks.begin() + static_cast<std::ptrdiff_t>(t),
                    ranks.end());
      negated.resize(suffix.size());
      std::transform(suffix.begin(), suffix.end(), negated.begin(),
                     [](int v) { return -v; });
      inc_[t] = Prefix(WeakRskShape(suffix));
      dec_[t] = Prefix(WeakRskShape(negated));
    }
  }

  int Cover(std::size_t t, int a, int b) const {
    const auto& inc = inc_[t];
    const auto& dec = dec_[t];
    return inc[std::min<std::size_t>(a, inc.size() - 1)] +
           dec[std::min<std::size_t>(b, dec.size() - 1)];
  }

 private:
  static std::vector<int> Prefix(const std::vector<int>& shape) {
    std::vector<int> sums(shape.size() + 1, 0);
    for (std::size_t i = 0; i < shape.size(); ++i)
      sums[i + 1] = sums[i] + shape[i];
    return sums;
  }

  std::size_t m_;
  std::vector<std::vector<int>> inc_, dec_;
};

// Exact decision for at most d chains, by depth-first assignment left to
// right. Each element either extends the tightest fitting chain of a
// direction or opens a new chain of that direction; any other choice is
// dominated. A state survives only if some split (a, d - a) still marked
// viable can hold the rest of the sequence. Failed states are memoised under
// a key that only sees how each chain relates to the remaining suffix.
class ChainSearch {
 public:
  ChainSearch(const std::vector<int>& ranks, const SuffixShapes& shapes, int d,
              const std::vector<char>& viable, std::uint64_t budget)
      : ranks_(ranks), shapes_(shapes), d_(d), viable_(viable), budget_(budget) {
    const std::size_t m = ranks_.size();
    int max_rank = 0;
    for (int v : ranks_) max_rank = std::max(max_rank, v);
    stride_ = static_cast<std::size_t>(max_rank) + 2;
    less_.assign((m + 1) * stride_, 0);
    for (std::size_t t = m; t-- > 0;) {
      for (std::size_t r = 0; r < stride_; ++r) {
        less_[t * stride_ + r] = less_[(t + 1) * stride_ + r] +
                                 (ranks_[t] < static_cast<int>(r) ? 1 : 0);
      }
    }
  }

  bool Run() { return Visit(0); }
  bool exhausted() const { return exhausted_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  // Suffix values starting at t that are strictly below rank r.
  int Less(std::size_t t, int r) const {
    return less_[t * stride_ + static_cast<std::size_t>(r)];
  }

  bool Fits(std::size_t t, int inc_live, int dec_live) const {
    const int remaining = static_cast<int>(ranks_.size() - t);
    const int inc_open = static_cast<int>(inc_.size());
    const int dec_open = static_cast<int>(dec_.size());
    for (int a = inc_open; a <= d_ - dec_open; ++a) {
      if (!viable_[a]) continue;
      if (shapes_.Cover(t, inc_live + a - inc_open,
                        dec_live + (d_ - a) - dec_open) >= remaining) {
        return true;
      }
    }
    return false;
  }

  bool Visit(std::size_t t) {
    const std::size_t m = ranks_.size();
    if (t == m) return true;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    const int remaining = static_cast<int>(m - t);

    // A non-decreasing chain with last L accepts suffix values >= L; only the
    // number of suffix values below L matters. Symmetrically for the others.
    // Both key runs come out sorted because the lasts are kept sorted.
    std::u16string key;
    key.reserve(inc_.size() + dec_.size() + 4);
    key.push_back(static_cast<char16_t>(t));
    key.push_back(static_cast<char16_t>(inc_.size()));
    key.push_back(static_cast<char16_t>(dec_.size()));
    int inc_live = 0, dec_live = 0;
    for (int last : inc_) {
      const int below = Less(t, last);
      if (below == remaining) continue;  // dead chain
      key.push_back(static_cast<char16_t>(below + 1));
      ++inc_live;
    }
    key.push_back(0);
    for (int last : dec_) {
      const int at_most = Less(t, last + 1);
      if (at_most == 0) continue;
      key.push_back(static_cast<char16_t>(at_most));
      ++dec_live;
    }
    if (!Fits(t, inc_live, dec_live)) return false;
    if (failed_.contains(key)) return false;
    if (Subsumed(key, inc_live)) return false;

    const int v = ranks_[t];
    const bool can_open =
        static_cast<int>(inc_.size() + dec_.size()) < d_;
    const bool inc_extend =
        std::upper_bound(inc_.begin(), inc_.end(), v) != inc_.begin();
    const bool dec_extend =
        std::lower_bound(dec_.begin(), dec_.end(), v) != dec_.end();

    auto try_inc = [&]() {
      if (inc_extend) {
        const auto pos =
            std::upper_bound(inc_.begin(), inc_.end(), v) - inc_.begin() - 1;
        const int old = inc_[pos];
        inc_[pos] = v;  // order is preserved: old <= v < next
        if (Visit(t + 1)) return true;
        inc_[pos] = old;
        return false;
      }
      if (!can_open) return false;
      inc_.insert(std::upper_bound(inc_.begin(), inc_.end(), v), v);
      if (Visit(t + 1)) return true;
      inc_.erase(std::find(inc_.begin(), inc_.end(), v));
      return false;
    };
    auto try_dec = [&]() {
      if (dec_extend) {
        const auto pos =
            std::lower_bound(dec_.begin(), dec_.end(), v) - dec_.begin();
        const int old = dec_[pos];
        dec_[pos] = v;  // prev < v <= old keeps ascending order
        if (Visit(t + 1)) return true;
        dec_[pos] = old;
        return false;
      }
      if (!can_open) return false;
      dec_.insert(std::lower_bound(dec_.begin(), dec_.end(), v), v);
      if (Visit(t + 1)) return true;
      dec_.erase(std::find(dec_.begin(), dec_.end(), v));
      return false;
    };

    // An extension that leaves the chain's relation to the rest of the suffix
    // unchanged dominates every other move.
    if (inc_extend) {
      const int last =
          *(std::upper_bound(inc_.begin(), inc_.end(), v) - 1);
      if (Less(t + 1, v) == Less(t + 1, last)) {
        if (try_inc()) return true;
        Fail(std::move(key), inc_live);
        return false;
      }
    }
    if (dec_extend) {
      const int last = *std::lower_bound(dec_.begin(), dec_.end(), v);
      if (Less(t + 1, v + 1) == Less(t + 1, last + 1)) {
        if (try_dec()) return true;
        Fail(std::move(key), inc_live);
        return false;
      }
    }

    bool ok;
    if (!inc_extend && dec_extend) {
      ok = try_dec() || (!exhausted_ && try_inc());
    } else {
      ok = try_inc() || (!exhausted_ && try_dec());
    }
    if (ok) return true;
    Fail(std::move(key), inc_live);
    return false;
  }

  // Header: t, opened counts, live counts. Body: the two sorted count runs.
  static std::u16string Header(const std::u16string& key, int inc_live) {
    std::u16string h = key.substr(0, 3);
    h.push_back(static_cast<char16_t>(inc_live));
    h.push_back(static_cast<char16_t>(key.size() - 4 - inc_live));
    return h;
  }

  void Fail(std::u16string key, int inc_live) {
    if (exhausted_) return;
    auto& bucket = recent_[Header(key, inc_live)];
    if (bucket.size() == kRecent) bucket.erase(bucket.begin());
    bucket.push_back(key);
    failed_.insert(std::move(key));
  }

  // A failed state whose chains are each at least as accepting, with the same
  // opened and live counts, rules this one out. Non-decreasing runs hold
  // "below + 1" (smaller accepts more), non-increasing runs hold "at most"
  // (larger accepts more); both runs are sorted ascending.
  bool Subsumed(const std::u16string& key, int inc_live) const {
    const auto it = recent_.find(Header(key, inc_live));
    if (it == recent_.end()) return false;
    const std::size_t split = 4 + static_cast<std::size_t>(inc_live);
    for (const std::u16string& f : it->second) {
      bool dominated = true;
      for (std::size_t i = 3; i < split - 1 && dominated; ++i) {
        dominated = f[i] <= key[i];
      }
      for (std::size_t i = split; i < key.size() && dominated; ++i) {
        dominated = f[i] >= key[i];
      }
      if (dominated) return true;
    }
    return false;
  }

  const std::vector<int>& ranks_;
  const SuffixShapes& shapes_;
  const int d_;
  const std::vector<char>& viable_;
  const std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::size_t stride_ = 0;
  std::vector<int> less_;
  std::vector<int> inc_;  // lasts of non-decreasing chains, ascending
  std::vector<int> dec_;  // lasts of non-increasing chains, ascending
  static constexpr std::size_t kRecent = 8;
  std::unordered_set<std::u16string> failed_;
  std::unordered_map<std::u16string, std::vector<std::u16string>> recent_;
  bool exhausted_ = false;
};

// Drops splits (a, d - a) that some window of the sequence rules out: every
// subsequence must itself fit a non-decreasing and d - a non-increasing
// chains. Windows are position intervals and value intervals.
void FilterSplitsByWindows(const std::vector<int>& ranks, int d,
                           std::vector<char>& viable) {
  const std::size_t m = ranks.size();
  std::vector<int> inc_u, dec_u;
  auto check = [&](int len) {
    for (int a = 0; a <= d; ++a) {
      if (viable[a] && inc_u[a] + dec_u[d - a] < len) viable[a] = 0;
    }
  };
  auto any = [&] {
    return std::find(viable.begin(), viable.end(), 1) != viable.end();
  };
  // Position windows [s, e).
  for (std::size_t s = 0; s < m && any(); ++s) {
    RskRows inc, dec;
    for (std::size_t e = s; e < m; ++e) {
      inc.Insert(ranks[e]);
      dec.Insert(-ranks[e]);
      const int len = static_cast<int>(e - s + 1);
      if (len <= d) continue;
      inc.Unions(d, inc_u);
      dec.Unions(d, dec_u);
      check(len);
    }
  }
  // Value windows [lo, hi]. Seen along the value axis, a non-decreasing chain
  // is increasing in position when equal values are taken by ascending
  // position, and a non-increasing chain is decreasing in position when they
  // are taken by descending position.
  std::vector<std::size_t> asc(m), desc(m);
  for (std::size_t i = 0; i < m; ++i) asc[i] = desc[i] = i;
  std::sort(asc.begin(), asc.end(), [&](std::size_t x, std::size_t y) {
    return ranks[x] != ranks[y] ? ranks[x] < ranks[y] : x < y;
  });
  std::sort(desc.begin(), desc.end(), [&](std::size_t x, std::size_t y) {
    return ranks[x] != ranks[y] ? ranks[x] < ranks[y] : x > y;
  });
  const int top = m == 0 ? 0 : ranks[asc.back()];
  std::vector<std::size_t> start(static_cast<std::size_t>(top) + 2, m);
  for (std::size_t k = m; k-- > 0;) start[ranks[asc[k]]] = k;
  for (int lo = 0; lo <= top && any(); ++lo) {
    const std::size_t from = start[lo];
    if (from == m) continue;
    RskRows inc, dec;
    for (std::size_t k = from; k < m; ++k) {
      inc.Insert(static_cast<int>(asc[k]));
      dec.Insert(-static_cast<int>(desc[k]));
      // Only complete value classes form a window.
      if (k + 1 < m && ranks[asc[k + 1]] == ranks[asc[k]]) continue;
      const int len = static_cast<int>(k - from + 1);
      if (len <= d) continue;
      inc.Unions(d, inc_u);
      dec.Unions(d, dec_u);
      check(len);
    }
  }
}

bool AtMost(const std::vector<int>& ranks, int d, int greedy,
            const MonotoneSearchOptions& options) {
  const int m = static_cast<int>(ranks.size());
  if (d >= m) return true;
  if (d <= 0) return false;
  if (greedy <= d) return true;
  if (ShapeLowerBound(ranks) > d) return false;

  std::vector<char> viable(static_cast<std::size_t>(d) + 1, 1);
  FilterSplitsByWindows(ranks, d, viable);
  if (std::find(viable.begin(), viable.end(), 1) == viable.end()) return false;
  const SuffixShapes shapes(ranks);
  ChainSearch search(ranks, shapes, d, viable, options.node_budget);
  const bool found = search.Run();
  if (search.exhausted()) throw SearchBudgetExceeded(greedy, search.nodes());
  return found;
}

}  // namespace

int greedy_monotone_cover(std::span<const double> seq) {
  return GreedyCover(DenseRanks(seq));
}

int shape_lower_bound(std::span<const double> seq) {
  return ShapeLowerBound(DenseRanks(seq));
}

bool monotone_partition_at_most(std::span<const double> seq, int d,
                                const MonotoneSearchOptions& options) {
  const std::vector<int> ranks = DenseRanks(seq);
  if (d >= static_cast<int>(ranks.size())) return true;
  return AtMost(ranks, d, GreedyCover(ranks), options);
}

int monotone_partition_size(std::span<const double> seq,
                            const MonotoneSearchOptions& options) {
  const std::vector<int> ranks = DenseRanks(seq);
  if (ranks.empty()) return 0;
  const int greedy = GreedyCover(ranks);
  // Iterative deepening between the two bounds.
  for (int d = std::max(1, ShapeLowerBound(ranks)); d < greedy; ++d) {
    if (AtMost(ranks, d, greedy, options)) return d;
  }
  return greedy;
}

}  // namespace sisort
