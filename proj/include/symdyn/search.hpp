#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <type_traits>
#include <vector>

#include "symdyn/subshift.hpp"

namespace symdyn {

struct SearchLimits {
  std::uint64_t node_limit = 200'000'000;
  std::uint64_t state_limit = 20'000'000;
};

namespace detail {

// Forbidden-pattern occurrences that fit the window, as flat (cell slot, symbol) lists.
struct InstanceTable {
  std::vector<std::size_t> begin{0};
  std::vector<int> cell;
  std::vector<SymbolMask> mask;
  std::size_t size() const { return begin.size() - 1; }
};

template <LatticeElement G>
InstanceTable build_instances(const Sft<G>& sft, const FiniteSet<G>& window, const DenseIndex<G>& idx,
                              BoundaryMode mode) {
  InstanceTable t;
  std::vector<std::pair<int, SymbolMask>> cells;
  for (const auto& p : sft.forbidden()) {
    const G anchor = p.shape()[0];
    for (const G& w : window) {
      G g = w - anchor;
      cells.clear();
      bool ok = true;
      for (std::size_t i = 0; i < p.size() && ok; ++i) {
        G x = p.shape()[i] + g;
        long s = idx.find(x);
        if (s < 0 && mode == BoundaryMode::periodic) s = idx.find(idx.wrap(x));
        if (s < 0) ok = false;
        else cells.emplace_back(static_cast<int>(s), p.masks()[i]);
      }
      if (!ok) continue;
      // Wrapped cells may coincide; intersect their masks.
      std::sort(cells.begin(), cells.end());
      std::vector<std::pair<int, SymbolMask>> merged;
      for (auto& c : cells) {
        if (!merged.empty() && merged.back().first == c.first) merged.back().second &= c.second;
        else merged.push_back(c);
      }
      if (std::any_of(merged.begin(), merged.end(), [](auto& c) { return c.second == 0; })) continue;
      for (auto [c, m] : merged) {
        t.cell.push_back(c);
        t.mask.push_back(m);
      }
      t.begin.push_back(t.cell.size());
    }
  }
  return t;
}

// Depth-first search over an arbitrary window.
template <LatticeElement G>
class DfsEngine {
 public:
  DfsEngine(const InstanceTable& inst, const std::vector<std::vector<Symbol>>& domains,
            std::vector<int> order, const SearchLimits& lim)
      : inst_(inst), dom_(domains), order_(std::move(order)), lim_(lim) {
    const std::size_t n = dom_.size();
    pos_.assign(n, 0);
    for (std::size_t k = 0; k < order_.size(); ++k) pos_[static_cast<std::size_t>(order_[k])] = static_cast<int>(k);
    bucket_.assign(n + 1, {});
    for (std::size_t i = 0; i < inst_.size(); ++i) {
      bool live = true;
      int last = -1;
      for (std::size_t j = inst_.begin[i]; j < inst_.begin[i + 1]; ++j) {
        const auto& d = dom_[static_cast<std::size_t>(inst_.cell[j])];
        if (std::none_of(d.begin(), d.end(), [&](Symbol a) { return (inst_.mask[j] >> a) & 1U; })) {
          live = false;
          break;
        }
        last = std::max(last, pos_[static_cast<std::size_t>(inst_.cell[j])]);
      }
      if (live) bucket_[static_cast<std::size_t>(last)].push_back(static_cast<int>(i));
    }
    val_.assign(n, -1);
  }

  // visit(labels) returns true to continue. Returns false if stopped by the visitor.
  template <class Visit>
  bool run(Visit&& visit, std::mt19937_64* rng = nullptr) {
    for (const auto& d : dom_)
      if (d.empty()) return true;
    return dfs(0, visit, rng);
  }
  std::uint64_t nodes() const { return nodes_; }

 private:
  bool conflict(std::size_t k) const {
    for (int i : bucket_[k]) {
      bool match = true;
      for (std::size_t j = inst_.begin[static_cast<std::size_t>(i)]; j < inst_.begin[static_cast<std::size_t>(i) + 1]; ++j)
        if (!((inst_.mask[j] >> val_[static_cast<std::size_t>(inst_.cell[j])]) & 1U)) {
          match = false;
          break;
        }
      if (match) return true;
    }
    return false;
  }

  template <class Visit>
  bool dfs(std::size_t k, Visit& visit, std::mt19937_64* rng) {
    if (k == order_.size()) return visit(val_);
    const auto cell = static_cast<std::size_t>(order_[k]);
    std::vector<Symbol> cand = dom_[cell];
    if (rng) seeded_shuffle(cand, *rng);
    for (Symbol s : cand) {
      if (++nodes_ > lim_.node_limit) throw ResourceError("search: node limit exceeded");
      val_[cell] = s;
      if (!conflict(k) && !dfs(k + 1, visit, rng)) {
        val_[cell] = -1;
        return false;
      }
    }
    val_[cell] = -1;
    return true;
  }

  const InstanceTable& inst_;
  const std::vector<std::vector<Symbol>>& dom_;
  std::vector<int> order_;
  std::vector<int> pos_;
  std::vector<std::vector<int>> bucket_;
  std::vector<Symbol> val_;
  SearchLimits lim_;
  std::uint64_t nodes_ = 0;
};

// Transfer dynamic programme along a finite subset of Z (free boundary).
// Count is the completion-count type (floating for sampling, exact for ranking).
template <class Count>
class BasicLineEngine {
 public:
  BasicLineEngine(const Sft<Z1>& sft, const FiniteSet<Z1>& window, const std::vector<std::vector<Symbol>>& domains,
             const SearchLimits& lim)
      : n_(window.size()), a_(static_cast<std::uint64_t>(sft.alphabet().size())), dom_(domains) {
    int span = 0;
    span = sft.span();
    lo_.assign(n_ + 1, 0);
    std::size_t lo = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      while (window[lo][0] < window[i][0] - span) ++lo;
      lo_[i] = lo;
    }
    lo_[n_] = n_;
    std::size_t maxw = 0;
    for (std::size_t i = 0; i <= n_; ++i) maxw = std::max(maxw, i - lo_[i]);
    pow_.assign(maxw + 2, 1);
    for (std::size_t i = 1; i < pow_.size(); ++i) {
      if (pow_[i - 1] > UINT64_MAX / a_) throw ResourceError("line search: state space too large");
      pow_[i] = pow_[i - 1] * a_;
    }
    // Instances anchored at their last cell.
    checks_.assign(n_, {});
    DenseIndex<Z1> idx(window);
    for (const auto& p : sft.forbidden()) {
      const int last = p.shape().upper()[0];
      for (std::size_t i = 0; i < n_; ++i) {
        Check c;
        c.last = p.masks().back();
        bool ok = true;
        for (std::size_t j = 0; j + 1 < p.size() && ok; ++j) {
          long s = idx.find(Z1{window[i][0] + p.shape()[j][0] - last});
          if (s < 0) ok = false;
          else c.prev.emplace_back(static_cast<std::size_t>(s) - lo_[i], p.masks()[j]);
        }
        if (ok) checks_[i].push_back(std::move(c));
      }
    }
    // Forward reachable states.
    states_.assign(n_ + 1, {});
    states_[0] = {0};
    for (std::size_t i = 0; i < n_; ++i) {
      std::vector<std::uint64_t> nxt;
      for (std::uint64_t s : states_[i])
        for (Symbol a : dom_[i])
          if (allowed(i, s, a)) nxt.push_back(advance(i, s, a));
      std::sort(nxt.begin(), nxt.end());
      nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
      nstates_ += nxt.size();
      if (nstates_ > lim.state_limit) throw ResourceError("line search: state limit exceeded");
      states_[i + 1] = std::move(nxt);
    }
    // Backward completion counts.
    count_.assign(n_ + 1, {});
    count_[n_].assign(states_[n_].size(), Count(1));
    for (std::size_t i = n_; i-- > 0;) {
      count_[i].assign(states_[i].size(), Count(0));
      for (std::size_t k = 0; k < states_[i].size(); ++k) {
        Count c = 0;
        for (Symbol a : dom_[i])
          if (allowed(i, states_[i][k], a)) c += count_at(i + 1, advance(i, states_[i][k], a));
        count_[i][k] = c;
      }
    }
  }

  bool feasible() const { return !count_[0].empty() && count_[0][0] > 0; }
  Count total() const { return count_[0].empty() ? Count(0) : count_[0][0]; }

  std::optional<std::vector<Symbol>> first() const { return walk(nullptr); }
  std::optional<std::vector<Symbol>> sample(std::mt19937_64& rng) const { return walk(&rng); }

  // Position of v among all solutions in lexicographic order.
  std::optional<Count> rank(const std::vector<Symbol>& v) const {
    if (v.size() != n_ || !feasible()) return std::nullopt;
    Count r = 0;
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (std::find(dom_[i].begin(), dom_[i].end(), v[i]) == dom_[i].end() || !allowed(i, s, v[i]))
        return std::nullopt;
      for (Symbol a : dom_[i])
        if (a < v[i] && allowed(i, s, a)) r += count_at(i + 1, advance(i, s, a));
      s = advance(i, s, v[i]);
      if (count_at(i + 1, s) == 0) return std::nullopt;
    }
    return r;
  }

  // Inverse of rank; r must be below total().
  std::vector<Symbol> unrank(Count r) const {
    if (!(r < total()) || r < 0) throw PreconditionError("unrank: index out of range");
    std::vector<Symbol> out(n_);
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      std::vector<Symbol> cand = dom_[i];
      std::sort(cand.begin(), cand.end());
      bool placed = false;
      for (Symbol a : cand) {
        if (!allowed(i, s, a)) continue;
        Count c = count_at(i + 1, advance(i, s, a));
        if (r < c) {
          out[i] = a;
          s = advance(i, s, a);
          placed = true;
          break;
        }
        r -= c;
      }
      if (!placed) throw InvariantError("unrank: counts inconsistent");
    }
    return out;
  }

  // States before cell i that admit a completion.
  std::vector<std::uint64_t> viable(std::size_t i) const {
    std::vector<std::uint64_t> out;
    for (std::size_t k = 0; k < states_[i].size(); ++k)
      if (count_[i][k] > 0) out.push_back(states_[i][k]);
    return out;
  }
  // Viable successors of the given states when cell i takes a symbol from mask.
  std::vector<std::uint64_t> successors(std::size_t i, const std::vector<std::uint64_t>& from, SymbolMask mask) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t s : from)
      for (Symbol a : dom_[i]) {
        if (!((mask >> a) & 1U) || !allowed(i, s, a)) continue;
        std::uint64_t t = advance(i, s, a);
        if (count_at(i + 1, t) > 0) out.push_back(t);
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  template <class Visit>
  bool enumerate(Visit&& visit) const {
    if (!feasible()) return true;
    std::vector<Symbol> val(n_, -1);
    return enum_rec(0, 0, val, visit);
  }

 private:
  struct Check {
    std::vector<std::pair<std::size_t, SymbolMask>> prev;
    SymbolMask last = 0;
  };

  std::size_t width(std::size_t i) const { return i - lo_[i]; }
  Symbol digit(std::size_t i, std::uint64_t s, std::size_t slot) const {
    return static_cast<Symbol>((s / pow_[width(i) - 1 - slot]) % a_);
  }
  bool allowed(std::size_t i, std::uint64_t s, Symbol a) const {
    for (const auto& c : checks_[i]) {
      if (!((c.last >> a) & 1U)) continue;
      bool match = true;
      for (auto [slot, m] : c.prev)
        if (!((m >> digit(i, s, slot)) & 1U)) {
          match = false;
          break;
        }
      if (match) return false;
    }
    return true;
  }
  std::uint64_t advance(std::size_t i, std::uint64_t s, Symbol a) const {
    std::size_t w1 = (i + 1) - lo_[i + 1];
    if (w1 == 0) return 0;
    std::uint64_t kept = s % pow_[w1 - 1];
    return kept * a_ + static_cast<std::uint64_t>(a);
  }
  Count count_at(std::size_t i, std::uint64_t s) const {
    auto it = std::lower_bound(states_[i].begin(), states_[i].end(), s);
    if (it == states_[i].end() || *it != s) return Count(0);
    return count_[i][static_cast<std::size_t>(it - states_[i].begin())];
  }

  std::optional<std::vector<Symbol>> walk(std::mt19937_64* rng) const {
    if (!feasible()) return std::nullopt;
    std::vector<Symbol> out(n_);
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      std::vector<std::pair<Symbol, long double>> opts;
      for (Symbol a : dom_[i])
        if (allowed(i, s, a)) {
          Count c = count_at(i + 1, advance(i, s, a));
          if (c > 0) opts.emplace_back(a, static_cast<long double>(c));
        }
      std::sort(opts.begin(), opts.end());
      Symbol pick = opts.front().first;
      if (rng) {
        long double tot = 0;
        for (auto& o : opts) tot += o.second;
        long double u = static_cast<long double>((*rng)() >> 11) / 9007199254740992.0L * tot;
        for (auto& o : opts) {
          pick = o.first;
          if (u < o.second) break;
          u -= o.second;
        }
      }
      out[i] = pick;
      s = advance(i, s, pick);
    }
    return out;
  }

  template <class Visit>
  bool enum_rec(std::size_t i, std::uint64_t s, std::vector<Symbol>& val, Visit& visit) const {
    if (i == n_) return visit(val);
    std::vector<Symbol> cand = dom_[i];
    std::sort(cand.begin(), cand.end());
    for (Symbol a : cand) {
      if (!allowed(i, s, a)) continue;
      std::uint64_t t = advance(i, s, a);
      if (count_at(i + 1, t) <= 0) continue;
      val[i] = a;
      if (!enum_rec(i + 1, t, val, visit)) return false;
    }
    return true;
  }

  std::size_t n_;
  std::uint64_t a_;
  std::vector<std::vector<Symbol>> dom_;
  std::vector<std::size_t> lo_;
  std::vector<std::uint64_t> pow_;
  std::vector<std::vector<Check>> checks_;
  std::vector<std::vector<std::uint64_t>> states_;
  std::vector<std::vector<Count>> count_;
  std::size_t nstates_ = 0;
};

using LineEngine = BasicLineEngine<long double>;

}  // namespace detail

// Completion search for an SFT on a window with per-cell domain restrictions.
// Windows in Z with free boundary use an exact transfer programme; other windows use DFS.
template <LatticeElement G>
class Search {
 public:
  Search(const Sft<G>& sft, FiniteSet<G> window, BoundaryMode mode = BoundaryMode::free,
         SearchLimits limits = {})
      : sft_(sft), window_(std::move(window)), mode_(mode), lim_(limits), idx_(window_) {
    if (mode_ == BoundaryMode::periodic && !window_.empty() && !idx_.is_box())
      throw PreconditionError("Search: periodic mode needs a box window");
    std::vector<Symbol> all(static_cast<std::size_t>(sft_.alphabet().size()));
    std::iota(all.begin(), all.end(), 0);
    dom_.assign(window_.size(), all);
    fixed_.assign(window_.size(), false);
  }

  const FiniteSet<G>& window() const { return window_; }

  void fix(const G& g, Symbol s) { restrict(g, std::vector<Symbol>{s}); }
  void fix(const Pattern<G>& p) {
    for (std::size_t i = 0; i < p.size(); ++i) fix(p.shape()[i], p.labels()[i]);
  }
  // Fix cells of p that lie in the window; ignore the rest.
  void fix_inside(const Pattern<G>& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (idx_.contains(p.shape()[i])) fix(p.shape()[i], p.labels()[i]);
  }
  void restrict(const G& g, const std::vector<Symbol>& allowed) {
    long s = idx_.find(g);
    if (s < 0) throw PreconditionError("Search: constrained cell outside window");
    auto& d = dom_[static_cast<std::size_t>(s)];
    std::vector<Symbol> nd;
    for (Symbol a : d)
      if (std::find(allowed.begin(), allowed.end(), a) != allowed.end()) nd.push_back(a);
    d = std::move(nd);
    fixed_[static_cast<std::size_t>(s)] = true;
  }

  // Lexicographically least solution in canonical window order.
  std::optional<Configuration<G>> first() {
    std::optional<std::vector<Symbol>> r;
    if (use_line()) {
      r = line().first();
    } else {
      run_dfs(canonical_order(), [&](const std::vector<Symbol>& v) {
        r = v;
        return false;
      });
    }
    if (!r) return std::nullopt;
    return Configuration<G>(window_, std::move(*r), mode_);
  }

  bool exists() {
    if (use_line()) return line().feasible();
    bool found = false;
    run_dfs(fixed_first_order(), [&](const std::vector<Symbol>&) {
      found = true;
      return false;
    });
    return found;
  }

  std::optional<Configuration<G>> sample(std::mt19937_64& rng) {
    std::optional<std::vector<Symbol>> r;
    if (use_line()) {
      r = line().sample(rng);
    } else {
      run_dfs(fixed_first_order(), [&](const std::vector<Symbol>& v) {
        r = v;
        return false;
      }, &rng);
    }
    if (!r) return std::nullopt;
    return Configuration<G>(window_, std::move(*r), mode_);
  }

  // All solutions in lexicographic order; visit(labels) returns false to stop.
  template <class Visit>
  void for_each(Visit&& visit) {
    if (use_line()) {
      line().enumerate(visit);
      return;
    }
    run_dfs(canonical_order(), visit);
  }

  std::uint64_t count(std::uint64_t cap = UINT64_MAX) {
    std::uint64_t n = 0;
    for_each([&](const std::vector<Symbol>&) {
      if (++n > cap) throw ResourceError("search: solution count exceeds cap");
      return true;
    });
    return n;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  bool use_line() const {
    if constexpr (std::is_same_v<G, Z1>) return mode_ == BoundaryMode::free;
    return false;
  }

  const detail::LineEngine& line() {
    if constexpr (std::is_same_v<G, Z1>) {
      line_.emplace(sft_, window_, dom_, lim_);
      return *line_;
    } else {
      throw InvariantError("line engine requested off Z");
    }
  }

  template <class Visit>
  void run_dfs(std::vector<int> order, Visit&& visit, std::mt19937_64* rng = nullptr) {
    if (!inst_) inst_ = detail::build_instances(sft_, window_, idx_, mode_);
    detail::DfsEngine<G> eng(*inst_, dom_, std::move(order), lim_);
    eng.run(visit, rng);
    nodes_ += eng.nodes();
  }

  std::vector<int> canonical_order() const {
    std::vector<int> o(window_.size());
    std::iota(o.begin(), o.end(), 0);
    return o;
  }

  // Constrained cells first, then free cells by distance to the constrained region.
  std::vector<int> fixed_first_order() const {
    std::vector<G> anchors;
    for (std::size_t i = 0; i < window_.size(); ++i)
      if (fixed_[i]) anchors.push_back(window_[i]);
    std::vector<std::pair<int, int>> key(window_.size());
    for (std::size_t i = 0; i < window_.size(); ++i) {
      int d = 0;
      if (!fixed_[i]) {
        d = anchors.empty() ? 0 : INT32_MAX;
        for (const G& a : anchors) d = std::min(d, linf_distance(a, window_[i]));
      }
      key[i] = {d, static_cast<int>(i)};
    }
    std::sort(key.begin(), key.end());
    std::vector<int> o;
    o.reserve(key.size());
    for (auto& k : key) o.push_back(k.second);
    return o;
  }

  Sft<G> sft_;
  FiniteSet<G> window_;
  BoundaryMode mode_;
  SearchLimits lim_;
  DenseIndex<G> idx_;
  std::vector<std::vector<Symbol>> dom_;
  std::vector<bool> fixed_;
  std::optional<detail::InstanceTable> inst_;
  std::optional<detail::LineEngine> line_;
  std::uint64_t nodes_ = 0;
};

}  // namespace symdyn
