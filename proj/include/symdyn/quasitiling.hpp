#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "symdyn/search.hpp"
#include "symdyn/subshift.hpp"

namespace symdyn {

// Ordered list of tile shapes, each containing e, no two translates of each other.
template <LatticeElement G>
class ShapeSet {
 public:
  ShapeSet() = default;
  explicit ShapeSet(std::vector<FiniteSet<G>> shapes) : shapes_(std::move(shapes)) {
    if (shapes_.empty()) throw PreconditionError("ShapeSet: needs at least one shape");
    for (auto& s : shapes_) {
      if (!s.contains_identity()) throw PreconditionError("ShapeSet: every shape must contain e");
      s = s.with_role(Role::s_tile_shape);
    }
    for (std::size_t i = 0; i < shapes_.size(); ++i)
      for (std::size_t j = i + 1; j < shapes_.size(); ++j)
        if (shapes_[i].size() == shapes_[j].size() &&
            translate(shapes_[i], shapes_[j][0] - shapes_[i][0]) == shapes_[j])
          throw PreconditionError("ShapeSet: shapes are not shift-irreducible");
    order_.resize(shapes_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return shapes_[static_cast<std::size_t>(a)].size() > shapes_[static_cast<std::size_t>(b)].size(); });
    round_.assign(shapes_.size(), 0);
    for (std::size_t r = 0; r < order_.size(); ++r) round_[static_cast<std::size_t>(order_[r])] = static_cast<int>(r);
  }

  std::size_t size() const { return shapes_.size(); }
  const FiniteSet<G>& operator[](std::size_t i) const { return shapes_[i]; }
  const std::vector<FiniteSet<G>>& shapes() const { return shapes_; }
  // Shape indices largest first (ties by index).
  const std::vector<int>& placement_order() const { return order_; }
  int round_of(int index) const { return round_[static_cast<std::size_t>(index)]; }
  FiniteSet<G> union_all() const {
    FiniteSet<G> u;
    for (const auto& s : shapes_) u = unite(u, s);
    return u;
  }

 private:
  std::vector<FiniteSet<G>> shapes_;
  std::vector<int> order_;
  std::vector<int> round_;
};

template <LatticeElement G>
struct Tile {
  G center{};
  int shape_index = 0;
  int round = 0;
  FiniteSet<G> shape;  // relative to the center

  FiniteSet<G> cells() const { return translate(shape, center); }
};

// Tiles listed in placement order; tiles of equal round are pairwise disjoint when produced by dh_tile.
template <LatticeElement G>
class QuasiTiling {
 public:
  QuasiTiling() = default;
  QuasiTiling(ShapeSet<G> shapes, FiniteSet<G> window, std::vector<Tile<G>> tiles)
      : shapes_(std::move(shapes)), window_(std::move(window)), tiles_(std::move(tiles)) {
    std::vector<G> cs;
    std::vector<FiniteSet<G>> cells;
    for (const auto& t : tiles_) {
      if (t.shape_index < 0 || static_cast<std::size_t>(t.shape_index) >= shapes_.size())
        throw PreconditionError("QuasiTiling: shape index out of range");
      cs.push_back(t.center);
      cells.push_back(t.cells());
    }
    centers_ = FiniteSet<G>(cs);
    if (centers_.size() != tiles_.size()) throw PreconditionError("QuasiTiling: repeated center");
    std::sort(cells.begin(), cells.end());
    if (std::adjacent_find(cells.begin(), cells.end()) != cells.end())
      throw PreconditionError("QuasiTiling: (S, c) -> Sc is not injective");
  }

  const ShapeSet<G>& shapes() const { return shapes_; }
  const FiniteSet<G>& window() const { return window_; }
  const std::vector<Tile<G>>& tiles() const { return tiles_; }
  const FiniteSet<G>& centers() const { return centers_; }
  std::size_t size() const { return tiles_.size(); }

  const Tile<G>* find(const G& c) const {
    for (const auto& t : tiles_)
      if (t.center == c) return &t;
    return nullptr;
  }
  FiniteSet<G> covered() const {
    std::vector<G> v;
    for (const auto& t : tiles_)
      for (const G& x : t.shape) v.push_back(x + t.center);
    return FiniteSet<G>(std::move(v));
  }

 private:
  ShapeSet<G> shapes_;
  FiniteSet<G> window_;
  std::vector<Tile<G>> tiles_;
  FiniteSet<G> centers_;
};

template <LatticeElement G>
struct Retraction {
  QuasiTiling<G> base;
  std::vector<Tile<G>> tiles;  // retracted shapes, nonempty, in base placement order
  std::vector<G> dropped;      // centers whose retracted shape was empty

  FiniteSet<G> centers() const {
    std::vector<G> v;
    for (const auto& t : tiles) v.push_back(t.center);
    return FiniteSet<G>(std::move(v));
  }
  FiniteSet<G> covered() const {
    std::vector<G> v;
    for (const auto& t : tiles)
      for (const G& x : t.shape) v.push_back(x + t.center);
    return FiniteSet<G>(std::move(v));
  }
  const Tile<G>* find(const G& c) const {
    for (const auto& t : tiles)
      if (t.center == c) return &t;
    return nullptr;
  }
};

enum class CandidateOrder { sequential, seeded, configuration_hash };

template <LatticeElement G>
struct TilerOptions {
  Rational eps{1, 10};
  CandidateOrder order = CandidateOrder::seeded;
  std::uint64_t seed = 0;
  const Configuration<G>* source = nullptr;  // configuration_hash only
  int hash_radius = 1;
  FiniteSet<G> clearance;  // when nonempty, clearance + c must lie in the window
};

namespace detail {

inline std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFFU;
    h *= 1099511628211ULL;
  }
  return h;
}

template <LatticeElement G>
std::vector<G> candidate_order(const FiniteSet<G>& window, const TilerOptions<G>& opt) {
  std::vector<G> cand = window.elements();
  switch (opt.order) {
    case CandidateOrder::sequential:
      break;
    case CandidateOrder::seeded: {
      std::mt19937_64 rng(opt.seed);
      seeded_shuffle(cand, rng);
      break;
    }
    case CandidateOrder::configuration_hash: {
      if (!opt.source) throw PreconditionError("dh_tile: configuration_hash order needs a source configuration");
      auto nb = centered_box<G>(opt.hash_radius);
      std::vector<std::pair<std::uint64_t, G>> keyed;
      keyed.reserve(cand.size());
      for (const G& c : cand) {
        std::uint64_t h = 1469598103934665603ULL;
        for (const G& d : nb) {
          long s = opt.source->slot(c + d);
          h = fnv_mix(h, s < 0 ? 0xFFFFULL : static_cast<std::uint64_t>(opt.source->labels()[static_cast<std::size_t>(s)]));
        }
        keyed.emplace_back(h, c);
      }
      std::sort(keyed.begin(), keyed.end());
      for (std::size_t i = 0; i < keyed.size(); ++i) cand[i] = keyed[i].second;
      break;
    }
  }
  return cand;
}

template <LatticeElement G>
bool fits(const FiniteSet<G>& s, const G& c, const DenseIndex<G>& w) {
  for (const G& x : s)
    if (!w.contains(x + c)) return false;
  return true;
}

}  // namespace detail

// Greedy tiler: shapes largest first; a candidate center is accepted if its tile fits the window,
// the centers stay L-separated, it is disjoint from tiles of its own round, and it loses less than
// eps|S| to tiles of earlier rounds.
template <LatticeElement G>
QuasiTiling<G> dh_tile(const ShapeSet<G>& shapes, const FiniteSet<G>& l, const FiniteSet<G>& window,
                       const TilerOptions<G>& opt) {
  std::vector<Tile<G>> tiles;
  if (window.empty()) return QuasiTiling<G>(shapes, window, {});
  DenseIndex<G> widx(window);
  const auto n = window.size();
  std::vector<char> prev(n, 0), cur(n, 0), blocked(n, 0);
  std::vector<std::size_t> slots;
  auto sep = difference_set(l);
  auto cand = detail::candidate_order(window, opt);
  for (int idx : shapes.placement_order()) {
    const auto& s = shapes[static_cast<std::size_t>(idx)];
    const int round = shapes.round_of(idx);
    std::fill(cur.begin(), cur.end(), 0);
    for (const G& c : cand) {
      long cs = widx.find(c);
      if (blocked[static_cast<std::size_t>(cs)]) continue;
      if (!detail::fits(s, c, widx)) continue;
      if (!opt.clearance.empty() && !detail::fits(opt.clearance, c, widx)) continue;
      std::int64_t loss = 0;
      bool clash = false;
      slots.clear();
      for (const G& x : s) {
        auto k = static_cast<std::size_t>(widx.find(x + c));
        if (cur[k]) {
          clash = true;
          break;
        }
        loss += prev[k];
        slots.push_back(k);
      }
      if (clash) continue;
      if (!(Rational(loss) < opt.eps * static_cast<std::int64_t>(s.size()))) continue;
      for (std::size_t k : slots) cur[k] = 1;
      for (const G& d : sep) {
        long b = widx.find(c + d);
        if (b >= 0) blocked[static_cast<std::size_t>(b)] = 1;
      }
      tiles.push_back({c, idx, round, s});
    }
    for (std::size_t k = 0; k < n; ++k) prev[k] |= cur[k];
  }
  return QuasiTiling<G>(shapes, window, std::move(tiles));
}

// A (shape index, center) that could still be inserted, or nullopt if the tiling is maximal.
template <LatticeElement G>
std::optional<std::pair<int, G>> find_insertion(const QuasiTiling<G>& t, const FiniteSet<G>& l, const Rational& eps,
                                                const FiniteSet<G>& clearance = {}) {
  const auto& w = t.window();
  DenseIndex<G> widx(w);
  auto sep = difference_set(l);
  for (std::size_t idx = 0; idx < t.shapes().size(); ++idx) {
    const auto& s = t.shapes()[idx];
    const int round = t.shapes().round_of(static_cast<int>(idx));
    std::vector<char> earlier(w.size(), 0), same(w.size(), 0);
    for (const auto& tile : t.tiles())
      for (const G& x : tile.cells()) {
        long k = widx.find(x);
        if (k < 0) continue;
        if (tile.round < round) earlier[static_cast<std::size_t>(k)] = 1;
        else if (tile.round == round) same[static_cast<std::size_t>(k)] = 1;
      }
    for (const G& c : w) {
      if (t.centers().contains(c)) continue;
      if (!detail::fits(s, c, widx)) continue;
      if (!clearance.empty() && !detail::fits(clearance, c, widx)) continue;
      bool ok = true;
      for (const G& d : sep)
        if (!d.is_identity() && t.centers().contains(c + d)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      std::int64_t loss = 0;
      for (const G& x : s) {
        auto k = static_cast<std::size_t>(widx.find(x + c));
        if (same[k]) ok = false;
        loss += earlier[k];
      }
      if (ok && Rational(loss) < eps * static_cast<std::int64_t>(s.size())) return std::make_pair(static_cast<int>(idx), c);
    }
  }
  return std::nullopt;
}

// ret(t)(c) = t(c) minus the union of tiles of earlier rounds, translated back by c.
template <LatticeElement G>
Retraction<G> retract(const QuasiTiling<G>& t) {
  Retraction<G> r;
  r.base = t;
  std::vector<const Tile<G>*> order;
  for (const auto& x : t.tiles()) order.push_back(&x);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->round < b->round; });
  std::vector<G> earlier;
  FiniteSet<G> earlier_set;
  std::map<G, FiniteSet<G>> ret;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::vector<G> this_round;
    while (j < order.size() && order[j]->round == order[i]->round) {
      const auto* tile = order[j];
      auto cells = minus(tile->cells(), earlier_set);
      ret[tile->center] = translate(cells, -tile->center);
      for (const G& x : tile->cells()) this_round.push_back(x);
      ++j;
    }
    earlier_set = unite(earlier_set, FiniteSet<G>(std::move(this_round)));
    i = j;
  }
  for (const auto& tile : t.tiles()) {
    auto& s = ret[tile.center];
    if (s.empty()) {
      r.dropped.push_back(tile.center);
      continue;
    }
    r.tiles.push_back({tile.center, tile.shape_index, tile.round, s});
  }
  return r;
}

template <LatticeElement G>
bool pairwise_disjoint(const std::vector<Tile<G>>& tiles) {
  std::vector<G> all;
  for (const auto& t : tiles)
    for (const G& x : t.shape) all.push_back(x + t.center);
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

template <LatticeElement G>
struct DisjointnessViolation {
  G center{};
  std::size_t lost = 0;
  std::size_t size = 0;
};

template <LatticeElement G>
struct EpsDisjointReport {
  bool pass = true;
  std::vector<DisjointnessViolation<G>> violators;
};

// |t(c) \ ret(t)(c)| < eps |t(c)| for every center.
template <LatticeElement G>
EpsDisjointReport<G> check_eps_disjoint(const QuasiTiling<G>& t, const Rational& eps) {
  auto r = retract(t);
  EpsDisjointReport<G> rep;
  for (const auto& tile : t.tiles()) {
    const auto* rt = r.find(tile.center);
    std::size_t kept = rt ? rt->shape.size() : 0;
    std::size_t lost = tile.shape.size() - kept;
    if (!(Rational(static_cast<std::int64_t>(lost)) < eps * static_cast<std::int64_t>(tile.shape.size()))) {
      rep.pass = false;
      rep.violators.push_back({tile.center, lost, tile.shape.size()});
    }
  }
  return rep;
}

struct CoveringReport {
  Rational fraction;
  Rational slack;
  Rational target;
  bool pass = false;
};

// Covered fraction of eval compared to rho minus |bd_U eval| / |eval|.
template <LatticeElement G>
CoveringReport covering_report(const FiniteSet<G>& covered, const FiniteSet<G>& u, const Rational& rho,
                               const FiniteSet<G>& eval) {
  if (eval.empty()) throw PreconditionError("check_covering: empty evaluation window");
  CoveringReport r;
  const auto ne = static_cast<std::int64_t>(eval.size());
  r.fraction = Rational(static_cast<std::int64_t>(intersect(covered, eval).size()), ne);
  r.slack = Rational(static_cast<std::int64_t>(boundary(eval, u).size()), ne);
  r.target = rho;
  r.pass = r.fraction >= rho - r.slack;
  return r;
}

template <LatticeElement G>
CoveringReport check_covering(const QuasiTiling<G>& t, const Rational& rho, const FiniteSet<G>& eval) {
  return covering_report(t.covered(), t.shapes().union_all(), rho, eval);
}

struct RetractCoveringReport {
  bool precondition = true;
  std::vector<std::size_t> precondition_failures;  // tile positions in the base tiling
  CoveringReport covering;
};

// rho0-covering base, retracted tiles keeping a rho1 share, union rho0*rho1-covering.
template <LatticeElement G>
RetractCoveringReport check_retract_covering(const QuasiTiling<G>& t0, const Retraction<G>& t1, const Rational& rho0,
                                             const Rational& rho1, const FiniteSet<G>& eval) {
  RetractCoveringReport r;
  for (std::size_t i = 0; i < t0.tiles().size(); ++i) {
    const auto& tile = t0.tiles()[i];
    const auto* rt = t1.find(tile.center);
    auto kept = static_cast<std::int64_t>(rt ? rt->shape.size() : 0);
    if (Rational(kept) < rho1 * static_cast<std::int64_t>(tile.shape.size())) {
      r.precondition = false;
      r.precondition_failures.push_back(i);
    }
  }
  r.covering = covering_report(t1.covered(), t0.shapes().union_all(), rho0 * rho1, eval);
  return r;
}

template <LatticeElement G>
struct StarTile {
  G center{};
  int shape_index = 0;
  int round = 0;
  FiniteSet<G> s1;   // retracted shape
  FiniteSet<G> cut;  // s1 minus the marker zones of all centers
  FiniteSet<G> star; // K^3-interior of cut
};

template <LatticeElement G>
struct StarRetraction {
  std::vector<StarTile<G>> tiles;
  std::vector<G> empty_centers;
};

// t1*(c) = int_{K^3}(t1(c) \ (M6 C - c)).
template <LatticeElement G>
StarRetraction<G> star_retract(const Retraction<G>& t1, const FiniteSet<G>& c, const FiniteSet<G>& m6,
                               const FiniteSet<G>& k) {
  StarRetraction<G> r;
  auto k3 = power(k, 3);
  auto zone = product(m6, c);
  for (const auto& tile : t1.tiles) {
    StarTile<G> st;
    st.center = tile.center;
    st.shape_index = tile.shape_index;
    st.round = tile.round;
    st.s1 = tile.shape;
    st.cut = minus(tile.shape, translate(zone, -tile.center));
    st.star = interior(st.cut, k3);
    if (st.star.empty()) r.empty_centers.push_back(tile.center);
    r.tiles.push_back(std::move(st));
  }
  return r;
}

// Lexicographically last ceil(2 eps |S|) cells of S.
template <LatticeElement G>
FiniteSet<G> capacity_cells(const FiniteSet<G>& s, const Rational& eps) {
  Rational want = eps * 2 * static_cast<std::int64_t>(s.size());
  auto k = static_cast<std::size_t>((want.numerator() + want.denominator() - 1) / want.denominator());
  if (!(Rational(static_cast<std::int64_t>(k)) < eps * 3 * static_cast<std::int64_t>(s.size())))
    throw BudgetError("capacity_cells: no subset size in [2eps|S|, 3eps|S|) for |S| = " + std::to_string(s.size()));
  k = std::min(k, s.size());
  return FiniteSet<G>(std::vector<G>(s.end() - static_cast<long>(k), s.end()));
}

template <LatticeElement G>
struct HallWitness {
  FiniteSet<G> deficient;  // uncovered cells
  FiniteSet<G> neighbours; // all capacity cells they can reach; strictly fewer
};

template <LatticeElement G>
class InfeasibleMatching : public BudgetError {
 public:
  InfeasibleMatching(const std::string& msg, HallWitness<G> w) : BudgetError(msg), witness_(std::move(w)) {}
  const HallWitness<G>& witness() const { return witness_; }

 private:
  HallWitness<G> witness_;
};

template <LatticeElement G>
struct ExactifyOptions {
  std::optional<FiniteSet<G>> region;  // defaults to the base window
  int collar = -1;                     // -1: radius of the shape union
  int radius = -1;                     // -1: twice the diameter of the shape union
};

template <LatticeElement G>
struct ExactifyResult {
  QuasiTiling<G> tiling;  // t2
  FiniteSet<G> region;
  FiniteSet<G> required;   // cells that had to be covered
  FiniteSet<G> uncovered;  // collar cells left uncovered
  int max_displacement = 0;
  int collar = 0;
  int radius = 0;
};

// Extend disjoint tiles to an exact partition of the region interior by an injective matching of
// uncovered cells into the capacity cells B(t1(c)) c, nearest capacity cell first.
template <LatticeElement G>
ExactifyResult<G> exactify(const Retraction<G>& t1, const Rational& eps, const ExactifyOptions<G>& opt = {}) {
  if (!pairwise_disjoint(t1.tiles)) throw PreconditionError("exactify: retracted tiles must be disjoint");
  ExactifyResult<G> res;
  res.region = opt.region ? *opt.region : t1.base.window();
  auto u = t1.base.shapes().union_all();
  const int diam = u.empty() ? 0 : (u.upper() - u.lower()).norm();
  res.collar = opt.collar >= 0 ? opt.collar : u.radius();
  res.radius = opt.radius >= 0 ? opt.radius : std::max(1, 2 * diam);
  auto covered = t1.covered();
  auto a = minus(res.region, covered);
  auto core = interior(res.region, centered_box<G>(res.collar));

  // Capacity cells and their owners.
  std::vector<G> bcells;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < t1.tiles.size(); ++i)
    for (const G& x : capacity_cells(t1.tiles[i].shape, eps)) {
      bcells.push_back(x + t1.tiles[i].center);
      owner.push_back(i);
    }
  {
    std::vector<std::size_t> perm(bcells.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](auto x, auto y) { return bcells[x] < bcells[y]; });
    std::vector<G> b2;
    std::vector<std::size_t> o2;
    for (auto p : perm) {
      b2.push_back(bcells[p]);
      o2.push_back(owner[p]);
    }
    bcells = std::move(b2);
    owner = std::move(o2);
  }
  FiniteSet<G> bset(bcells);
  DenseIndex<G> bidx(bset);

  std::vector<G> offsets = centered_box<G>(res.radius).elements();
  std::stable_sort(offsets.begin(), offsets.end(), [](const G& x, const G& y) { return x.norm() < y.norm(); });

  std::vector<std::vector<int>> adj(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (const G& d : offsets) {
      long b = bidx.find(a[i] + d);
      if (b >= 0) adj[i].push_back(static_cast<int>(b));
    }

  std::vector<int> match_b(bcells.size(), -1), match_a(a.size(), -1);
  std::vector<int> seen(bcells.size(), -1);
  std::vector<int> seen_a;
  int stamp = 0;
  std::function<bool(int)> augment = [&](int x) -> bool {
    seen_a.push_back(x);
    for (int b : adj[static_cast<std::size_t>(x)]) {
      if (seen[static_cast<std::size_t>(b)] == stamp) continue;
      seen[static_cast<std::size_t>(b)] = stamp;
      if (match_b[static_cast<std::size_t>(b)] < 0 || augment(match_b[static_cast<std::size_t>(b)])) {
        match_b[static_cast<std::size_t>(b)] = x;
        match_a[static_cast<std::size_t>(x)] = b;
        return true;
      }
    }
    return false;
  };

  std::vector<G> req, loose;
  for (std::size_t i = 0; i < a.size(); ++i) (core.contains(a[i]) ? req : loose).push_back(a[i]);
  res.required = FiniteSet<G>(req);
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t i = 0; i < a.size(); ++i) {
      const bool is_req = core.contains(a[i]);
      if (is_req != (pass == 0)) continue;
      ++stamp;
      seen_a.clear();
      if (augment(static_cast<int>(i))) continue;
      if (!is_req) continue;
      std::vector<G> xs, ns;
      for (int x : seen_a) xs.push_back(a[static_cast<std::size_t>(x)]);
      for (std::size_t b = 0; b < bcells.size(); ++b)
        if (seen[b] == stamp) ns.push_back(bcells[b]);
      std::ostringstream os;
      os << "exactify: Hall deficiency, " << xs.size() << " uncovered cells reach only " << ns.size()
         << " capacity cells";
      throw InfeasibleMatching<G>(os.str(), {FiniteSet<G>(xs), FiniteSet<G>(ns)});
    }

  std::vector<std::vector<G>> extra(t1.tiles.size());
  std::vector<G> left;
  for (std::size_t i = 0; i < a.size(); ++i) {
    int b = match_a[i];
    if (b < 0) {
      left.push_back(a[i]);
      continue;
    }
    auto o = owner[static_cast<std::size_t>(b)];
    extra[o].push_back(a[i] - t1.tiles[o].center);
    res.max_displacement = std::max(res.max_displacement, linf_distance(a[i], bcells[static_cast<std::size_t>(b)]));
  }
  res.uncovered = FiniteSet<G>(left);
  std::vector<Tile<G>> tiles;
  for (std::size_t i = 0; i < t1.tiles.size(); ++i) {
    auto t = t1.tiles[i];
    t.shape = unite(t.shape, FiniteSet<G>(extra[i]));
    tiles.push_back(std::move(t));
  }
  res.tiling = QuasiTiling<G>(t1.base.shapes(), t1.base.window(), std::move(tiles));
  return res;
}

struct ExactnessReport {
  bool disjoint = true;
  bool covers_required = true;
  bool centers_preserved = true;
  bool extends = true;
  bool growth_bounded = true;
  bool pass() const { return disjoint && covers_required && centers_preserved && extends && growth_bounded; }
};

// Post-hoc check of an exactification.
template <LatticeElement G>
ExactnessReport check_exactification(const Retraction<G>& t1, const ExactifyResult<G>& r, const Rational& eps) {
  ExactnessReport rep;
  const auto& t2 = r.tiling;
  rep.disjoint = pairwise_disjoint(t2.tiles());
  rep.covers_required = is_subset(r.required, t2.covered()) &&
                        is_subset(interior(r.region, centered_box<G>(r.collar)), t2.covered());
  rep.centers_preserved = t2.centers() == t1.centers();
  for (const auto& tile : t1.tiles) {
    const auto* x = t2.find(tile.center);
    if (!x || !is_subset(tile.shape, x->shape)) {
      rep.extends = false;
      continue;
    }
    auto grown = static_cast<std::int64_t>(x->shape.size() - tile.shape.size());
    auto cap = static_cast<std::int64_t>(capacity_cells(tile.shape, eps).size());
    if (grown > cap || !(Rational(cap) < eps * 3 * static_cast<std::int64_t>(tile.shape.size())))
      rep.growth_bounded = false;
  }
  return rep;
}

// Boxes F_{n_1} c ... with |F cap F l| >= (1-eps)|F| for l in L^-1 L, and F_prev L^-1 L inside F_next.
template <LatticeElement G>
std::vector<FiniteSet<G>> choose_folner_shapes(const FiniteSet<G>& l, const Rational& eps, int count, int n0 = 1,
                                               int n_max = 4096) {
  std::vector<FiniteSet<G>> out;
  auto diffs = difference_set(l);
  FiniteSet<G> prev;
  for (int n = std::max(1, n0); n <= n_max && static_cast<int>(out.size()) < count; ++n) {
    auto f = centered_box<G>(n, Role::s_tile_shape);
    bool ok = true;
    for (const G& d : diffs) {
      auto overlap = static_cast<std::int64_t>(intersect(f, translate(f, d)).size());
      if (Rational(overlap) < (Rational(1) - eps) * static_cast<std::int64_t>(f.size())) {
        ok = false;
        break;
      }
    }
    if (ok && !prev.empty() && !is_subset(product(prev, diffs), f)) ok = false;
    if (!ok) continue;
    out.push_back(f);
    prev = f;
  }
  if (static_cast<int>(out.size()) < count) throw ResourceError("choose_folner_shapes: search bound reached");
  return out;
}

}  // namespace symdyn
