#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symdyn/markers.hpp"
#include "symdyn/patterns.hpp"
#include "symdyn/quasitiling.hpp"
#include "symdyn/report.hpp"

namespace symdyn {

// ---- parameter budget ----

// Largest admissible epsilon from the entropy gap and alphabet sizes.
inline double epsilon_bound(double h_x, double h_y0, int alphabet_x, int alphabet_y, int k_size) {
  const double k6 = std::pow(static_cast<double>(k_size), 6);
  return (h_y0 - h_x) / (2 + 5 * std::log(alphabet_x) + (5 + 4 * k6) * std::log(alphabet_y));
}

// r = 1 + ceil((2 / eps) ln(1 / eps)).
inline int marker_count(double eps) {
  if (!(eps > 0 && eps < 1)) throw PreconditionError("marker_count: eps must lie in (0, 1)");
  return 1 + static_cast<int>(std::ceil((2 / eps) * std::log(1 / eps)));
}

struct ParameterBudget {
  double eps_bound = 0;
  Rational eps{0};
  int r = 0;
  double decay = 0;  // (1 - eps/2)^r
  bool direct_verification = false;  // eps chosen above the worst-case bound

  bool decay_ok() const { return decay < to_double(eps); }
  std::string mode() const { return direct_verification ? "direct-verification" : "worst-case"; }
};

inline ParameterBudget compute_budget(double h_x, double h_y0, int alphabet_x, int alphabet_y, int k_size,
                                      std::optional<Rational> eps = std::nullopt) {
  if (!(h_x < h_y0)) throw PreconditionError("compute_budget: need h(X) < h(Y0)");
  if (alphabet_x < 1 || alphabet_y < 2 || k_size < 1) throw PreconditionError("compute_budget: bad sizes");
  ParameterBudget b;
  b.eps_bound = epsilon_bound(h_x, h_y0, alphabet_x, alphabet_y, k_size);
  if (eps) {
    b.eps = *eps;
  } else {
    constexpr std::int64_t den = 1'000'000'000'000;
    b.eps = Rational(static_cast<std::int64_t>(std::floor(std::min(b.eps_bound, 0.33) * den)), den);
  }
  if (b.eps <= 0) throw BudgetError("compute_budget: epsilon must be positive");
  if (!(b.eps < Rational(1, 3))) throw BudgetError("compute_budget: epsilon must be below 1/3, got " + to_string(b.eps));
  b.direct_verification = !(to_double(b.eps) < b.eps_bound);
  b.r = marker_count(to_double(b.eps));
  b.decay = std::pow(1 - to_double(b.eps) / 2, b.r);
  if (!b.decay_ok()) throw InvariantError("compute_budget: (1 - eps/2)^r >= eps");
  return b;
}

// (S1) 1/|S0| < eps(1 - eps); (S2) |K^3||M^6||L| |L S0 \ S0| < eps|S0|;
// (S3) h(S0, X) < h(X) + eps and h(S0, Y0) > h(Y0) - eps.
template <LatticeElement G>
ConditionReport validate_shape_conditions(const FiniteSet<G>& s0, const Rational& eps, const FiniteSet<G>& k,
                                          const FiniteSet<G>& m, const FiniteSet<G>& l, const Sft<G>& x,
                                          const Sft<G>& y0, double h_x, double h_y0,
                                          CountMode mode = CountMode::extendable()) {
  if (s0.empty()) throw PreconditionError("validate_shape_conditions: empty shape");
  ConditionReport r;
  const auto n = static_cast<std::int64_t>(s0.size());
  r.add("S1", Rational(1, n) < eps * (1 - eps),
        concat("1/|S0| = ", 1.0 / static_cast<double>(n), " vs eps(1-eps) = ", to_double(eps * (1 - eps))));
  const auto k3 = static_cast<std::int64_t>(power(k, 3).size());
  const auto m6 = static_cast<std::int64_t>(power(m, 6).size());
  const auto ls = static_cast<std::int64_t>(minus(product(l, s0), s0).size());
  const std::int64_t lhs = k3 * m6 * static_cast<std::int64_t>(l.size()) * ls;
  r.add("S2", Rational(lhs) < eps * n,
        concat("|K^3||M^6||L| |LS0 \\ S0| = ", k3, "*", m6, "*", l.size(), "*", ls, " = ", lhs,
               " vs eps|S0| = ", to_double(eps * n)));
  auto ex = entropy_estimate(x, s0, mode);
  auto ey = entropy_estimate(y0, s0, mode);
  const double e = to_double(eps);
  r.add("S3x", ex.h < h_x + e, concat("h(S0,X) = ", ex.h, " [", ex.mode.tag(), "] vs h(X) + eps = ", h_x + e));
  r.add("S3y", ey.h > h_y0 - e, concat("h(S0,Y0) = ", ey.h, " [", ey.mode.tag(), "] vs h(Y0) - eps = ", h_y0 - e));
  return r;
}

// ---- block injection ----

// Sorted list of the patterns of an SFT on a shape, with exact rank and unrank.
template <LatticeElement G>
class PatternIndex {
 public:
  PatternIndex(const Sft<G>& sft, FiniteSet<G> shape, CountMode mode, const EnumerationOptions& opt = {})
      : shape_(std::move(shape)), mode_(mode.resolved(sft)) {
    if (shape_.empty()) throw PreconditionError("PatternIndex: empty shape");
    if constexpr (std::is_same_v<G, Z1>) {
      auto w = mode_.kind == CountMode::Kind::extendable ? product(shape_, centered_box<Z1>(mode_.margin)) : shape_;
      codec_ = std::make_shared<RestrictionCodec1D>(sft, w, shape_, opt.limits);
      count_ = codec_->count();
    } else {
      list_ = std::make_shared<std::vector<Pattern<G>>>(enumerate_patterns(sft, shape_, mode_, opt));
      count_ = list_->size();
    }
  }

  const FiniteSet<G>& shape() const { return shape_; }
  const BigInt& count() const { return count_; }
  const CountMode& mode() const { return mode_; }

  std::optional<BigInt> rank(const Pattern<G>& p) const {
    if (p.shape() != shape_) return std::nullopt;
    if constexpr (std::is_same_v<G, Z1>) {
      return codec_->rank(p.labels());
    } else {
      auto it = std::lower_bound(list_->begin(), list_->end(), p);
      if (it == list_->end() || *it != p) return std::nullopt;
      return BigInt(it - list_->begin());
    }
  }
  Pattern<G> unrank(const BigInt& i) const {
    if (i < 0 || !(i < count_)) throw PreconditionError("PatternIndex::unrank: index out of range");
    if constexpr (std::is_same_v<G, Z1>) {
      return Pattern<G>(shape_, codec_->unrank(i));
    } else {
      return (*list_)[static_cast<std::size_t>(i)];
    }
  }

 private:
  FiniteSet<G> shape_;
  CountMode mode_;
  BigInt count_ = 0;
  std::shared_ptr<const RestrictionCodec1D> codec_;
  std::shared_ptr<const std::vector<Pattern<G>>> list_;
};

// The i-th source pattern goes to the i-th target pattern.
template <LatticeElement G>
struct BlockInjection {
  PatternIndex<G> source;  // P(S2, X)
  PatternIndex<G> target;  // P(S1*, Y0)

  Pattern<G> map(const Pattern<G>& p) const {
    auto i = source.rank(p);
    if (!i) throw PreconditionError("BlockInjection::map: pattern outside the source table");
    return target.unrank(*i);
  }
  std::optional<Pattern<G>> inverse(const Pattern<G>& q) const {
    auto i = target.rank(q);
    if (!i || !(*i < source.count())) return std::nullopt;
    return source.unrank(*i);
  }
  // Materialized table; refuses more than cap rows.
  std::vector<std::pair<Pattern<G>, Pattern<G>>> rows(std::size_t cap = 100'000) const {
    if (source.count() > cap) throw ResourceError("BlockInjection::rows: table exceeds cap");
    std::vector<std::pair<Pattern<G>, Pattern<G>>> out;
    for (std::size_t i = 0; i < static_cast<std::size_t>(source.count()); ++i)
      out.emplace_back(source.unrank(i), target.unrank(i));
    return out;
  }
};

template <LatticeElement G>
BlockInjection<G> build_block_injection(const Sft<G>& x, const Sft<G>& y0, const FiniteSet<G>& s2,
                                        const FiniteSet<G>& s1_star, CountMode mode = CountMode::extendable(),
                                        const EnumerationOptions& opt = {}) {
  BlockInjection<G> b{PatternIndex<G>(x, s2, mode, opt), PatternIndex<G>(y0, s1_star, mode, opt)};
  if (!(b.source.count() < b.target.count()))
    throw BudgetError("build_block_injection: |P(S2, X)| = " + b.source.count().str() +
                      " is not below |P(S1*, Y0)| = " + b.target.count().str() + " [" + b.source.mode().tag() + "]");
  return b;
}

// ---- factor map ----

// Sliding block code: y(g) = rule(x restricted to D + g).
template <LatticeElement G>
struct BlockMap {
  FiniteSet<G> window{G::identity()};
  std::function<Symbol(const std::vector<Symbol>&)> rule;
  std::string name;

  Configuration<G> apply(const Configuration<G>& x) const {
    auto dom = interior(x.window(), window);
    std::vector<Symbol> l;
    l.reserve(dom.size());
    std::vector<Symbol> buf(window.size());
    for (const G& g : dom) {
      for (std::size_t i = 0; i < window.size(); ++i) buf[i] = x.at(window[i] + g);
      l.push_back(rule(buf));
    }
    return Configuration<G>(dom, std::move(l));
  }
};

// Symbol-by-symbol map a -> image[a].
template <LatticeElement G>
BlockMap<G> one_block_map(std::vector<Symbol> image, std::string name = "one-block") {
  BlockMap<G> m;
  m.name = std::move(name);
  m.rule = [image = std::move(image)](const std::vector<Symbol>& v) { return image.at(static_cast<std::size_t>(v[0])); };
  return m;
}

// ---- encoder and decoder ----

template <LatticeElement G>
struct EmbeddingSpec {
  Sft<G> x, y, y1, y0;
  BlockMap<G> phi;
  MarkerKit<G> kit;   // supplies K and M; marker i flags shape i
  ShapeSet<G> shapes;
  FiniteSet<G> l;
  Rational eps{1, 10};
  int hash_radius = 1;
  int exact_collar = -1;
  int exact_radius = -1;
  CountMode mode = CountMode::extendable();
};

template <LatticeElement G>
struct TileRecord {
  G center{};
  int shape_index = 0;
  FiniteSet<G> s0, s1, s2, s1_star;
  FiniteSet<G> region;  // s1 minus the M^6 zones of all centers
  bool lemma_hypotheses = false;
};

template <LatticeElement G>
struct EncodeTrace {
  QuasiTiling<G> t0;
  Retraction<G> t1;
  ExactifyResult<G> t2;
  std::vector<TileRecord<G>> tiles;
  std::size_t cells_c1 = 0, cells_c2 = 0, cells_base = 0;
  int hash_radius = 0;
  std::string mode;
};

template <LatticeElement G>
struct EncodeResult {
  Configuration<G> y;
  Configuration<G> y1;
  Configuration<G> y0;
  EncodeTrace<G> trace;
};

template <LatticeElement G>
struct DecodeResult {
  Pattern<G> x;  // on the recovered region
  std::vector<Tile<G>> centers;  // recovered t0 tiles
  std::vector<std::string> issues;
  bool consistent() const { return issues.empty(); }
};

template <LatticeElement G>
class EmbeddingMachine {
 public:
  explicit EmbeddingMachine(EmbeddingSpec<G> spec) : s_(std::move(spec)) {
    if (s_.kit.size() < s_.shapes.size())
      throw PreconditionError("EmbeddingMachine: need one marker per tile shape");
    if (!is_subset(s_.kit.k, s_.kit.m) || s_.kit.m != inverse(s_.kit.m))
      throw PreconditionError("EmbeddingMachine: M must contain K and be symmetric");
    if (!(s_.eps < Rational(1, 3))) throw BudgetError("EmbeddingMachine: epsilon must be below 1/3");
    m3_ = power(s_.kit.m, 3);
    m6_ = power(s_.kit.m, 6);
    k2_ = power(s_.kit.k, 2);
    if (!is_subset(m6_, s_.l)) throw PreconditionError("EmbeddingMachine: L must contain M^6");
    if (!is_subset(m3_, s_.kit.window)) throw PreconditionError("EmbeddingMachine: kit window must contain M^3");
    substrate_m3_ = s_.kit.substrate.restrict(m3_);
  }

  const EmbeddingSpec<G>& spec() const { return s_; }
  const FiniteSet<G>& m3() const { return m3_; }
  const FiniteSet<G>& m6() const { return m6_; }

  // Budget checks that do not depend on a particular input.
  ConditionReport validate(std::optional<double> h_x = std::nullopt, std::optional<double> h_y0 = std::nullopt) const {
    ConditionReport r;
    r.add("eps_below_third", s_.eps < Rational(1, 3), to_string(s_.eps));
    r.add("m6_density", Rational(static_cast<std::int64_t>(m6_.size()), static_cast<std::int64_t>(s_.l.size())) < s_.eps,
          concat("|M^6|/|L| = ", m6_.size(), "/", s_.l.size()));
    r.add("markers", s_.kit.size() >= s_.shapes.size(), concat(s_.kit.size(), " markers for ", s_.shapes.size(), " shapes"));
    if (h_x && h_y0)
      for (std::size_t i = 0; i < s_.shapes.size(); ++i)
        for (const auto& c : validate_shape_conditions(s_.shapes[i], s_.eps, s_.kit.k, s_.kit.m, s_.l, s_.x, s_.y0,
                                                       *h_x, *h_y0, s_.mode)
                                 .checks)
          r.add(c.name + "[" + std::to_string(i) + "]", c.pass, c.detail);
    return r;
  }

  // t1, t2 and the per-tile shapes from t0 on a window.
  EncodeTrace<G> derive(const QuasiTiling<G>& t0) const {
    EncodeTrace<G> tr;
    tr.t0 = t0;
    tr.t1 = retract(t0);
    ExactifyOptions<G> eo;
    eo.region = t0.window();
    eo.collar = s_.exact_collar;
    eo.radius = s_.exact_radius;
    tr.t2 = exactify(tr.t1, s_.eps, eo);
    tr.hash_radius = s_.hash_radius;
    tr.mode = s_.mode.tag();
    auto star = star_retract(tr.t1, t0.centers(), m6_, s_.kit.k);
    for (const auto& st : star.tiles) {
      TileRecord<G> rec;
      rec.center = st.center;
      rec.shape_index = st.shape_index;
      rec.s0 = s_.shapes[static_cast<std::size_t>(st.shape_index)];
      rec.s1 = st.s1;
      rec.region = st.cut;
      rec.s1_star = st.star;
      if (const auto* t2 = tr.t2.tiling.find(st.center)) rec.s2 = t2->shape;
      const auto n0 = static_cast<std::int64_t>(rec.s0.size());
      const auto n1 = static_cast<std::int64_t>(rec.s1.size());
      rec.lemma_hypotheses = is_subset(rec.s1_star, rec.s1) && is_subset(rec.s1, intersect(rec.s0, rec.s2)) &&
                             Rational(static_cast<std::int64_t>(minus(rec.s0, rec.s1).size())) < s_.eps * n0 &&
                             Rational(static_cast<std::int64_t>(minus(rec.s2, rec.s1).size())) < s_.eps * 3 * n1;
      tr.tiles.push_back(std::move(rec));
    }
    return tr;
  }

  QuasiTiling<G> tile(const Configuration<G>& x) const {
    TilerOptions<G> to;
    to.eps = s_.eps;
    to.order = CandidateOrder::configuration_hash;
    to.source = &x;
    to.hash_radius = s_.hash_radius;
    to.clearance = m6_;
    return dh_tile(s_.shapes, s_.l, x.window(), to);
  }

  const BlockInjection<G>& injection(const FiniteSet<G>& s2, const FiniteSet<G>& s1_star) const {
    auto key = std::make_pair(s2, s1_star);
    auto it = inj_.find(key);
    if (it == inj_.end()) it = inj_.emplace(key, build_block_injection(s_.x, s_.y0, s2, s1_star, s_.mode)).first;
    return it->second;
  }

  EncodeResult<G> encode(const Configuration<G>& x_in) const {
    if (auto v = find_violation(s_.x, x_in))
      throw PreconditionError("encode: input violates X at " + concat(v->position));
    auto y0 = s_.phi.apply(x_in);
    const auto& w = y0.window();
    auto x = x_in.window() == w ? x_in : Configuration<G>(x_in.restrict(w));
    if (auto v = find_violation(s_.y0, y0)) throw HypothesisError("encode: phi(x) violates Y0 at " + concat(v->position));

    EncodeResult<G> res;
    res.y0 = y0;
    res.trace = derive(tile(x));
    auto& tr = res.trace;

    std::vector<Symbol> out = y0.labels();
    std::vector<char> writer(w.size(), 0);
    auto put = [&](const Pattern<G>& p, char tag) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        auto slot = w.index_of(p.shape()[i]);
        if (!slot) throw InvariantError("encode: write outside the window at " + concat(p.shape()[i]));
        if (writer[*slot]) throw InvariantError("encode: cell " + concat(p.shape()[i]) + " written twice");
        writer[*slot] = tag;
        out[*slot] = p.labels()[i];
      }
    };

    // (C1) substrate on M^3 with the collar of M^6 taken from y0.
    auto bd_m6 = boundary(m6_, k2_);
    for (const auto& t : tr.t0.tiles()) {
      auto collar = y0.restrict(translate(bd_m6, t.center)).translate(-t.center);
      put(mix(m6_, substrate_m3_, collar).translate(t.center), 1);
    }
    // (C2) injected block with the collar of S1 \ M^6C taken from y0.
    for (const auto& rec : tr.tiles) {
      if (!rec.lemma_hypotheses)
        throw BudgetError("encode: tile at " + concat(rec.center) + " violates the block-injection hypotheses");
      const auto& region = rec.region;
      const auto& psi = injection(rec.s2, rec.s1_star);
      auto u = psi.map(x.restrict(translate(rec.s2, rec.center)).translate(-rec.center));
      auto collar = y0.restrict(translate(boundary(region, k2_), rec.center)).translate(-rec.center);
      put(mix(region, u, collar).translate(rec.center), 2);
    }
    for (char c : writer) (c == 1 ? tr.cells_c1 : c == 2 ? tr.cells_c2 : tr.cells_base)++;
    res.y1 = Configuration<G>(w, out);
    if (auto v = find_violation(s_.y1, res.y1))
      throw InvariantError("encode: y1 violates Y1 at " + concat(v->position));

    for (const auto& t : tr.t0.tiles()) {
      const auto& m = s_.kit.markers[static_cast<std::size_t>(t.shape_index)];
      for (std::size_t i = 0; i < m.size(); ++i) out[w.index_of(m.shape()[i] + t.center).value()] = m.labels()[i];
    }
    res.y = Configuration<G>(w, std::move(out));
    if (auto v = find_violation(s_.y, res.y)) throw InvariantError("encode: y violates Y at " + concat(v->position));
    return res;
  }

  // Marker occurrences among translates g with Mg inside the window, as (center, marker index).
  std::vector<std::pair<G, int>> scan_markers(const Configuration<G>& y) const {
    auto pos = interior(y.window(), s_.kit.m);
    std::vector<std::pair<G, int>> hits;
    for (std::size_t i = 0; i < s_.kit.size(); ++i)
      for (const G& g : occurrences(y, s_.kit.markers[i], &pos)) hits.emplace_back(g, static_cast<int>(i));
    std::sort(hits.begin(), hits.end());
    return hits;
  }

  DecodeResult<G> decode(const Configuration<G>& y) const {
    DecodeResult<G> res;
    std::vector<Tile<G>> tiles;
    auto hits = scan_markers(y);
    for (std::size_t n = 0; n < hits.size(); ++n) {
      const auto& [g, i] = hits[n];
      if (n + 1 < hits.size() && hits[n + 1].first == g) res.issues.push_back("two markers claim " + concat(g));
      if (static_cast<std::size_t>(i) >= s_.shapes.size()) {
        res.issues.push_back(concat("marker ", i + 1, " at ", g, " names no tile shape"));
        continue;
      }
      Tile<G> t;
      t.center = g;
      t.shape_index = i;
      t.round = s_.shapes.round_of(i);
      t.shape = s_.shapes[static_cast<std::size_t>(i)];
      tiles.push_back(std::move(t));
    }
    for (std::size_t a = 0; a < tiles.size(); ++a)
      for (std::size_t b = a + 1; b < tiles.size(); ++b)
        if (!disjoint(translate(s_.kit.m, tiles[a].center), translate(s_.kit.m, tiles[b].center)))
          res.issues.push_back("overlapping marker claims at " + concat(tiles[a].center) + " and " + concat(tiles[b].center));
    res.centers = tiles;
    if (!res.issues.empty()) return res;
    if (tiles.empty()) {
      res.x = Pattern<G>();
      return res;
    }

    EncodeTrace<G> tr;
    try {
      tr = derive(QuasiTiling<G>(s_.shapes, y.window(), tiles));
    } catch (const std::exception& e) {
      res.issues.push_back(std::string("rebuilding the tilings failed: ") + e.what());
      return res;
    }
    Pattern<G> x;
    for (const auto& rec : tr.tiles) {
      const auto& psi = injection(rec.s2, rec.s1_star);
      auto q = y.restrict(translate(rec.s1_star, rec.center)).translate(-rec.center);
      auto p = psi.inverse(q);
      if (!p) {
        res.issues.push_back("block at " + concat(rec.center) + " is not in the injection table");
        continue;
      }
      x = x.empty() ? p->translate(rec.center) : merge(x, p->translate(rec.center));
    }
    res.x = std::move(x);
    return res;
  }

 private:
  // Lexicographically least Y0 pattern on shape agreeing with u inside and with the collar; memoised.
  Pattern<G> mix(const FiniteSet<G>& shape, const Pattern<G>& u, const Pattern<G>& collar) const {
    auto key = std::make_tuple(shape, u, collar);
    if (auto it = mix_.find(key); it != mix_.end()) return it->second;
    Search<G> s(s_.y0, shape);
    s.fix(u);
    s.fix_inside(collar);
    auto c = s.first();
    if (!c) throw HypothesisError("encode: Y0 cannot join the inner pattern to its collar");
    return mix_.emplace(key, c->as_pattern()).first->second;
  }

  EmbeddingSpec<G> s_;
  FiniteSet<G> m3_, m6_, k2_;
  Pattern<G> substrate_m3_;
  mutable std::map<std::pair<FiniteSet<G>, FiniteSet<G>>, BlockInjection<G>> inj_;
  mutable std::map<std::tuple<FiniteSet<G>, Pattern<G>, Pattern<G>>, Pattern<G>> mix_;
};

// ---- verification ----

template <LatticeElement G>
struct EncodingCheck {
  ConditionReport conditions;
  std::vector<std::string> counterexamples;
  FiniteSet<G> covered;  // recovered region
};

// Properties of one encoding: admissibility by full scan, marker agreement on M^3 around centers,
// exact marker recovery and the round trip on the recovered region.
template <LatticeElement G>
EncodingCheck<G> check_encoding(const EmbeddingMachine<G>& mach, const Configuration<G>& x,
                                const EncodeResult<G>& enc) {
  EncodingCheck<G> out;
  const auto& s = mach.spec();
  auto note = [&](std::string m) {
    if (out.counterexamples.size() < 32) out.counterexamples.push_back(std::move(m));
  };
  out.conditions.add("y1_in_Y1", is_locally_admissible(s.y1, enc.y1), s.y1.name());
  out.conditions.add("y_in_Y", is_locally_admissible(s.y, enc.y), s.y.name());

  bool y1_ok = true;
  for (const auto& t : enc.trace.t0.tiles()) {
    auto here = translate(mach.m3(), t.center);
    if (!is_subset(here, enc.y.window())) continue;
    const auto& carrier = s.kit.carriers[static_cast<std::size_t>(t.shape_index)];
    if (enc.y.restrict(here).translate(-t.center) != carrier.restrict(mach.m3())) {
      y1_ok = false;
      note("M^3 around " + concat(t.center) + " differs from carrier " + std::to_string(t.shape_index + 1));
    }
  }
  out.conditions.add("marker_neighbourhoods", y1_ok, concat(enc.trace.t0.size(), " centers"));

  std::vector<std::pair<G, int>> want;
  for (const auto& t : enc.trace.t0.tiles()) want.emplace_back(t.center, t.shape_index);
  std::sort(want.begin(), want.end());
  auto got = mach.scan_markers(enc.y);
  out.conditions.add("marker_recovery", got == want, concat(got.size(), " hits for ", want.size(), " centers"));
  if (got != want)
    for (const auto& h : got)
      if (std::find(want.begin(), want.end(), h) == want.end()) note("false marker " + concat(h.second + 1, " at ", h.first));

  auto dec = mach.decode(enc.y);
  for (const auto& i : dec.issues) note(i);
  bool rt = dec.consistent();
  if (rt && !dec.x.empty()) {
    rt = x.restrict(dec.x.shape()) == dec.x;
    if (!rt) note("decoded labels differ from the input");
  }
  if (rt) rt = dec.x.shape() == enc.trace.t2.tiling.covered();
  out.covered = dec.x.shape();
  out.conditions.add("round_trip", rt, concat(dec.x.size(), " cells recovered"));
  return out;
}

template <LatticeElement G>
struct InjectivityReport {
  ConditionReport conditions;
  std::vector<std::string> counterexamples;
  std::size_t samples = 0;
  std::size_t covered_cells = 0;
  int observed_code_radius = 0;  // largest distance from a changed input cell to a changed output cell
};

// Round trip per sample, pairwise distinctness of encodings, and a one-cell perturbation per sample.
template <LatticeElement G>
InjectivityReport<G> verify_injectivity(const EmbeddingMachine<G>& mach, const std::vector<Configuration<G>>& xs) {
  InjectivityReport<G> rep;
  rep.samples = xs.size();
  const auto& s = mach.spec();
  std::vector<Configuration<G>> ys;
  bool each = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto enc = mach.encode(xs[i]);
    auto chk = check_encoding(mach, xs[i], enc);
    rep.covered_cells += chk.covered.size();
    if (!chk.conditions.pass()) {
      each = false;
      for (const auto& f : chk.conditions.failures()) rep.counterexamples.push_back(concat("sample ", i, ": ", f));
    }
    ys.push_back(enc.y);
  }
  rep.conditions.add("per_sample", each, concat(xs.size(), " samples"));

  bool pairwise = true;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (ys[i] == ys[j] && xs[i] != xs[j]) {
        pairwise = false;
        rep.counterexamples.push_back(concat("samples ", i, " and ", j, " share an encoding"));
      }
  rep.conditions.add("pairwise_distinct", pairwise, "equal encodings imply equal inputs");

  bool flips = true;
  std::size_t tried = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto enc = mach.encode(xs[i]);
    auto cov = enc.trace.t2.tiling.covered();
    for (const G& g : cov) {
      const Symbol a = xs[i].at(g);
      std::optional<Configuration<G>> alt;
      for (Symbol b = 0; b < s.x.alphabet().size() && !alt; ++b) {
        if (b == a) continue;
        auto cand = xs[i].overwrite(Pattern<G>(FiniteSet<G>{g}, {b}));
        if (is_locally_admissible(s.x, cand)) alt = std::move(cand);
      }
      if (!alt) continue;
      ++tried;
      auto y2 = mach.encode(*alt).y;
      if (y2 == enc.y) {
        flips = false;
        rep.counterexamples.push_back(concat("sample ", i, ": changing ", g, " leaves the encoding unchanged"));
      }
      for (std::size_t k = 0; k < y2.labels().size(); ++k)
        if (y2.labels()[k] != enc.y.labels()[k])
          rep.observed_code_radius = std::max(rep.observed_code_radius, linf_distance(y2.window()[k], g));
      break;
    }
  }
  rep.conditions.add("one_cell_changes", flips && tried > 0,
                     concat(tried, " perturbations, observed code radius ", rep.observed_code_radius));
  return rep;
}

}  // namespace symdyn
