#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symdyn/search.hpp"
#include "symdyn/transfer.hpp"

namespace symdyn {

// Which surrogate for P(F, X) is being counted.
struct CountMode {
  enum class Kind { locally_admissible, extendable };
  Kind kind = Kind::locally_admissible;
  int margin = 0;  // extendable only; -1 selects the SFT default 2 * radius(K_sft)

  static CountMode local() { return {}; }
  static CountMode extendable(int m = -1) { return {Kind::extendable, m}; }

  template <LatticeElement G>
  CountMode resolved(const Sft<G>& sft) const {
    CountMode r = *this;
    if (r.kind == Kind::extendable && r.margin < 0) r.margin = sft.default_margin();
    if (r.kind == Kind::extendable && r.margin == 0) r.kind = Kind::locally_admissible;
    return r;
  }
  std::string tag() const {
    if (kind == Kind::locally_admissible) return "locally_admissible";
    return "extendable(" + (margin < 0 ? std::string("default") : std::to_string(margin)) + ")";
  }
  friend bool operator==(const CountMode&, const CountMode&) = default;
};

struct EnumerationOptions {
  std::uint64_t cap = 5'000'000;
  SearchLimits limits{};
};

// True if p extends to a locally admissible labeling of shape(p) fattened by the margin box.
template <LatticeElement G>
bool is_extendable(const Sft<G>& sft, const Pattern<G>& p, int margin, const SearchLimits& lim = {}) {
  auto w = margin > 0 ? product(p.shape(), centered_box<G>(margin)) : p.shape();
  Search<G> s(sft, w, BoundaryMode::free, lim);
  s.fix(p);
  return s.exists();
}

// Sorted list of patterns on F in the given mode.
template <LatticeElement G>
std::vector<Pattern<G>> enumerate_patterns(const Sft<G>& sft, const FiniteSet<G>& f, CountMode mode = {},
                                           const EnumerationOptions& opt = {}) {
  if (f.empty()) throw PreconditionError("enumerate_patterns: F must be nonempty");
  mode = mode.resolved(sft);
  std::vector<Pattern<G>> out;
  Search<G> s(sft, f, BoundaryMode::free, opt.limits);
  s.for_each([&](const std::vector<Symbol>& v) {
    Pattern<G> p(f, v);
    if (mode.kind == CountMode::Kind::extendable && !is_extendable(sft, p, mode.margin, opt.limits)) return true;
    if (out.size() >= opt.cap) throw ResourceError("enumerate_patterns: pattern count exceeds cap");
    out.push_back(std::move(p));
    return true;
  });
  return out;
}

// Exact count, rank and unrank of the restrictions to F of locally admissible labelings of a line
// window W containing F, in lexicographic order of their label vectors. Uses a memoised subset
// construction over transfer states, so extendable patterns are counted without enumeration.
class RestrictionCodec1D {
 public:
  RestrictionCodec1D(const Sft<Z1>& sft, FiniteSet<Z1> w, FiniteSet<Z1> f, const SearchLimits& lim = {})
      : w_(std::move(w)), f_(std::move(f)) {
    if (!is_subset(f_, w_)) throw PreconditionError("RestrictionCodec1D: F must lie in W");
    all_.resize(static_cast<std::size_t>(sft.alphabet().size()));
    std::iota(all_.begin(), all_.end(), 0);
    full_ = all_.size() >= 64 ? ~SymbolMask{0} : (SymbolMask{1} << all_.size()) - 1;
    eng_ = std::make_shared<detail::LineEngine>(sft, w_, std::vector<std::vector<Symbol>>(w_.size(), all_), lim);
    in_f_.assign(w_.size(), 0);
    for (std::size_t i = 0; i < w_.size(); ++i) in_f_[i] = f_.contains(w_[i]);
    memo_ = std::make_shared<Memo>();
  }

  const FiniteSet<Z1>& shape() const { return f_; }
  const FiniteSet<Z1>& window() const { return w_; }

  BigInt count() const {
    if (!eng_->feasible()) return 0;
    return from(0, eng_->viable(0));
  }

  // Labels follow the canonical order of F.
  std::optional<BigInt> rank(const std::vector<Symbol>& v) const {
    if (v.size() != f_.size() || !eng_->feasible()) return std::nullopt;
    BigInt r = 0;
    auto cur = eng_->viable(0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (!in_f_[i]) {
        cur = eng_->successors(i, cur, full_);
        continue;
      }
      if (v[k] < 0 || static_cast<std::size_t>(v[k]) >= all_.size()) return std::nullopt;
      for (Symbol a = 0; a < v[k]; ++a) r += from(i + 1, eng_->successors(i, cur, symbol_bit(a)));
      cur = eng_->successors(i, cur, symbol_bit(v[k]));
      if (cur.empty()) return std::nullopt;
      ++k;
    }
    return r;
  }

  std::vector<Symbol> unrank(BigInt r) const {
    if (r < 0 || !(r < count())) throw PreconditionError("RestrictionCodec1D::unrank: index out of range");
    std::vector<Symbol> out;
    auto cur = eng_->viable(0);
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (!in_f_[i]) {
        cur = eng_->successors(i, cur, full_);
        continue;
      }
      bool placed = false;
      for (Symbol a : all_) {
        auto nxt = eng_->successors(i, cur, symbol_bit(a));
        BigInt c = from(i + 1, nxt);
        if (r < c) {
          out.push_back(a);
          cur = std::move(nxt);
          placed = true;
          break;
        }
        r -= c;
      }
      if (!placed) throw InvariantError("RestrictionCodec1D::unrank: counts inconsistent");
    }
    return out;
  }

 private:
  using Memo = std::map<std::pair<std::size_t, std::vector<std::uint64_t>>, BigInt>;

  BigInt from(std::size_t i, std::vector<std::uint64_t> cur) const {
    while (i < w_.size() && !in_f_[i] && !cur.empty()) cur = eng_->successors(i, cur, full_), ++i;
    if (cur.empty()) return 0;
    if (i == w_.size()) return 1;
    auto key = std::make_pair(i, cur);
    if (auto it = memo_->find(key); it != memo_->end()) return it->second;
    BigInt c = 0;
    for (Symbol a : all_) {
      auto nxt = eng_->successors(i, cur, symbol_bit(a));
      if (!nxt.empty()) c += from(i + 1, std::move(nxt));
    }
    memo_->emplace(std::move(key), c);
    return c;
  }

  FiniteSet<Z1> w_, f_;
  std::vector<Symbol> all_;
  SymbolMask full_ = 0;
  std::vector<char> in_f_;
  std::shared_ptr<const detail::LineEngine> eng_;
  std::shared_ptr<Memo> memo_;
};

inline double log_bigint(const BigInt& n) {
  if (n <= 0) return -std::numeric_limits<double>::infinity();
  const auto bits = boost::multiprecision::msb(n);
  if (bits < 900) return std::log(n.convert_to<double>());
  const auto shift = static_cast<unsigned>(bits - 900);
  BigInt top = n >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

template <LatticeElement G>
std::uint64_t count_patterns(const Sft<G>& sft, const FiniteSet<G>& f, CountMode mode = {},
                             const EnumerationOptions& opt = {}) {
  if (f.empty()) throw PreconditionError("count_patterns: F must be nonempty");
  mode = mode.resolved(sft);
  if constexpr (std::is_same_v<G, Z1>) {
    if (mode.kind == CountMode::Kind::locally_admissible) {
      BigInt c = LexCodec1D(sft, f, opt.limits).count();
      if (c > opt.cap) throw ResourceError("count_patterns: pattern count exceeds cap");
      return static_cast<std::uint64_t>(c);
    }
    BigInt c = RestrictionCodec1D(sft, product(f, centered_box<Z1>(mode.margin)), f, opt.limits).count();
    if (c > opt.cap) throw ResourceError("count_patterns: pattern count exceeds cap");
    return static_cast<std::uint64_t>(c);
  }
  std::uint64_t n = 0;
  Search<G> s(sft, f, BoundaryMode::free, opt.limits);
  s.for_each([&](const std::vector<Symbol>& v) {
    if (mode.kind == CountMode::Kind::extendable && !is_extendable(sft, Pattern<G>(f, v), mode.margin, opt.limits))
      return true;
    if (++n > opt.cap) throw ResourceError("count_patterns: pattern count exceeds cap");
    return true;
  });
  return n;
}

// Exact pattern count; on Z no enumeration happens, elsewhere the enumeration cap applies.
template <LatticeElement G>
BigInt count_patterns_exact(const Sft<G>& sft, const FiniteSet<G>& f, CountMode mode = {},
                            const EnumerationOptions& opt = {}) {
  if (f.empty()) throw PreconditionError("count_patterns_exact: F must be nonempty");
  mode = mode.resolved(sft);
  if constexpr (std::is_same_v<G, Z1>) {
    auto w = mode.kind == CountMode::Kind::extendable ? product(f, centered_box<Z1>(mode.margin)) : f;
    return RestrictionCodec1D(sft, w, f, opt.limits).count();
  } else {
    return BigInt(count_patterns(sft, f, mode, opt));
  }
}

struct EntropyEstimate {
  std::uint64_t count = 0;  // saturates at UINT64_MAX
  double log_count = 0;
  std::size_t cells = 0;
  double h = 0;
  CountMode mode;
};

// h_F = ln(count) / |F|.
template <LatticeElement G>
EntropyEstimate entropy_estimate(const Sft<G>& sft, const FiniteSet<G>& f, CountMode mode = {},
                                 const EnumerationOptions& opt = {}) {
  EntropyEstimate e;
  e.mode = mode.resolved(sft);
  BigInt c = count_patterns_exact(sft, f, e.mode, opt);
  e.count = c > BigInt(UINT64_MAX) ? UINT64_MAX : static_cast<std::uint64_t>(c);
  e.log_count = log_bigint(c);
  e.cells = f.size();
  e.h = c == 0 ? -std::numeric_limits<double>::infinity() : e.log_count / static_cast<double>(f.size());
  return e;
}

// Lexicographically least locally admissible labeling of w extending the fixed pattern.
template <LatticeElement G>
std::optional<Configuration<G>> complete(const Sft<G>& sft, const FiniteSet<G>& w, const Pattern<G>& fixed,
                                         const SearchLimits& lim = {}) {
  Search<G> s(sft, w, BoundaryMode::free, lim);
  s.fix(fixed);
  return s.first();
}

// y = y1 on F, y2 off F; requires agreement of y1, y2 on the KK^-1-boundary of F.
template <LatticeElement G>
Configuration<G> excise(const Sft<G>& sft, const Configuration<G>& y1, const Configuration<G>& y2,
                        const FiniteSet<G>& f) {
  if (y1.window() != y2.window()) throw PreconditionError("excise: configurations need a common window");
  const auto& w = y1.window();
  auto kk = difference_set(sft.window());
  if (!is_subset(product(f, kk), w)) throw PreconditionError("excise: window must contain F fattened by KK^-1");
  if (!is_locally_admissible(sft, y1) || !is_locally_admissible(sft, y2))
    throw PreconditionError("excise: inputs must be locally admissible");
  auto bd = boundary(f, kk);
  if (y1.restrict(bd) != y2.restrict(bd)) throw HypothesisError("excise: boundary patterns differ");
  std::vector<Symbol> l = y2.labels();
  for (const G& g : f) l[static_cast<std::size_t>(w.index_of(g).value())] = y1.at(g);
  Configuration<G> y(w, std::move(l), y1.mode());
  if (auto v = find_violation(sft, y)) throw InvariantError("excise: output not locally admissible");
  return y;
}

// Lexicographically least admissible configuration on W containing p1 and p2.
template <LatticeElement G>
Configuration<G> glue(const Sft<G>& sft, const Pattern<G>& p1, const Pattern<G>& p2, const FiniteSet<G>& w,
                      const SearchLimits& lim = {}) {
  if (!sft.mix()) throw PreconditionError("glue: SFT has no K_mix");
  if (!disjoint(product(*sft.mix(), p1.shape()), p2.shape()))
    throw HypothesisError("glue: gap violation, K_mix * shape(p1) meets shape(p2)");
  if (!is_subset(p1.shape(), w) || !is_subset(p2.shape(), w)) throw PreconditionError("glue: patterns leave W");
  Search<G> s(sft, w, BoundaryMode::free, lim);
  s.fix(p1);
  s.fix(p2);
  auto r = s.first();
  if (!r) throw NoSolutionError("glue: no admissible completion; K_mix does not witness strong irreducibility here");
  return *r;
}

template <LatticeElement G>
struct IrreducibilityReport {
  bool pass = true;
  int radius = 0;
  std::uint64_t pairs_tested = 0;
  std::optional<std::pair<Pattern<G>, Pattern<G>>> counterexample;
  std::string scope;
};

// Bounded check: boxes of side <= r (one anchored at e), every offset placing the second box
// K-separated from the first within distance 2r + radius(K), extendable pattern pairs glued on the
// bounding box fattened by the default margin.
template <LatticeElement G>
IrreducibilityReport<G> check_strong_irreducibility(const Sft<G>& sft, const FiniteSet<G>& k, int r_chk,
                                                    const EnumerationOptions& opt = {}) {
  if (r_chk < 1) throw PreconditionError("check_strong_irreducibility: radius must be positive");
  IrreducibilityReport<G> rep;
  rep.radius = r_chk;
  const int margin = std::max(1, sft.default_margin());
  std::vector<FiniteSet<G>> shapes;
  {
    G lo = G::identity();
    G side;
    for (int i = 0; i < G::dim; ++i) side[i] = 1;
    while (true) {
      shapes.push_back(box<G>(lo, side));
      int i = G::dim - 1;
      while (i >= 0) {
        if (++side[i] <= r_chk) break;
        side[i] = 1;
        --i;
      }
      if (i < 0) break;
    }
  }
  std::map<FiniteSet<G>, std::vector<Pattern<G>>> cache;
  auto pats = [&](const FiniteSet<G>& s) -> const std::vector<Pattern<G>>& {
    auto it = cache.find(s);
    if (it == cache.end()) it = cache.emplace(s, enumerate_patterns(sft, s, CountMode::extendable(), opt)).first;
    return it->second;
  };
  const int reach = 2 * r_chk + k.radius();
  auto offsets = centered_box<G>(reach);
  for (const auto& s1 : shapes) {
    auto ks1 = product(k, s1);
    for (const auto& s2base : shapes)
      for (const G& g : offsets) {
        auto s2 = translate(s2base, g);
        if (!disjoint(ks1, s2)) continue;
        auto w = product(unite(s1, s2), centered_box<G>(margin));
        const auto& a = pats(s1);
        const auto& b0 = pats(s2base);
        for (const auto& p1 : a)
          for (const auto& q : b0) {
            auto p2 = q.translate(g);
            ++rep.pairs_tested;
            Search<G> s(sft, w, BoundaryMode::free, opt.limits);
            s.fix(p1);
            s.fix(p2);
            if (!s.exists()) {
              rep.pass = false;
              rep.counterexample.emplace(p1, p2);
              rep.scope = "refuted at radius " + std::to_string(r_chk);
              return rep;
            }
          }
      }
  }
  rep.scope = "verified up to radius " + std::to_string(r_chk);
  return rep;
}

template <LatticeElement G>
struct SeparationResult {
  bool separates = false;
  std::optional<Configuration<G>> witness;
  std::string scope;
};

// Search for an admissible labeling of W with y(g) != y(e).
template <LatticeElement G>
SeparationResult<G> simply_separates(const Sft<G>& sft, const G& g, const FiniteSet<G>& w,
                                     const SearchLimits& lim = {}) {
  const G e = G::identity();
  if (!w.contains(e) || !w.contains(g)) throw PreconditionError("simply_separates: {e, g} must lie in W");
  SeparationResult<G> r;
  const int n = sft.alphabet().size();
  if (!g.is_identity())
    for (Symbol a = 0; a < n && !r.separates; ++a)
      for (Symbol b = 0; b < n; ++b) {
        if (a == b) continue;
        Search<G> s(sft, w, BoundaryMode::free, lim);
        s.fix(e, a);
        s.fix(g, b);
        if (auto c = s.first()) {
          r.separates = true;
          r.witness = std::move(c);
          break;
        }
      }
  std::ostringstream os;
  os << (r.separates ? "witness found" : "no witness") << " on a window of " << w.size() << " cells";
  r.scope = os.str();
  return r;
}

// Product symbol (a, t) has index a * |A_T| + t.
struct ProductCoding {
  int t_size = 1;
  Symbol pair(Symbol a, Symbol t) const { return a * t_size + t; }
  Symbol first(Symbol s) const { return s / t_size; }
  Symbol second(Symbol s) const { return s % t_size; }
};

template <LatticeElement G>
Sft<G> product_system(const Sft<G>& x, const Sft<G>& t) {
  const int nx = x.alphabet().size();
  const int nt = t.alphabet().size();
  if (nx * nt > kMaxAlphabet) throw ResourceError("product_system: product alphabet exceeds cap");
  ProductCoding pc{nt};
  std::vector<std::string> names;
  for (Symbol a = 0; a < nx; ++a)
    for (Symbol b = 0; b < nt; ++b) names.push_back(x.alphabet().name(a) + ":" + t.alphabet().name(b));
  std::vector<Cylinder<G>> f;
  for (const auto& c : x.forbidden()) {
    std::vector<SymbolMask> m;
    for (SymbolMask xm : c.masks()) {
      SymbolMask out = 0;
      for (Symbol a = 0; a < nx; ++a)
        if ((xm >> a) & 1U)
          for (Symbol b = 0; b < nt; ++b) out |= symbol_bit(pc.pair(a, b));
      m.push_back(out);
    }
    f.emplace_back(c.shape(), std::move(m));
  }
  for (const auto& c : t.forbidden()) {
    std::vector<SymbolMask> m;
    for (SymbolMask tm : c.masks()) {
      SymbolMask out = 0;
      for (Symbol b = 0; b < nt; ++b)
        if ((tm >> b) & 1U)
          for (Symbol a = 0; a < nx; ++a) out |= symbol_bit(pc.pair(a, b));
      m.push_back(out);
    }
    f.emplace_back(c.shape(), std::move(m));
  }
  std::optional<FiniteSet<G>> mix;
  if (x.mix() && t.mix()) mix = unite(*x.mix(), *t.mix());
  return Sft<G>(Alphabet(std::move(names)), std::move(f), unite(x.window(), t.window()), mix,
                x.name() + "*" + t.name());
}

// Pair up two patterns on the same shape into a product pattern.
template <LatticeElement G>
Pattern<G> product_pattern(const Pattern<G>& px, const Pattern<G>& pt, int t_size) {
  if (px.shape() != pt.shape()) throw PreconditionError("product_pattern: shapes differ");
  ProductCoding pc{t_size};
  std::vector<Symbol> l;
  for (std::size_t i = 0; i < px.size(); ++i) l.push_back(pc.pair(px.labels()[i], pt.labels()[i]));
  return Pattern<G>(px.shape(), std::move(l));
}

template <LatticeElement G>
std::pair<Pattern<G>, Pattern<G>> split_pattern(const Pattern<G>& p, int t_size) {
  ProductCoding pc{t_size};
  std::vector<Symbol> a, b;
  for (Symbol s : p.labels()) {
    a.push_back(pc.first(s));
    b.push_back(pc.second(s));
  }
  return {Pattern<G>(p.shape(), std::move(a)), Pattern<G>(p.shape(), std::move(b))};
}

// Pseudorandom admissible configuration (exactly weighted on Z windows, randomized DFS elsewhere).
template <LatticeElement G>
std::optional<Configuration<G>> sample_configuration(const Sft<G>& sft, const FiniteSet<G>& w, std::mt19937_64& rng,
                                                     BoundaryMode mode = BoundaryMode::free,
                                                     const SearchLimits& lim = {}) {
  Search<G> s(sft, w, mode, lim);
  return s.sample(rng);
}

}  // namespace symdyn
