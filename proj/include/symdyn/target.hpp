#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symdyn/patterns.hpp"
#include "symdyn/quasitiling.hpp"
#include "symdyn/report.hpp"

namespace symdyn {

// Exact tilings of Z by centered intervals of the given lengths. Symbol 0 is the empty label,
// symbol i + 1 marks the center of a tile of shape i.
struct TilingSystem {
  std::vector<int> lengths;
  std::vector<int> offsets;  // tile i covers [c - offsets[i], c - offsets[i] + lengths[i])
  ShapeSet<Z1> shapes;
  Sft<Z1> sft;
  int frobenius = 0;  // largest total length not expressible as a sum of tile lengths

  std::size_t size() const { return lengths.size(); }
  Symbol symbol_of(int i) const { return i + 1; }
  int shape_of(Symbol s) const { return s - 1; }
  int step(int i, int j) const {
    return lengths[static_cast<std::size_t>(i)] - offsets[static_cast<std::size_t>(i)] + offsets[static_cast<std::size_t>(j)];
  }
  const FiniteSet<Z1>& shape(int i) const { return shapes[static_cast<std::size_t>(i)]; }
  // T-part of an aligned block of shape i.
  Pattern<Z1> aligned_labels(int i) const {
    const auto& s = shape(i);
    std::vector<Symbol> l(s.size(), 0);
    l[static_cast<std::size_t>(s.index_of(Z1{0}).value())] = symbol_of(i);
    return Pattern<Z1>(s, std::move(l));
  }
};

inline TilingSystem interval_tiling_system(std::vector<int> lengths) {
  std::sort(lengths.begin(), lengths.end());
  if (lengths.size() < 2) throw PreconditionError("interval_tiling_system: needs at least two tile lengths");
  if (std::adjacent_find(lengths.begin(), lengths.end()) != lengths.end())
    throw PreconditionError("interval_tiling_system: tile lengths must be distinct");
  if (lengths.front() < 1) throw PreconditionError("interval_tiling_system: tile lengths must be positive");
  int g = 0;
  for (int l : lengths) g = std::gcd(g, l);
  if (g != 1) throw PreconditionError("interval_tiling_system: tile lengths must be coprime");
  if (static_cast<int>(lengths.size()) + 1 > kMaxAlphabet) throw ResourceError("interval_tiling_system: too many lengths");

  TilingSystem t;
  t.lengths = lengths;
  std::vector<FiniteSet<Z1>> shapes;
  std::vector<std::string> names{"-"};
  for (int l : lengths) {
    int a = l / 2;
    t.offsets.push_back(a);
    shapes.push_back(interval(-a, l - a));
    names.push_back("S" + std::to_string(l));
  }
  t.shapes = ShapeSet<Z1>(shapes);
  const int n = static_cast<int>(lengths.size());
  int dmax_all = 0;
  std::vector<Pattern<Z1>> f;
  for (int i = 0; i < n; ++i) {
    int dmax = 0;
    for (int j = 0; j < n; ++j) dmax = std::max(dmax, t.step(i, j));
    dmax_all = std::max(dmax_all, dmax);
    for (int gap = 1; gap <= dmax; ++gap)
      for (int j = 0; j < n; ++j) {
        if (gap == t.step(i, j)) continue;
        std::vector<Symbol> l(static_cast<std::size_t>(gap + 1), 0);
        l.front() = t.symbol_of(i);
        l.back() = t.symbol_of(j);
        f.emplace_back(interval(0, gap + 1), l);
      }
    std::vector<Symbol> run(static_cast<std::size_t>(dmax + 1), 0);
    run.front() = t.symbol_of(i);
    f.emplace_back(interval(0, dmax + 1), run);
  }
  f.push_back(Pattern<Z1>::constant(interval(0, dmax_all), 0));

  const int lmax = lengths.back();
  std::vector<char> rep(static_cast<std::size_t>(lmax * lmax + 1), 0);
  rep[0] = 1;
  for (std::size_t v = 1; v < rep.size(); ++v)
    for (int l : lengths)
      if (static_cast<int>(v) >= l && rep[v - static_cast<std::size_t>(l)]) rep[v] = 1;
  for (std::size_t v = 0; v < rep.size(); ++v)
    if (!rep[v]) t.frobenius = static_cast<int>(v);

  std::string name = "interval-tilings{";
  for (std::size_t i = 0; i < lengths.size(); ++i) name += (i ? "," : "") + std::to_string(lengths[i]);
  name += "}";
  t.sft = Sft<Z1>(Alphabet(names), f, interval(-dmax_all, dmax_all + 1),
                  centered_box<Z1>(t.frobenius + 1 + 3 * dmax_all), name);
  return t;
}

// Shape conditions on a tile S of the tiling system used for the target construction.
template <LatticeElement G>
ConditionReport validate_y0_shape_conditions(const FiniteSet<G>& s, const FiniteSet<G>& k, const Rational& eps,
                                             const Sft<G>& y1, std::optional<double> h_y1 = std::nullopt,
                                             CountMode mode = CountMode::extendable()) {
  if (s.empty()) throw PreconditionError("validate_y0_shape_conditions: empty shape");
  ConditionReport r;
  auto k2 = power(k, 2);
  auto inner = interior(s, k2);
  r.add("S1", is_subset(k, inner), concat("K inside int^2 S: |int^2 S| = ", inner.size()));
  const double n = static_cast<double>(s.size());
  const double e = to_double(eps);
  const bool s2 = Rational(static_cast<std::int64_t>(s.size())) * eps > 1 && 2 * n < std::exp(e * n);
  r.add("S2", s2, concat("|S| = ", s.size(), ", 1/eps = ", 1 / e, ", e^(eps|S|) = ", std::exp(e * n)));
  auto bd = boundary(s, k2);
  r.add("S3", Rational(static_cast<std::int64_t>(bd.size())) < eps * static_cast<std::int64_t>(s.size()),
        concat("|bd^2 S| = ", bd.size(), " vs eps|S| = ", e * n));
  double h1 = 0;
  if (h_y1) {
    h1 = *h_y1;
  } else if constexpr (std::is_same_v<G, Z1>) {
    h1 = entropy_1d(y1);
  } else {
    throw PreconditionError("validate_y0_shape_conditions: h(Y1) must be supplied off Z");
  }
  auto est = entropy_estimate(y1, s, mode);
  r.add("S4", est.h < h1 + e, concat("h(S,Y1) = ", est.h, " [", est.mode.tag(), "], h(Y1) + eps = ", h1 + e));
  return r;
}

// Y, the tiling system, the product Z0 = Y x T and the SFT window K used for collars.
struct TargetSetup {
  Sft<Z1> y;
  TilingSystem t;
  FiniteSet<Z1> k;
  Sft<Z1> z0;
  ProductCoding pc;
  int margin = 0;
  std::vector<std::vector<Pattern<Z1>>> candidates;  // P(S_i, Y), extendable

  FiniteSet<Z1> collar(int i) const { return boundary(t.shape(i), power(k, 2)); }
  Pattern<Z1> lift(int i, const Pattern<Z1>& yb) const { return product_pattern(yb, t.aligned_labels(i), pc.t_size); }
};

inline TargetSetup make_target_setup(const Sft<Z1>& y, TilingSystem t, std::optional<FiniteSet<Z1>> k = std::nullopt,
                                     int margin = -1) {
  TargetSetup s;
  s.y = y;
  s.t = std::move(t);
  s.k = k ? *k : unite(y.window(), y.gap_window());
  if (!s.k.contains_identity()) throw PreconditionError("make_target_setup: K must contain e");
  s.pc = ProductCoding{static_cast<int>(s.t.sft.alphabet().size())};
  auto z = product_system(y, s.t.sft);
  int rad = z.radius();
  for (const auto& sh : s.t.shapes.shapes()) rad = std::max(rad, sh.radius());
  s.z0 = z.with_window(centered_box<Z1>(rad)).with_name("Z0");
  s.margin = margin >= 0 ? margin : std::max(y.default_margin(), s.t.sft.radius() + 1);
  for (std::size_t i = 0; i < s.t.size(); ++i)
    s.candidates.push_back(enumerate_patterns(y, s.t.shapes[i], CountMode::extendable(s.margin)));
  return s;
}

// Aligned blocks of shape i allowed in z, as Y-patterns in lexicographic order.
inline std::vector<Pattern<Z1>> aligned_blocks(const TargetSetup& s, const Sft<Z1>& z, int i) {
  std::vector<Pattern<Z1>> out;
  for (const auto& yb : s.candidates[static_cast<std::size_t>(i)])
    if (is_extendable(z, s.lift(i, yb), s.margin)) out.push_back(yb);
  return out;
}

enum class WitnessKind { separating = 1, zero_collar = 2, one_at = 3 };

struct WitnessBlock {
  WitnessKind kind = WitnessKind::separating;
  Z1 cell{};  // separated cell (type 1) or the cell carrying the one (type 3)
  Pattern<Z1> block;
};

struct WitnessSet {
  std::vector<std::vector<WitnessBlock>> per_shape;
  std::vector<std::size_t> bound;  // 2|S| + |A|^|bd^2 S|

  bool contains(int i, const Pattern<Z1>& yb) const {
    for (const auto& w : per_shape[static_cast<std::size_t>(i)])
      if (w.block == yb) return true;
    return false;
  }
  std::size_t count(int i, WitnessKind k) const {
    std::size_t n = 0;
    for (const auto& w : per_shape[static_cast<std::size_t>(i)]) n += w.kind == k;
    return n;
  }
};

inline WitnessSet build_witness_set(const TargetSetup& s, std::optional<Symbol> zero = std::nullopt,
                                    std::optional<Symbol> one = std::nullopt) {
  if (!zero) zero = s.y.alphabet().zero();
  if (!one) one = s.y.alphabet().one();
  WitnessSet w;
  for (int i = 0; i < static_cast<int>(s.t.size()); ++i) {
    const auto& sh = s.t.shape(i);
    auto a0 = aligned_blocks(s, s.z0, i);
    std::vector<WitnessBlock> ws;
    for (const Z1& c : sh) {
      if (c.is_identity()) continue;
      auto it = std::find_if(a0.begin(), a0.end(), [&](const auto& b) { return b.at(Z1{0}) != b.at(c); });
      if (it == a0.end())
        throw HypothesisError(concat("build_witness_set: no aligned block separates e and ", c, " in shape ", i));
      ws.push_back({WitnessKind::separating, c, *it});
    }
    if (!zero) throw PreconditionError("build_witness_set: no distinguished zero symbol");
    auto col = s.collar(i);
    std::vector<Pattern<Z1>> collars;
    if (col.empty()) collars.emplace_back();
    else collars = enumerate_patterns(s.y, col, CountMode::extendable(s.margin));
    for (const auto& v : collars) {
      auto it = std::find_if(a0.begin(), a0.end(), [&](const auto& b) { return b.at(Z1{0}) == *zero && b.restrict(col) == v; });
      if (it == a0.end()) throw HypothesisError(concat("build_witness_set: collar not realizable with zero at e, shape ", i));
      ws.push_back({WitnessKind::zero_collar, Z1{0}, *it});
    }
    if (!one || *one == *zero) throw PreconditionError("build_witness_set: no distinguished one symbol");
    for (const Z1& c : sh) {
      auto it = std::find_if(a0.begin(), a0.end(), [&](const auto& b) { return b.at(c) == *one; });
      if (it == a0.end()) throw HypothesisError(concat("build_witness_set: no aligned block has a one at ", c));
      ws.push_back({WitnessKind::one_at, c, *it});
    }
    w.per_shape.push_back(std::move(ws));
    double cap = 2.0 * static_cast<double>(sh.size()) +
                 std::pow(static_cast<double>(s.y.alphabet().size()), static_cast<double>(col.size()));
    w.bound.push_back(static_cast<std::size_t>(std::min(cap, 1e18)));
  }
  return w;
}

// Y-part membership in pi(z): some T-labels make the product pattern extendable.
inline bool projection_contains(const Sft<Z1>& z, const ProductCoding& pc, const Pattern<Z1>& yb, int margin) {
  auto win = margin > 0 ? product(yb.shape(), centered_box<Z1>(margin)) : yb.shape();
  Search<Z1> srch(z, win);
  for (std::size_t k = 0; k < yb.size(); ++k) {
    std::vector<Symbol> allowed;
    for (Symbol t = 0; t < pc.t_size; ++t) allowed.push_back(pc.pair(yb.labels()[k], t));
    srch.restrict(yb.shape()[k], allowed);
  }
  return srch.exists();
}

// Words on [0,w) lying in pi(z), in lexicographic order. Depth-first over Y-symbols carrying the set of
// reachable product states, so prefixes are shared.
inline std::vector<Pattern<Z1>> projection_words(const Sft<Z1>& z, const ProductCoding& pc, const Sft<Z1>& y, int w,
                                                 int margin) {
  margin = std::max(margin, 0);
  auto win = interval(-margin, w + margin);
  std::vector<Symbol> all(static_cast<std::size_t>(z.alphabet().size()));
  std::iota(all.begin(), all.end(), 0);
  detail::LineEngine eng(z, win, std::vector<std::vector<Symbol>>(win.size(), all), SearchLimits{});
  std::vector<Pattern<Z1>> out;
  if (!eng.feasible()) return out;
  const auto m = static_cast<std::size_t>(margin);
  std::vector<SymbolMask> lift(static_cast<std::size_t>(y.alphabet().size()), 0);
  for (Symbol a = 0; a < y.alphabet().size(); ++a)
    for (Symbol t = 0; t < pc.t_size; ++t) lift[static_cast<std::size_t>(a)] |= symbol_bit(pc.pair(a, t));
  const SymbolMask any = ~SymbolMask{0};
  std::vector<std::uint64_t> start = eng.viable(0);
  for (std::size_t i = 0; i < m; ++i) start = eng.successors(i, start, any);
  std::vector<Symbol> word(static_cast<std::size_t>(w));
  std::function<void(std::size_t, const std::vector<std::uint64_t>&)> rec = [&](std::size_t k,
                                                                              const std::vector<std::uint64_t>& set) {
    if (set.empty()) return;
    if (k == static_cast<std::size_t>(w)) {
      out.emplace_back(interval(0, w), word);
      return;
    }
    for (Symbol a = 0; a < y.alphabet().size(); ++a) {
      word[k] = a;
      rec(k + 1, eng.successors(m + k, set, lift[static_cast<std::size_t>(a)]));
    }
  };
  rec(0, start);
  return out;
}

struct SandwichReport {
  bool lower = true;  // P(W, Y1) inside P(W, pi(Z))
  bool upper = true;  // P(W, pi(Z)) inside P(W, Y)
  std::optional<Pattern<Z1>> counterexample;
  bool pass() const { return lower && upper; }
};

inline SandwichReport check_sandwich(const Sft<Z1>& z, const ProductCoding& pc, const Sft<Z1>& y1, const Sft<Z1>& y,
                                     int w, int margin) {
  SandwichReport r;
  for (const auto& p : enumerate_patterns(y1, interval(0, w), CountMode::extendable(margin)))
    if (!projection_contains(z, pc, p, margin)) {
      r.lower = false;
      r.counterexample = p;
      return r;
    }
  for (const auto& p : projection_words(z, pc, y, w, margin))
    if (!is_extendable(y, p, margin)) {
      r.upper = false;
      r.counterexample = p;
      return r;
    }
  return r;
}

// Projection of a stage of the chain, with the window used to estimate its entropy.
struct ProjectedSystem {
  Sft<Z1> z;
  ProductCoding pc;
  Sft<Z1> y;
  int margin = 0;

  bool contains(const Pattern<Z1>& yb) const { return projection_contains(z, pc, yb, margin); }
  std::uint64_t count(int w) const { return projection_words(z, pc, y, w, margin).size(); }
  std::optional<Configuration<Z1>> sample(const FiniteSet<Z1>& window, std::mt19937_64& rng) const {
    auto c = sample_configuration(z, window, rng);
    if (!c) return std::nullopt;
    auto [yp, tp] = split_pattern(c->as_pattern(), pc.t_size);
    return Configuration<Z1>(yp);
  }
};

struct ChainStage {
  std::vector<std::size_t> counts;  // |P^a(S_i, Z_n)|
  std::size_t total = 0;
  std::uint64_t projection_count = 0;
  double h_projection = 0;
  // Block forbidden to pass to the next stage.
  std::optional<int> shape_index;
  std::optional<Pattern<Z1>> beta;
  std::optional<Pattern<Z1>> sibling;  // aligned block with the same collar
};

struct ChainOptions {
  double a = 0;
  double b = 0;
  int projection_window = 10;
  bool stop_on_entry = true;
  bool throw_on_miss = true;
  std::size_t max_stages = 100000;
};

struct ChainResult {
  std::vector<ChainStage> stages;  // stage n describes Z_n
  std::vector<Sft<Z1>> systems;    // Z_0, Z_1, ...
  std::optional<std::size_t> selected;
  bool terminal = false;
  double h_y_est = 0;
  double h_y1_est = 0;
  double eps_bound = 0;
  std::string diagnostic;
  ProductCoding pc;
  Sft<Z1> y;
  int margin = 0;

  ProjectedSystem projection(std::size_t n) const { return {systems.at(n), pc, y, margin}; }
};

class ChainMiss : public HypothesisError {
 public:
  ChainMiss(const std::string& msg, ChainResult r) : HypothesisError(msg), result_(std::move(r)) {}
  const ChainResult& result() const { return result_; }

 private:
  ChainResult result_;
};

namespace detail {

inline std::optional<std::pair<int, std::pair<Pattern<Z1>, Pattern<Z1>>>> eligible_block(
    const TargetSetup& s, const Sft<Z1>& y1, const WitnessSet& w, const std::vector<std::vector<Pattern<Z1>>>& aligned) {
  const int y1_margin = std::max(s.margin, y1.default_margin());
  for (int i = 0; i < static_cast<int>(aligned.size()); ++i) {
    const auto& blocks = aligned[static_cast<std::size_t>(i)];
    auto col = s.collar(i);
    for (const auto& beta : blocks) {
      if (is_extendable(y1, beta, y1_margin)) continue;  // B1
      if (w.contains(i, beta)) continue;                  // B2
      const auto collar = beta.restrict(col);
      for (const auto& b : blocks)                        // B3
        if (b != beta && b.restrict(col) == collar) return std::make_pair(i, std::make_pair(beta, b));
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Descending chain Z_{n+1} = <Z_n | beta_n>; stops at the terminal stage or, optionally, when the
// window entropy estimate of pi(Z_n) enters (a, b).
inline ChainResult run_forbid_chain(const TargetSetup& s, const Sft<Z1>& y1, const WitnessSet& w,
                                    const ChainOptions& opt) {
  if (!(opt.a < opt.b)) throw PreconditionError("run_forbid_chain: need a < b");
  ChainResult res;
  res.pc = s.pc;
  res.y = s.y;
  res.margin = s.margin;
  const int pw = opt.projection_window;
  auto est = [&](const Sft<Z1>& sft) {
    auto n = enumerate_patterns(sft, interval(0, pw), CountMode::extendable(s.margin)).size();
    return std::log(static_cast<double>(n)) / pw;
  };
  res.h_y_est = est(s.y);
  res.h_y1_est = est(y1);
  if (!(res.h_y1_est <= opt.a && opt.a < res.h_y_est))
    throw PreconditionError(concat("run_forbid_chain: (a, b) must meet [h(Y1), h(Y)] at window ", pw,
                                   "; got h(Y1) = ", res.h_y1_est, ", h(Y) = ", res.h_y_est));
  const double la = std::log(static_cast<double>(s.y.alphabet().size()));
  res.eps_bound = std::min((opt.b - opt.a) / (3 + std::log(2.0) + 2 * la), (opt.b - opt.a) / (5 + 4 * la));

  Sft<Z1> z = s.z0;
  for (std::size_t n = 0;; ++n) {
    res.systems.push_back(z);
    ChainStage st;
    std::vector<std::vector<Pattern<Z1>>> aligned;
    for (int i = 0; i < static_cast<int>(s.t.size()); ++i) {
      aligned.push_back(aligned_blocks(s, z, i));
      st.counts.push_back(aligned.back().size());
      st.total += aligned.back().size();
    }
    st.projection_count = projection_words(z, s.pc, s.y, pw, s.margin).size();
    st.h_projection = std::log(static_cast<double>(st.projection_count)) / pw;
    const bool inside = opt.a < st.h_projection && st.h_projection < opt.b;
    if (inside && !res.selected) res.selected = n;
    auto next = detail::eligible_block(s, y1, w, aligned);
    if (next) {
      st.shape_index = next->first;
      st.beta = next->second.first;
      st.sibling = next->second.second;
    }
    res.stages.push_back(st);
    if (!next) {
      res.terminal = true;
      break;
    }
    if ((inside && opt.stop_on_entry) || n + 1 >= opt.max_stages) break;
    z = z.with_forbidden({s.lift(*st.shape_index, *st.beta)}, "Z" + std::to_string(n + 1));
  }
  if (!res.selected) {
    std::ostringstream os;
    os << "run_forbid_chain: projection entropy never entered (" << opt.a << ", " << opt.b << "); trajectory:";
    for (const auto& st : res.stages) os << ' ' << st.h_projection;
    res.diagnostic = os.str();
    if (opt.throw_on_miss) throw ChainMiss(res.diagnostic, res);
  }
  return res;
}

struct ChainVerification {
  bool counts_decrease = true;
  bool b1 = true;
  bool b2 = true;
  bool b3 = true;
  bool witnesses_survive = true;
  bool sandwich = true;
  std::vector<std::string> failures;
  bool pass() const { return counts_decrease && b1 && b2 && b3 && witnesses_survive && sandwich; }
};

// Post-hoc audit of every stage; sandwich checked on the given windows.
inline ChainVerification verify_chain(const TargetSetup& s, const Sft<Z1>& y1, const WitnessSet& w,
                                      const ChainResult& r, const std::vector<int>& sandwich_windows) {
  ChainVerification v;
  const int y1_margin = std::max(s.margin, y1.default_margin());
  for (std::size_t n = 0; n < r.stages.size(); ++n) {
    const auto& st = r.stages[n];
    const auto& z = r.systems[n];
    if (n + 1 < r.stages.size() && !(r.stages[n + 1].total < st.total)) {
      v.counts_decrease = false;
      v.failures.push_back(concat("stage ", n, ": count did not decrease"));
    }
    if (st.beta && n + 1 < r.systems.size()) {
      const int i = *st.shape_index;
      if (is_extendable(y1, *st.beta, y1_margin)) {
        v.b1 = false;
        v.failures.push_back(concat("stage ", n, ": B1"));
      }
      if (w.contains(i, *st.beta)) {
        v.b2 = false;
        v.failures.push_back(concat("stage ", n, ": B2"));
      }
      auto col = s.collar(i);
      bool ok = *st.sibling != *st.beta && st.sibling->restrict(col) == st.beta->restrict(col) &&
                is_extendable(z, s.lift(i, *st.beta), s.margin) && is_extendable(z, s.lift(i, *st.sibling), s.margin);
      if (!ok) {
        v.b3 = false;
        v.failures.push_back(concat("stage ", n, ": B3"));
      }
    }
    for (int i = 0; i < static_cast<int>(w.per_shape.size()); ++i)
      for (const auto& wb : w.per_shape[static_cast<std::size_t>(i)])
        if (!is_extendable(z, s.lift(i, wb.block), s.margin)) {
          v.witnesses_survive = false;
          v.failures.push_back(concat("stage ", n, ": witness lost in shape ", i));
        }
    for (int win : sandwich_windows)
      if (!check_sandwich(z, s.pc, y1, s.y, win, s.margin).pass()) {
        v.sandwich = false;
        v.failures.push_back(concat("stage ", n, ": sandwich fails at window ", win));
      }
  }
  return v;
}

struct SurgeryResult {
  Configuration<Z1> config;
  std::vector<Z1> replaced;  // centers where beta was swapped for b
};

// Replace every aligned appearance of beta (tile shape i) by b in a product configuration.
inline SurgeryResult replace_block(const TargetSetup& s, const Configuration<Z1>& z, int i, const Pattern<Z1>& beta,
                                   const Pattern<Z1>& b) {
  auto col = s.collar(i);
  if (beta.shape() != s.t.shape(i) || b.shape() != s.t.shape(i))
    throw PreconditionError("replace_block: blocks must have the tile shape");
  if (beta.restrict(col) != b.restrict(col)) throw HypothesisError("replace_block: blocks differ on the collar");
  auto lifted = s.lift(i, beta);
  SurgeryResult r{z, occurrences(z, lifted)};
  auto labels = z.labels();
  for (const Z1& c : r.replaced)
    for (std::size_t k = 0; k < b.size(); ++k) {
      auto slot = static_cast<std::size_t>(z.slot(b.shape()[k] + c));
      labels[slot] = s.pc.pair(b.labels()[k], s.pc.second(labels[slot]));
    }
  r.config = Configuration<Z1>(z.window(), std::move(labels), z.mode());
  return r;
}

}  // namespace symdyn
