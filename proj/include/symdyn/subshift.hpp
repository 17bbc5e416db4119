#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symdyn/geometry.hpp"

namespace symdyn {

using Symbol = int;

class Alphabet {
 public:
  Alphabet() : Alphabet(std::vector<std::string>{"0"}) {}
  explicit Alphabet(std::vector<std::string> names, std::optional<Symbol> zero = std::nullopt,
                    std::optional<Symbol> one = std::nullopt)
      : names_(std::move(names)), zero_(zero), one_(one) {
    if (names_.empty()) throw PreconditionError("Alphabet: needs at least one symbol");
    auto sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw PreconditionError("Alphabet: duplicate symbol names");
    for (auto s : {zero_, one_})
      if (s && (*s < 0 || *s >= size())) throw PreconditionError("Alphabet: distinguished symbol out of range");
    if (zero_ && one_ && *zero_ == *one_) throw PreconditionError("Alphabet: zero and one coincide");
  }

  // Symbols "0" .. "n-1"; zero = 0 and one = 1 when available.
  static Alphabet numeric(int n) {
    if (n < 1) throw PreconditionError("Alphabet: needs at least one symbol");
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return Alphabet(std::move(names), 0, n >= 2 ? std::optional<Symbol>(1) : std::nullopt);
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(Symbol s) const { return names_.at(static_cast<std::size_t>(s)); }
  const std::vector<std::string>& names() const { return names_; }
  Symbol index_of(std::string_view n) const {
    for (int i = 0; i < size(); ++i)
      if (names_[static_cast<std::size_t>(i)] == n) return i;
    throw PreconditionError("Alphabet: unknown symbol '" + std::string(n) + "'");
  }
  std::optional<Symbol> zero() const { return zero_; }
  std::optional<Symbol> one() const { return one_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
  std::optional<Symbol> zero_;
  std::optional<Symbol> one_;
};

// Labeling of a finite shape; labels follow the shape's canonical order.
template <LatticeElement G>
class Pattern {
 public:
  Pattern() = default;
  Pattern(FiniteSet<G> shape, std::vector<Symbol> labels)
      : shape_(std::move(shape)), labels_(std::move(labels)) {
    if (shape_.size() != labels_.size()) throw PreconditionError("Pattern: labels must cover the shape");
  }
  // Constant pattern.
  static Pattern constant(FiniteSet<G> shape, Symbol s) {
    std::vector<Symbol> l(shape.size(), s);
    return Pattern(std::move(shape), std::move(l));
  }

  const FiniteSet<G>& shape() const { return shape_; }
  const std::vector<Symbol>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  Symbol at(const G& g) const {
    auto i = shape_.index_of(g);
    if (!i) throw PreconditionError("Pattern::at: cell outside shape");
    return labels_[*i];
  }
  std::optional<Symbol> find(const G& g) const {
    auto i = shape_.index_of(g);
    if (!i) return std::nullopt;
    return labels_[*i];
  }

  Pattern restrict(const FiniteSet<G>& sub) const {
    std::vector<Symbol> l;
    l.reserve(sub.size());
    for (const G& g : sub) {
      auto i = shape_.index_of(g);
      if (!i) throw PreconditionError("Pattern::restrict: subshape not contained in shape");
      l.push_back(labels_[*i]);
    }
    return Pattern(sub, std::move(l));
  }

  // Pattern q with q(x + g) = p(x).
  Pattern translate(const G& g) const { return Pattern(symdyn::translate(shape_, g), labels_); }

  friend bool operator==(const Pattern& a, const Pattern& b) {
    return a.shape_ == b.shape_ && a.labels_ == b.labels_;
  }
  friend auto operator<=>(const Pattern& a, const Pattern& b) {
    if (auto c = a.shape_ <=> b.shape_; c != 0) return c;
    return a.labels_ <=> b.labels_;
  }

 private:
  FiniteSet<G> shape_;
  std::vector<Symbol> labels_;
};

// Union of two patterns that agree on their overlap.
template <LatticeElement G>
Pattern<G> merge(const Pattern<G>& a, const Pattern<G>& b) {
  auto shape = unite(a.shape(), b.shape());
  std::vector<Symbol> l;
  l.reserve(shape.size());
  for (const G& g : shape) {
    auto x = a.find(g);
    auto y = b.find(g);
    if (x && y && *x != *y) throw PreconditionError("merge: patterns disagree on their overlap");
    l.push_back(x ? *x : *y);
  }
  return Pattern<G>(std::move(shape), std::move(l));
}

using SymbolMask = std::uint64_t;
inline constexpr int kMaxAlphabet = 64;

inline SymbolMask symbol_bit(Symbol s) { return SymbolMask{1} << s; }

// Shape with a set of allowed symbols per cell; stands for every pattern it contains.
template <LatticeElement G>
class Cylinder {
 public:
  Cylinder() = default;
  Cylinder(FiniteSet<G> shape, std::vector<SymbolMask> masks) : shape_(std::move(shape)), masks_(std::move(masks)) {
    if (shape_.size() != masks_.size()) throw PreconditionError("Cylinder: masks must cover the shape");
  }
  explicit Cylinder(const Pattern<G>& p) : shape_(p.shape()) {
    for (Symbol s : p.labels()) masks_.push_back(symbol_bit(s));
  }

  const FiniteSet<G>& shape() const { return shape_; }
  const std::vector<SymbolMask>& masks() const { return masks_; }
  std::size_t size() const { return masks_.size(); }
  bool empty() const { return masks_.empty(); }
  bool admits(std::size_t i, Symbol s) const { return (masks_[i] >> s) & 1U; }

  bool is_exact() const {
    return std::all_of(masks_.begin(), masks_.end(), [](SymbolMask m) { return m && !(m & (m - 1)); });
  }
  Pattern<G> as_pattern() const {
    if (!is_exact()) throw PreconditionError("Cylinder: not a single pattern");
    std::vector<Symbol> l;
    for (SymbolMask m : masks_) l.push_back(std::countr_zero(m));
    return Pattern<G>(shape_, std::move(l));
  }
  bool matches(const Pattern<G>& p) const {
    if (p.shape() != shape_) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (!admits(i, p.labels()[i])) return false;
    return true;
  }

  friend bool operator==(const Cylinder& a, const Cylinder& b) {
    return a.shape_ == b.shape_ && a.masks_ == b.masks_;
  }
  friend auto operator<=>(const Cylinder& a, const Cylinder& b) {
    if (auto c = a.shape_ <=> b.shape_; c != 0) return c;
    return a.masks_ <=> b.masks_;
  }

 private:
  FiniteSet<G> shape_;
  std::vector<SymbolMask> masks_;
};

template <LatticeElement G>
std::vector<Cylinder<G>> to_cylinders(const std::vector<Pattern<G>>& ps) {
  std::vector<Cylinder<G>> out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.emplace_back(p);
  return out;
}

template <LatticeElement G>
class Sft {
 public:
  Sft() = default;
  Sft(Alphabet alphabet, std::vector<Cylinder<G>> forbidden, FiniteSet<G> window,
      std::optional<FiniteSet<G>> mix = std::nullopt, std::string name = {})
      : alphabet_(std::move(alphabet)), forbidden_(std::move(forbidden)),
        window_(window.with_role(Role::k_window)), mix_(std::move(mix)), name_(std::move(name)) {
    if (alphabet_.size() > kMaxAlphabet) throw ResourceError("Sft: alphabet larger than 64 symbols");
    if (!window_.contains_identity() || !is_symmetric(window_))
      throw PreconditionError("Sft: K_sft must be symmetric and contain e");
    const SymbolMask full = alphabet_.size() == 64 ? ~SymbolMask{0} : (symbol_bit(alphabet_.size()) - 1);
    std::vector<Cylinder<G>> kept;
    for (auto& c : forbidden_) {
      if (c.empty()) throw PreconditionError("Sft: empty forbidden pattern");
      for (SymbolMask m : c.masks())
        if (m & ~full) throw PreconditionError("Sft: forbidden label out of range");
      if (!fits_window(c.shape())) throw PreconditionError("Sft: forbidden shape does not fit a translate of K_sft");
      if (std::any_of(c.masks().begin(), c.masks().end(), [](SymbolMask m) { return m == 0; })) continue;
      kept.push_back(std::move(c));
    }
    forbidden_ = std::move(kept);
    std::sort(forbidden_.begin(), forbidden_.end());
    forbidden_.erase(std::unique(forbidden_.begin(), forbidden_.end()), forbidden_.end());
    if (mix_) {
      if (!mix_->contains_identity()) throw PreconditionError("Sft: K_mix must contain e");
      mix_ = mix_->with_role(Role::k_window);
    }
  }
  Sft(Alphabet alphabet, const std::vector<Pattern<G>>& forbidden, FiniteSet<G> window,
      std::optional<FiniteSet<G>> mix = std::nullopt, std::string name = {})
      : Sft(std::move(alphabet), to_cylinders(forbidden), std::move(window), std::move(mix), std::move(name)) {}

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Cylinder<G>>& forbidden() const { return forbidden_; }
  const FiniteSet<G>& window() const { return window_; }
  const std::optional<FiniteSet<G>>& mix() const { return mix_; }
  const std::string& name() const { return name_; }
  int radius() const { return window_.radius(); }
  int default_margin() const { return 2 * radius(); }

  // K_mix when present, else K_sft.
  const FiniteSet<G>& gap_window() const { return mix_ ? *mix_ : window_; }

  // Forbidden-list span: max over forbidden shapes of the bounding-box width.
  int span() const {
    int w = 0;
    for (const auto& c : forbidden_)
      for (int i = 0; i < G::dim; ++i) w = std::max(w, c.shape().upper()[i] - c.shape().lower()[i]);
    return w;
  }

  Sft with_forbidden(const std::vector<Pattern<G>>& extra, std::string name = {}) const {
    auto f = forbidden_;
    for (const auto& p : extra) f.emplace_back(p);
    return Sft(alphabet_, std::move(f), window_, mix_, name.empty() ? name_ : std::move(name));
  }
  Sft with_window(FiniteSet<G> window) const { return Sft(alphabet_, forbidden_, std::move(window), mix_, name_); }
  Sft with_mix(std::optional<FiniteSet<G>> mix) const {
    return Sft(alphabet_, forbidden_, window_, std::move(mix), name_);
  }
  Sft with_name(std::string name) const {
    Sft s = *this;
    s.name_ = std::move(name);
    return s;
  }

 private:
  bool fits_window(const FiniteSet<G>& shape) const {
    for (const G& k : window_) {
      G shift = shape[0] - k;
      bool ok = true;
      for (const G& x : shape)
        if (!window_.contains(x - shift)) {
          ok = false;
          break;
        }
      if (ok) return true;
    }
    return false;
  }

  Alphabet alphabet_;
  std::vector<Cylinder<G>> forbidden_;
  FiniteSet<G> window_{G::identity()};
  std::optional<FiniteSet<G>> mix_;
  std::string name_;
};

enum class BoundaryMode { free, periodic };

inline std::string_view boundary_mode_name(BoundaryMode m) {
  return m == BoundaryMode::free ? "free" : "periodic";
}

// Labeling of a finite window. Periodic mode requires a box window and wraps reads.
template <LatticeElement G>
class Configuration {
 public:
  Configuration() = default;
  Configuration(FiniteSet<G> window, std::vector<Symbol> labels, BoundaryMode mode = BoundaryMode::free)
      : window_(std::move(window)), labels_(std::move(labels)), mode_(mode), idx_(window_) {
    if (window_.size() != labels_.size()) throw PreconditionError("Configuration: labels must cover the window");
    if (mode_ == BoundaryMode::periodic && !window_.empty() && !idx_.is_box())
      throw PreconditionError("Configuration: periodic mode needs a box window");
  }
  explicit Configuration(const Pattern<G>& p, BoundaryMode mode = BoundaryMode::free)
      : Configuration(p.shape(), p.labels(), mode) {}

  const FiniteSet<G>& window() const { return window_; }
  const std::vector<Symbol>& labels() const { return labels_; }
  BoundaryMode mode() const { return mode_; }
  const DenseIndex<G>& index() const { return idx_; }

  // Slot of g in the window (wrapped in periodic mode), or -1.
  long slot(const G& g) const {
    long s = idx_.find(g);
    if (s < 0 && mode_ == BoundaryMode::periodic && !window_.empty()) s = idx_.find(idx_.wrap(g));
    return s;
  }
  bool defined(const G& g) const { return slot(g) >= 0; }
  Symbol at(const G& g) const {
    long s = slot(g);
    if (s < 0) throw PreconditionError("Configuration::at: cell outside window");
    return labels_[static_cast<std::size_t>(s)];
  }

  Pattern<G> restrict(const FiniteSet<G>& f) const {
    std::vector<Symbol> l;
    l.reserve(f.size());
    for (const G& g : f) l.push_back(at(g));
    return Pattern<G>(f, std::move(l));
  }
  Pattern<G> as_pattern() const { return Pattern<G>(window_, labels_); }

  // Copy with p written over its shape (shape must lie in the window).
  Configuration overwrite(const Pattern<G>& p) const {
    auto l = labels_;
    for (std::size_t i = 0; i < p.size(); ++i) {
      long s = idx_.find(p.shape()[i]);
      if (s < 0) throw PreconditionError("Configuration::overwrite: pattern leaves the window");
      l[static_cast<std::size_t>(s)] = p.labels()[i];
    }
    return Configuration(window_, std::move(l), mode_);
  }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.window_ == b.window_ && a.labels_ == b.labels_ && a.mode_ == b.mode_;
  }

 private:
  FiniteSet<G> window_;
  std::vector<Symbol> labels_;
  BoundaryMode mode_ = BoundaryMode::free;
  DenseIndex<G> idx_;
};

template <LatticeElement G>
bool cell_admits(const Pattern<G>& p, std::size_t i, Symbol s) {
  return p.labels()[i] == s;
}
template <LatticeElement G>
bool cell_admits(const Cylinder<G>& c, std::size_t i, Symbol s) {
  return c.admits(i, s);
}

template <LatticeElement G>
struct Violation {
  std::size_t forbidden_index = 0;
  G position{};
};

// Translates g with p.translate(g) matching cfg; positions, when given, are the translates to test.
template <LatticeElement G, class P>
std::vector<G> occurrences(const Configuration<G>& cfg, const P& p, const FiniteSet<G>* positions = nullptr) {
  std::vector<G> out;
  if (p.empty()) return out;
  const auto& cand = positions ? *positions : cfg.window();
  const G anchor = p.shape()[0];
  for (const G& w : cand) {
    G g = positions ? w : w - anchor;
    bool match = true;
    for (std::size_t i = 0; i < p.size(); ++i) {
      long s = cfg.slot(p.shape()[i] + g);
      if (s < 0 || !cell_admits(p, i, cfg.labels()[static_cast<std::size_t>(s)])) {
        match = false;
        break;
      }
    }
    if (match) out.push_back(g);
  }
  return out;
}

// First forbidden pattern occurrence fully inside the window (or wrapping, in periodic mode).
template <LatticeElement G>
std::optional<Violation<G>> find_violation(const Sft<G>& sft, const Configuration<G>& cfg) {
  for (std::size_t k = 0; k < sft.forbidden().size(); ++k) {
    auto occ = occurrences(cfg, sft.forbidden()[k]);
    if (!occ.empty()) return Violation<G>{k, occ.front()};
  }
  return std::nullopt;
}

template <LatticeElement G>
bool is_locally_admissible(const Sft<G>& sft, const Configuration<G>& cfg) {
  return !find_violation(sft, cfg);
}

template <LatticeElement G>
bool is_locally_admissible(const Sft<G>& sft, const Pattern<G>& p) {
  return !find_violation(sft, Configuration<G>(p));
}

}  // namespace symdyn
