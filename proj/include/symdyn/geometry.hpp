#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <concepts>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "symdyn/errors.hpp"
#include "symdyn/report.hpp"

namespace symdyn {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

inline std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q.numerator();
  if (q.denominator() != 1) os << '/' << q.denominator();
  return os.str();
}

// Element of Z^D. Componentwise addition, lexicographic order.
template <int D>
struct Vec {
  static_assert(D >= 1);
  static constexpr int dim = D;
  std::array<int, D> c{};

  constexpr Vec() = default;
  template <std::integral... I>
    requires(sizeof...(I) == D)
  constexpr Vec(I... v) : c{static_cast<int>(v)...} {}

  constexpr int operator[](int i) const { return c[i]; }
  constexpr int& operator[](int i) { return c[i]; }

  friend constexpr Vec operator+(Vec a, const Vec& b) {
    for (int i = 0; i < D; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend constexpr Vec operator-(Vec a, const Vec& b) {
    for (int i = 0; i < D; ++i) a.c[i] -= b.c[i];
    return a;
  }
  constexpr Vec operator-() const {
    Vec r;
    for (int i = 0; i < D; ++i) r.c[i] = -c[i];
    return r;
  }
  friend constexpr bool operator==(const Vec&, const Vec&) = default;
  friend constexpr auto operator<=>(const Vec&, const Vec&) = default;

  static constexpr Vec identity() { return Vec{}; }
  constexpr bool is_identity() const { return *this == Vec{}; }

  // L-infinity norm.
  constexpr int norm() const {
    int m = 0;
    for (int v : c) m = std::max(m, v < 0 ? -v : v);
    return m;
  }
};

using Z1 = Vec<1>;
using Z2 = Vec<2>;

template <int D>
std::ostream& operator<<(std::ostream& os, const Vec<D>& g) {
  for (int i = 0; i < D; ++i) os << (i ? " " : "") << g[i];
  return os;
}

template <class G>
concept LatticeElement = requires(G a, G b, int i) {
  { a + b } -> std::same_as<G>;
  { a - b } -> std::same_as<G>;
  { -a } -> std::same_as<G>;
  { a < b } -> std::convertible_to<bool>;
  { a[i] } -> std::convertible_to<int>;
  { G::dim } -> std::convertible_to<int>;
  { a.norm() } -> std::convertible_to<int>;
};

template <LatticeElement G>
int linf_distance(const G& a, const G& b) {
  return (a - b).norm();
}

enum class Role { generic, k_window, l_separator, m_marker_shape, s_tile_shape, f_test_window };

inline std::string_view role_name(Role r) {
  switch (r) {
    case Role::k_window: return "K-window";
    case Role::l_separator: return "L-separator";
    case Role::m_marker_shape: return "M-marker-shape";
    case Role::s_tile_shape: return "S-tile-shape";
    case Role::f_test_window: return "F-test-window";
    case Role::generic: break;
  }
  return "generic";
}

inline Role role_from_name(std::string_view s) {
  for (Role r : {Role::generic, Role::k_window, Role::l_separator, Role::m_marker_shape,
                 Role::s_tile_shape, Role::f_test_window})
    if (role_name(r) == s) return r;
  throw PreconditionError("unknown role tag: " + std::string(s));
}

// Finite subset of G kept sorted and duplicate-free.
template <LatticeElement G>
class FiniteSet {
 public:
  using value_type = G;
  using const_iterator = typename std::vector<G>::const_iterator;

  FiniteSet() = default;
  FiniteSet(std::initializer_list<G> xs, Role role = Role::generic) : elems_(xs), role_(role) {
    normalize();
  }
  explicit FiniteSet(std::vector<G> xs, Role role = Role::generic)
      : elems_(std::move(xs)), role_(role) {
    normalize();
  }

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const_iterator begin() const { return elems_.begin(); }
  const_iterator end() const { return elems_.end(); }
  const G& operator[](std::size_t i) const { return elems_[i]; }
  const std::vector<G>& elements() const { return elems_; }
  Role role() const { return role_; }
  FiniteSet with_role(Role r) const {
    FiniteSet s = *this;
    s.role_ = r;
    return s;
  }

  bool contains(const G& g) const { return std::binary_search(elems_.begin(), elems_.end(), g); }
  std::optional<std::size_t> index_of(const G& g) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), g);
    if (it == elems_.end() || *it != g) return std::nullopt;
    return static_cast<std::size_t>(it - elems_.begin());
  }
  bool contains_identity() const { return contains(G::identity()); }

  // Componentwise bounding box [lo, hi] (inclusive); requires nonempty.
  G lower() const {
    G lo = elems_.front();
    for (const G& g : elems_)
      for (int i = 0; i < G::dim; ++i) lo[i] = std::min(lo[i], g[i]);
    return lo;
  }
  G upper() const {
    G hi = elems_.front();
    for (const G& g : elems_)
      for (int i = 0; i < G::dim; ++i) hi[i] = std::max(hi[i], g[i]);
    return hi;
  }
  // Max L-infinity norm of an element; 0 for the empty set.
  int radius() const {
    int r = 0;
    for (const G& g : elems_) r = std::max(r, g.norm());
    return r;
  }

  friend bool operator==(const FiniteSet& a, const FiniteSet& b) { return a.elems_ == b.elems_; }
  friend auto operator<=>(const FiniteSet& a, const FiniteSet& b) { return a.elems_ <=> b.elems_; }

 private:
  void normalize() {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }

  std::vector<G> elems_;
  Role role_ = Role::generic;
};

template <LatticeElement G>
std::ostream& operator<<(std::ostream& os, const FiniteSet<G>& s) {
  os << '{';
  bool first = true;
  for (const G& g : s) {
    os << (first ? "" : ", ") << '(' << g << ')';
    first = false;
  }
  return os << '}';
}

// ---- set algebra ----

template <LatticeElement G>
FiniteSet<G> unite(const FiniteSet<G>& a, const FiniteSet<G>& b) {
  std::vector<G> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteSet<G>(std::move(out));
}

template <LatticeElement G>
FiniteSet<G> intersect(const FiniteSet<G>& a, const FiniteSet<G>& b) {
  std::vector<G> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteSet<G>(std::move(out));
}

template <LatticeElement G>
FiniteSet<G> minus(const FiniteSet<G>& a, const FiniteSet<G>& b) {
  std::vector<G> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteSet<G>(std::move(out));
}

template <LatticeElement G>
FiniteSet<G> sym_diff(const FiniteSet<G>& a, const FiniteSet<G>& b) {
  std::vector<G> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteSet<G>(std::move(out));
}

template <LatticeElement G>
bool is_subset(const FiniteSet<G>& a, const FiniteSet<G>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

template <LatticeElement G>
bool disjoint(const FiniteSet<G>& a, const FiniteSet<G>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else return false;
  }
  return true;
}

// Fg = {f + g}.
template <LatticeElement G>
FiniteSet<G> translate(const FiniteSet<G>& f, const G& g) {
  std::vector<G> out;
  out.reserve(f.size());
  for (const G& x : f) out.push_back(x + g);
  return FiniteSet<G>(std::move(out), f.role());
}

// AB = {a + b}.
template <LatticeElement G>
FiniteSet<G> product(const FiniteSet<G>& a, const FiniteSet<G>& b) {
  std::vector<G> out;
  out.reserve(a.size() * b.size());
  for (const G& x : a)
    for (const G& y : b) out.push_back(x + y);
  return FiniteSet<G>(std::move(out));
}

template <LatticeElement G>
FiniteSet<G> inverse(const FiniteSet<G>& f) {
  std::vector<G> out;
  out.reserve(f.size());
  for (const G& x : f) out.push_back(-x);
  return FiniteSet<G>(std::move(out), f.role());
}

// F^n; F^0 = {e}.
template <LatticeElement G>
FiniteSet<G> power(const FiniteSet<G>& f, int n) {
  if (n < 0) throw PreconditionError("power: negative exponent");
  FiniteSet<G> out{G::identity()};
  for (int i = 0; i < n; ++i) out = product(out, f);
  return out.with_role(f.role());
}

// KK^{-1}.
template <LatticeElement G>
FiniteSet<G> difference_set(const FiniteSet<G>& k) {
  return product(k, inverse(k));
}

template <LatticeElement G>
bool is_symmetric(const FiniteSet<G>& f) {
  return inverse(f) == f;
}

template <LatticeElement G>
FiniteSet<G> symmetrize(const FiniteSet<G>& f) {
  return unite(f, inverse(f)).with_role(f.role());
}

// ---- boxes ----

// Half-open box [lo, hi) in every coordinate.
template <LatticeElement G>
FiniteSet<G> box(const G& lo, const G& hi, Role role = Role::generic) {
  std::vector<G> out;
  for (int i = 0; i < G::dim; ++i)
    if (hi[i] <= lo[i]) return FiniteSet<G>({}, role);
  G cur = lo;
  while (true) {
    out.push_back(cur);
    int i = G::dim - 1;
    while (i >= 0) {
      if (++cur[i] < hi[i]) break;
      cur[i] = lo[i];
      --i;
    }
    if (i < 0) break;
  }
  return FiniteSet<G>(std::move(out), role);
}

inline FiniteSet<Z1> interval(int a, int b, Role role = Role::generic) {
  return box<Z1>(Z1{a}, Z1{b}, role);
}

// Cube [-n, n]^d.
template <LatticeElement G>
FiniteSet<G> centered_box(int n, Role role = Role::generic) {
  G lo, hi;
  for (int i = 0; i < G::dim; ++i) {
    lo[i] = -n;
    hi[i] = n + 1;
  }
  return box<G>(lo, hi, role);
}

// F_n = centered cube of side 2n+1.
template <LatticeElement G>
FiniteSet<G> folner_box(int n) {
  if (n < 1) throw PreconditionError("folner_box: index must be positive");
  return centered_box<G>(n, Role::f_test_window);
}

// Unit neighbourhood {0, +-e_i}.
template <LatticeElement G>
FiniteSet<G> plus_shape() {
  std::vector<G> out{G::identity()};
  for (int i = 0; i < G::dim; ++i) {
    G a;
    a[i] = 1;
    out.push_back(a);
    out.push_back(-a);
  }
  return FiniteSet<G>(std::move(out), Role::k_window);
}

// Dense lookup over the bounding box of a finite set.
template <LatticeElement G>
class DenseIndex {
 public:
  DenseIndex() = default;
  explicit DenseIndex(const FiniteSet<G>& s) {
    if (s.empty()) return;
    lo_ = s.lower();
    G hi = s.upper();
    std::size_t vol = 1;
    for (int i = G::dim - 1; i >= 0; --i) {
      ext_[i] = hi[i] - lo_[i] + 1;
      stride_[i] = vol;
      vol *= static_cast<std::size_t>(ext_[i]);
    }
    slot_.assign(vol, -1);
    for (std::size_t k = 0; k < s.size(); ++k) slot_[offset(s[k])] = static_cast<long>(k);
    is_box_ = vol == s.size();
  }

  // Index of g in the set, or -1.
  long find(const G& g) const {
    if (slot_.empty()) return -1;
    for (int i = 0; i < G::dim; ++i) {
      int d = g[i] - lo_[i];
      if (d < 0 || d >= ext_[i]) return -1;
    }
    return slot_[offset(g)];
  }
  bool contains(const G& g) const { return find(g) >= 0; }
  bool is_box() const { return is_box_; }

  // Reduce g into the bounding box modulo its extents.
  G wrap(const G& g) const {
    G r = g;
    for (int i = 0; i < G::dim; ++i) {
      int d = (g[i] - lo_[i]) % ext_[i];
      if (d < 0) d += ext_[i];
      r[i] = lo_[i] + d;
    }
    return r;
  }
  G lower() const { return lo_; }
  G extent() const {
    G e;
    for (int i = 0; i < G::dim; ++i) e[i] = ext_[i];
    return e;
  }

 private:
  std::size_t offset(const G& g) const {
    std::size_t o = 0;
    for (int i = 0; i < G::dim; ++i) o += static_cast<std::size_t>(g[i] - lo_[i]) * stride_[i];
    return o;
  }

  G lo_{};
  std::array<int, G::dim> ext_{};
  std::array<std::size_t, G::dim> stride_{};
  std::vector<long> slot_;
  bool is_box_ = false;
};

// ---- boundaries, interiors, invariance ----

template <LatticeElement G>
struct BoundaryInterior {
  FiniteSet<G> boundary;
  FiniteSet<G> interior;
};

// boundary = {f : K+f not in F}, interior = {f : K+f in F}.
template <LatticeElement G>
BoundaryInterior<G> boundary_interior(const FiniteSet<G>& f, const FiniteSet<G>& k) {
  DenseIndex<G> idx(f);
  std::vector<G> bd, in;
  for (const G& x : f) {
    bool inside = true;
    for (const G& y : k)
      if (!idx.contains(y + x)) {
        inside = false;
        break;
      }
    (inside ? in : bd).push_back(x);
  }
  return {FiniteSet<G>(std::move(bd)), FiniteSet<G>(std::move(in))};
}

template <LatticeElement G>
FiniteSet<G> interior(const FiniteSet<G>& f, const FiniteSet<G>& k) {
  return boundary_interior(f, k).interior;
}

template <LatticeElement G>
FiniteSet<G> boundary(const FiniteSet<G>& f, const FiniteSet<G>& k) {
  return boundary_interior(f, k).boundary;
}

// |KF symmetric-difference F| / |F|.
template <LatticeElement G>
Rational invariance_defect(const FiniteSet<G>& f, const FiniteSet<G>& k) {
  if (f.empty()) throw PreconditionError("invariance_defect: F must be nonempty");
  auto kf = product(k, f);
  return Rational(static_cast<std::int64_t>(sym_diff(kf, f).size()),
                  static_cast<std::int64_t>(f.size()));
}

template <LatticeElement G>
bool is_invariant(const FiniteSet<G>& f, const FiniteSet<G>& k, const Rational& eps) {
  return invariance_defect(f, k) < eps;
}

struct BoundReport {
  Rational lhs;
  Rational rhs;
  bool holds = false;
};

inline std::ostream& operator<<(std::ostream& os, const BoundReport& r) {
  return os << to_string(r.lhs) << (r.holds ? " <= " : " > ") << to_string(r.rhs);
}

// |KF1 \ F1| <= |KF0 \ F0| + |K||F0 sym F1|.
template <LatticeElement G>
BoundReport check_invariance_transfer(const FiniteSet<G>& k, const FiniteSet<G>& f0,
                                      const FiniteSet<G>& f1) {
  if (!k.contains_identity()) throw PreconditionError("check_invariance_transfer: e not in K");
  auto lhs = static_cast<std::int64_t>(minus(product(k, f1), f1).size());
  auto rhs = static_cast<std::int64_t>(minus(product(k, f0), f0).size() +
                                       k.size() * sym_diff(f0, f1).size());
  return {Rational(lhs), Rational(rhs), lhs <= rhs};
}

// |bd_K F| <= |K||KF sym F|.
template <LatticeElement G>
BoundReport check_boundary_bound(const FiniteSet<G>& f, const FiniteSet<G>& k) {
  auto lhs = static_cast<std::int64_t>(boundary(f, k).size());
  auto rhs = static_cast<std::int64_t>(k.size() * sym_diff(product(k, f), f).size());
  return {Rational(lhs), Rational(rhs), lhs <= rhs};
}

// If K+g meets int_{KK^-1} F then K+g lies in F. Returns a violating g found among
// all g with K+g meeting that interior, or nullopt.
template <LatticeElement G>
std::optional<G> interior_containment_violation(const FiniteSet<G>& f, const FiniteSet<G>& k) {
  auto in = interior(f, difference_set(k));
  DenseIndex<G> fidx(f);
  auto candidates = product(in, inverse(k));
  for (const G& g : candidates)
    for (const G& y : k)
      if (!fidx.contains(y + g)) return g;
  return std::nullopt;
}

// Translates L+c, c in C, pairwise disjoint.
template <LatticeElement G>
bool is_separated(const FiniteSet<G>& c, const FiniteSet<G>& l) {
  if (c.size() < 2 || l.empty()) return true;
  auto diffs = difference_set(l);
  DenseIndex<G> cidx(c);
  for (const G& x : c)
    for (const G& d : diffs)
      if (!d.is_identity() && cidx.contains(x + d)) return false;
  return true;
}

template <LatticeElement G>
Rational density_on_window(const FiniteSet<G>& c, const FiniteSet<G>& f) {
  if (f.empty()) throw PreconditionError("density_on_window: F must be nonempty");
  return Rational(static_cast<std::int64_t>(intersect(c, f).size()),
                  static_cast<std::int64_t>(f.size()));
}

// Subset of G known on a finite extent, optionally extended by periodicity of the extent box.
template <LatticeElement G>
class StoredSet {
 public:
  StoredSet(FiniteSet<G> extent, FiniteSet<G> members, bool periodic = false)
      : extent_(std::move(extent)), members_(std::move(members)), periodic_(periodic),
        eidx_(extent_), midx_(members_) {
    if (!is_subset(members_, extent_))
      throw PreconditionError("StoredSet: members must lie in the extent");
    if (periodic_ && !eidx_.is_box())
      throw PreconditionError("StoredSet: periodic extension requires a box extent");
  }

  const FiniteSet<G>& extent() const { return extent_; }
  const FiniteSet<G>& members() const { return members_; }
  bool periodic() const { return periodic_; }

  bool contains(const G& g) const {
    if (eidx_.contains(g)) return midx_.contains(g);
    if (periodic_) return midx_.contains(eidx_.wrap(g));
    std::ostringstream os;
    os << "StoredSet: element (" << g << ") outside stored extent";
    throw ExtentError(os.str());
  }
  bool readable(const G& g) const { return periodic_ || eidx_.contains(g); }

 private:
  FiniteSet<G> extent_;
  FiniteSet<G> members_;
  bool periodic_;
  DenseIndex<G> eidx_;
  DenseIndex<G> midx_;
};

struct DensitySample {
  int n = 0;
  Rational ratio;
  std::vector<int> argmax_shift;
};

// For n = 1..n_max: max over readable shifts g of |(F_n + g) cap C| / |F_n|.
template <LatticeElement G>
std::vector<DensitySample> upper_density_profile(const StoredSet<G>& c, int n_max) {
  std::vector<DensitySample> out;
  const auto& ext = c.extent();
  if (ext.empty()) throw ExtentError("upper_density_profile: empty extent");
  for (int n = 1; n <= n_max; ++n) {
    auto fn = folner_box<G>(n);
    std::vector<G> shifts;
    if (c.periodic()) {
      shifts = ext.elements();
    } else {
      DenseIndex<G> eidx(ext);
      for (const G& x : ext) {
        G g = x - fn[0];
        bool ok = true;
        for (const G& y : fn)
          if (!eidx.contains(y + g)) {
            ok = false;
            break;
          }
        if (ok) shifts.push_back(g);
      }
    }
    if (shifts.empty()) {
      std::ostringstream os;
      os << "upper_density_profile: extent too small for F_" << n;
      throw ExtentError(os.str());
    }
    std::int64_t best = -1;
    G arg{};
    for (const G& g : shifts) {
      std::int64_t hit = 0;
      for (const G& y : fn) hit += c.contains(y + g) ? 1 : 0;
      if (hit > best) {
        best = hit;
        arg = g;
      }
    }
    DensitySample s;
    s.n = n;
    s.ratio = Rational(best, static_cast<std::int64_t>(fn.size()));
    for (int i = 0; i < G::dim; ++i) s.argmax_shift.push_back(arg[i]);
    out.push_back(std::move(s));
  }
  return out;
}

// |F cap MC|/|F| <= |M|/|L| + |M||bd_L F|/|F| + |M||M^-1 F \ F|/|F|.
template <LatticeElement G>
BoundReport check_density_bound(const FiniteSet<G>& f, const FiniteSet<G>& m, const FiniteSet<G>& l,
                                const FiniteSet<G>& c) {
  if (f.empty()) throw PreconditionError("check_density_bound: F must be nonempty");
  if (!m.contains_identity()) throw PreconditionError("check_density_bound: e not in M");
  if (!is_subset(m, l)) throw PreconditionError("check_density_bound: M not contained in L");
  if (!is_separated(c, l)) throw PreconditionError("check_density_bound: C is not L-separated");
  auto nf = static_cast<std::int64_t>(f.size());
  auto nm = static_cast<std::int64_t>(m.size());
  Rational lhs(static_cast<std::int64_t>(intersect(f, product(m, c)).size()), nf);
  Rational rhs(nm, static_cast<std::int64_t>(l.size()));
  rhs += Rational(nm * static_cast<std::int64_t>(boundary(f, l).size()), nf);
  rhs += Rational(nm * static_cast<std::int64_t>(minus(product(inverse(m), f), f).size()), nf);
  return {lhs, rhs, lhs <= rhs};
}

// Uniform integer in [0, n) from a 64-bit engine; fixed arithmetic so sequences are portable.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  return n == 0 ? 0 : rng() % n;
}

inline double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <class T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

struct LemmaTally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::vector<std::string> examples;  // first few violations
};

struct LemmaSuiteReport {
  std::size_t instances = 0;
  LemmaTally transfer;     // |KF1 \ F1| <= |KF0 \ F0| + |K||F0 sym F1|
  LemmaTally containment;  // Kg meets int_{KK^-1} F implies Kg in F
  LemmaTally boundary;     // |bd_K F| <= |K||KF sym F|
  LemmaTally density;      // separated-set density bound
  bool pass() const {
    return transfer.violations + containment.violations + boundary.violations + density.violations == 0;
  }
};

namespace detail {

template <LatticeElement G>
FiniteSet<G> random_subset(std::mt19937_64& rng, int radius, double p, bool with_identity) {
  std::vector<G> v;
  for (const G& g : centered_box<G>(radius))
    if (uniform_unit(rng) < p || (with_identity && g.is_identity())) v.push_back(g);
  return FiniteSet<G>(std::move(v));
}

inline void tally(LemmaTally& t, bool ok, const std::string& what) {
  ++t.checked;
  if (ok) return;
  ++t.violations;
  if (t.examples.size() < 8) t.examples.push_back(what);
}

}  // namespace detail

// Seeded random (F, K, M, L, C) instances; every inequality is evaluated exactly.
template <LatticeElement G>
LemmaSuiteReport run_lemma_suite(std::size_t instances, std::uint64_t seed) {
  LemmaSuiteReport rep;
  rep.instances = instances;
  std::mt19937_64 rng(seed);
  auto dens = [](std::mt19937_64& r) { return 0.2 + 0.7 * uniform_unit(r); };
  const int fr = G::dim == 1 ? 12 : 5;
  for (std::size_t n = 0; n < instances; ++n) {
    auto f0 = detail::random_subset<G>(rng, fr, dens(rng), false);
    auto f1 = sym_diff(f0, detail::random_subset<G>(rng, fr + 1, 0.1, false));
    auto k = detail::random_subset<G>(rng, 2, dens(rng), true);
    auto tag = concat("instance ", n);

    auto tr = check_invariance_transfer(k, f0, f1);
    detail::tally(rep.transfer, tr.holds, concat(tag, ": ", tr));

    auto in = interior(f0, difference_set(k));
    auto bad = interior_containment_violation(f0, k);
    detail::tally(rep.containment, !bad, bad ? concat(tag, ": g = ", *bad) : tag);
    // Independent recheck over every g with Kg inside the padded box.
    bool direct = true;
    for (const G& g : centered_box<G>(fr + 3)) {
      auto kg = translate(k, g);
      if (!disjoint(kg, in) && !is_subset(kg, f0)) direct = false;
    }
    detail::tally(rep.containment, direct, concat(tag, ": direct scan"));

    if (!f0.empty()) {
      auto bb = check_boundary_bound(f0, k);
      detail::tally(rep.boundary, bb.holds, concat(tag, ": ", bb));
    }

    auto l = unite(detail::random_subset<G>(rng, 2, 0.5, true), FiniteSet<G>{G::identity()});
    std::vector<G> mv{G::identity()};
    for (const G& g : l)
      if (uniform_unit(rng) < 0.5) mv.push_back(g);
    FiniteSet<G> m(mv);
    auto diffs = difference_set(l);
    std::vector<G> cv;
    auto pool = centered_box<G>(fr + 2).elements();
    seeded_shuffle(pool, rng);
    for (const G& c : pool) {
      bool ok = true;
      for (const G& x : cv)
        if (diffs.contains(c - x)) {
          ok = false;
          break;
        }
      if (ok && uniform_unit(rng) < 0.7) cv.push_back(c);
    }
    FiniteSet<G> c(cv);
    if (!f0.empty()) {
      auto db = check_density_bound(f0, m, l, c);
      detail::tally(rep.density, db.holds, concat(tag, ": ", db));
    }
  }
  return rep;
}

}  // namespace symdyn
