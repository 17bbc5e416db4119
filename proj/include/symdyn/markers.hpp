#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/patterns.hpp"
#include "symdyn/report.hpp"

namespace symdyn {

template <LatticeElement G>
struct SurplusPatterns {
  FiniteSet<G> f;
  std::vector<Pattern<G>> patterns;  // lexicographically least r of the surplus
  std::size_t surplus = 0;           // |P(F, Y) \ P(F, Y1)|
};

struct SurplusOptions {
  int n_max = 12;  // largest side tried
  CountMode mode = CountMode::extendable();
  EnumerationOptions enumeration{};
};

// Patterns of Y not extendable in Y1 on F = [0, n)^d, for the least n giving at least r of them.
template <LatticeElement G>
SurplusPatterns<G> find_surplus_patterns(const Sft<G>& y, const Sft<G>& y1, int r, const SurplusOptions& opt = {}) {
  if (r < 0) throw PreconditionError("find_surplus_patterns: r must be nonnegative");
  if (y.alphabet().size() != y1.alphabet().size())
    throw PreconditionError("find_surplus_patterns: Y and Y1 must share an alphabet");
  SurplusPatterns<G> out;
  if (r == 0) {
    out.f = FiniteSet<G>{G::identity()};
    return out;
  }
  G lo = G::identity();
  for (int n = 1; n <= opt.n_max; ++n) {
    G hi;
    for (int i = 0; i < G::dim; ++i) hi[i] = n;
    auto f = box<G>(lo, hi);
    std::vector<Pattern<G>> surplus;
    for (auto& p : enumerate_patterns(y, f, opt.mode, opt.enumeration))
      if (!is_extendable(y1, p, y1.default_margin(), opt.enumeration.limits)) surplus.push_back(std::move(p));
    if (surplus.size() >= static_cast<std::size_t>(r)) {
      out.f = f;
      out.surplus = surplus.size();
      surplus.resize(static_cast<std::size_t>(r));
      out.patterns = std::move(surplus);
      return out;
    }
  }
  throw BudgetError("find_surplus_patterns: fewer than " + std::to_string(r) + " surplus patterns up to side " +
                    std::to_string(opt.n_max));
}

// Anchor pair {h, h + g} mixed into the substrate so that the carriers differ across g.
template <LatticeElement G>
struct PairAnchor {
  G g{};
  G h{};
};

template <LatticeElement G>
struct MarkerKit {
  FiniteSet<G> k;                    // SFT and mixing window of Y, Y1, Y0
  FiniteSet<G> f;                    // surplus shape
  FiniteSet<G> core;                 // KF
  FiniteSet<G> m;                    // marker shape after closure under K and inversion
  FiniteSet<G> window;               // working window carrying the substrate and the carriers
  std::vector<Pattern<G>> surplus;   // a_1 .. a_r
  std::vector<PairAnchor<G>> anchors;
  Configuration<G> substrate;        // y^(m)
  Configuration<G> mixed;            // substrate with every anchor pair mixed in
  std::vector<Pattern<G>> markers;   // m_i = y_i(M)
  std::vector<Configuration<G>> carriers;

  std::size_t size() const { return markers.size(); }

  // Decomposition M = KF plus the anchor translates K{h, h + g}, before closure.
  FiniteSet<G> raw_shape() const {
    auto out = core;
    for (const auto& a : anchors) out = unite(out, anchor_cells(a));
    return out;
  }
  FiniteSet<G> anchor_cells(const PairAnchor<G>& a) const {
    return unite(translate(k, a.h), translate(k, a.h + a.g));
  }
};

template <LatticeElement G>
struct MarkerKitOptions {
  std::optional<FiniteSet<G>> k;       // default: union of the SFT and mixing windows, symmetrized
  std::optional<FiniteSet<G>> window;  // default: centered box covering M^3 with a K-margin and 4|M| cells
  std::optional<Configuration<G>> substrate;
  // Surplus shape and patterns supplied directly; skips the search and its non-membership check.
  std::optional<SurplusPatterns<G>> surplus;
  SurplusOptions surplus_options{};
  SearchLimits limits{};
};

namespace detail {

// Elements of Z^d by increasing L-infinity norm, then lexicographically.
template <LatticeElement G>
std::vector<G> shells(int n) {
  auto v = centered_box<G>(n).elements();
  std::stable_sort(v.begin(), v.end(), [](const G& a, const G& b) { return a.norm() < b.norm(); });
  return v;
}

template <LatticeElement G>
Configuration<G> solve_fixed(const Sft<G>& sft, const FiniteSet<G>& w, const Pattern<G>& fixed,
                             const SearchLimits& lim, const std::string& what) {
  auto c = complete(sft, w, fixed, lim);
  if (!c) throw HypothesisError(what);
  return *c;
}

}  // namespace detail

template <LatticeElement G>
MarkerKit<G> build_marker_kit(const Sft<G>& y, const Sft<G>& y1, const Sft<G>& y0, int r,
                              const MarkerKitOptions<G>& opt = {}) {
  if (y.alphabet().size() != y0.alphabet().size() || y.alphabet().size() != y1.alphabet().size())
    throw PreconditionError("build_marker_kit: Y, Y1 and Y0 must share an alphabet");
  MarkerKit<G> kit;
  if (opt.k) {
    kit.k = *opt.k;
  } else {
    auto k = unite(unite(y.window(), y.gap_window()), unite(y0.window(), y0.gap_window()));
    kit.k = symmetrize(unite(k, y1.window()));
  }
  if (!kit.k.contains_identity()) throw PreconditionError("build_marker_kit: K must contain e");
  kit.k = kit.k.with_role(Role::k_window);

  auto sp = opt.surplus ? *opt.surplus : find_surplus_patterns(y, y1, r, opt.surplus_options);
  if (sp.patterns.size() != static_cast<std::size_t>(r))
    throw PreconditionError("build_marker_kit: need exactly r surplus patterns");
  kit.f = sp.f;
  kit.surplus = sp.patterns;
  kit.core = product(kit.k, kit.f);

  if (r > 0) {
    auto d = product(product(inverse(kit.f), kit.k), kit.f);
    auto raw = kit.core;
    for (const G& g : d) {
      if (g.is_identity()) continue;
      for (int n = 1;; n *= 2) {
        std::optional<G> pick;
        for (const G& h : detail::shells<G>(n + raw.radius() + kit.k.radius())) {
          auto cells = unite(translate(kit.k, h), translate(kit.k, h + g));
          if (disjoint(cells, raw)) {
            pick = h;
            break;
          }
        }
        if (pick) {
          kit.anchors.push_back({g, *pick});
          raw = unite(raw, kit.anchor_cells(kit.anchors.back()));
          break;
        }
      }
    }
  }
  auto raw = kit.raw_shape();
  kit.m = unite(unite(raw, kit.k), inverse(raw)).with_role(Role::m_marker_shape);

  if (opt.window) {
    kit.window = *opt.window;
  } else {
    int n = power(kit.m, 3).radius() + 2 * kit.k.radius() + 1;
    auto cells = [](int n) {
      std::size_t c = 1;
      for (int i = 0; i < G::dim; ++i) c *= static_cast<std::size_t>(2 * n + 1);
      return c;
    };
    while (cells(n) < 4 * kit.m.size()) ++n;
    kit.window = centered_box<G>(n);
  }
  if (!is_subset(power(kit.m, 3), kit.window))
    throw PreconditionError("build_marker_kit: working window must contain M^3");

  if (opt.substrate) {
    if (opt.substrate->window() != kit.window)
      throw PreconditionError("build_marker_kit: substrate must live on the working window");
    if (!is_locally_admissible(y0, *opt.substrate))
      throw PreconditionError("build_marker_kit: substrate is not admissible in Y0");
    kit.substrate = *opt.substrate;
  } else {
    kit.substrate = detail::solve_fixed(y0, kit.window, Pattern<G>(), opt.limits,
                                        "build_marker_kit: Y0 has no configuration on the working window");
  }

  // Mix each anchor pair into the substrate through Y0.
  auto cur = kit.substrate;
  for (const auto& a : kit.anchors) {
    const G p = a.h, q = a.h + a.g;
    if (cur.at(p) != cur.at(q)) continue;
    auto sep = simply_separates(y0, a.g, product(power(kit.k, 2), FiniteSet<G>{G::identity(), a.g}), opt.limits);
    if (!sep.separates)
      throw HypothesisError("build_marker_kit: Y0 does not separate e from " + concat(a.g) + " (" + sep.scope + ")");
    FiniteSet<G> ends{p, q};
    std::vector<Symbol> l(2);
    l[ends.index_of(p).value()] = sep.witness->at(G::identity());
    l[ends.index_of(q).value()] = sep.witness->at(a.g);
    Pattern<G> pair(ends, std::move(l));
    auto outside = cur.restrict(minus(kit.window, kit.anchor_cells(a)));
    cur = detail::solve_fixed(y0, kit.window, merge(pair, outside), opt.limits,
                              "build_marker_kit: Y0 could not mix the pair at " + concat(p) + ", " + concat(q));
  }
  kit.mixed = cur;

  // Stamp each surplus pattern onto F through Y.
  auto outside = kit.mixed.restrict(minus(kit.window, kit.core));
  for (std::size_t i = 0; i < kit.surplus.size(); ++i) {
    auto yi = detail::solve_fixed(y, kit.window, merge(kit.surplus[i], outside), opt.limits,
                                  "build_marker_kit: Y could not stamp surplus pattern " + std::to_string(i + 1));
    kit.markers.push_back(yi.restrict(kit.m));
    kit.carriers.push_back(std::move(yi));
  }
  return kit;
}

template <LatticeElement G>
struct MarkerKitReport {
  ConditionReport conditions;
  std::vector<std::string> counterexamples;
  std::size_t translates_scanned = 0;
  bool pass() const { return conditions.pass(); }
};

// Exhaustive scan of the carriers over every translate g with Mg inside the scan window.
template <LatticeElement G>
MarkerKitReport<G> verify_marker_kit(const MarkerKit<G>& kit, const FiniteSet<G>& scan_window,
                                     const Sft<G>* y = nullptr, const Sft<G>* y1 = nullptr) {
  if (!is_subset(scan_window, kit.window))
    throw PreconditionError("verify_marker_kit: scan window must lie in the working window");
  MarkerKitReport<G> rep;
  auto note = [&](std::string s) {
    if (rep.counterexamples.size() < 32) rep.counterexamples.push_back(std::move(s));
  };

  std::vector<G> pos;
  DenseIndex<G> sidx(scan_window);
  for (const G& g : scan_window) {
    bool fits = true;
    for (const G& x : kit.m)
      if (!sidx.contains(x + g)) {
        fits = false;
        break;
      }
    if (fits) pos.push_back(g);
  }
  FiniteSet<G> positions(pos);
  rep.translates_scanned = positions.size() * kit.carriers.size();

  bool decomposition = true;
  {
    std::size_t total = kit.core.size();
    FiniteSet<G> all = kit.core;
    for (const auto& a : kit.anchors) {
      auto c = kit.anchor_cells(a);
      total += c.size();
      all = unite(all, c);
    }
    if (all.size() != total) {
      decomposition = false;
      note("decomposition: KF and the anchor translates overlap");
    }
  }
  rep.conditions.add("decomposition", decomposition, concat("|KF| = ", kit.core.size(), ", anchors = ", kit.anchors.size()));

  bool anti = true;
  for (std::size_t i = 0; i < kit.carriers.size(); ++i)
    for (const auto& a : kit.anchors)
      if (kit.carriers[i].at(a.h) == kit.carriers[i].at(a.h + a.g)) {
        anti = false;
        note(concat("anti-period: carrier ", i + 1, " agrees at ", a.h, " and ", a.h + a.g));
      }
  rep.conditions.add("anti_period", anti, concat(kit.anchors.size(), " anchor pairs"));

  bool unique = true, exclusive = true;
  const bool e_scanned = positions.contains(G::identity());
  for (std::size_t i = 0; i < kit.markers.size(); ++i)
    for (std::size_t j = 0; j < kit.carriers.size(); ++j) {
      auto occ = occurrences(kit.carriers[j], kit.markers[i], &positions);
      if (i == j) {
        std::vector<G> want;
        if (e_scanned) want.push_back(G::identity());
        if (occ != want) {
          unique = false;
          for (const G& g : occ)
            if (!g.is_identity()) note(concat("(1): m_", i + 1, " occurs in y_", i + 1, " at ", g));
          if (e_scanned && std::find(occ.begin(), occ.end(), G::identity()) == occ.end())
            note(concat("(1): m_", i + 1, " missing from y_", i + 1, " at e"));
        }
      } else if (!occ.empty()) {
        exclusive = false;
        note(concat("(2): m_", i + 1, " occurs in y_", j + 1, " at ", occ.front()));
      }
    }
  rep.conditions.add("unique_in_carrier", unique, concat(positions.size(), " translates per carrier"));
  rep.conditions.add("absent_from_others", exclusive, concat(kit.markers.size(), " markers"));

  bool off_m = true;
  auto outside = minus(kit.window, kit.m);
  for (std::size_t i = 0; i < kit.carriers.size(); ++i)
    for (const G& g : outside)
      if (kit.carriers[i].at(g) != kit.substrate.at(g)) {
        off_m = false;
        note(concat("(3): carrier ", i + 1, " differs from the substrate at ", g));
        break;
      }
  rep.conditions.add("substrate_off_m", off_m, concat(outside.size(), " cells off M"));

  if (y) {
    bool ok = true;
    for (std::size_t i = 0; i < kit.carriers.size(); ++i)
      if (auto v = find_violation(*y, kit.carriers[i])) {
        ok = false;
        note(concat("carrier ", i + 1, " violates Y at ", v->position));
      }
    rep.conditions.add("carriers_admissible", ok, y->name());
  }
  if (y1) {
    bool ok = true;
    for (std::size_t i = 0; i < kit.markers.size(); ++i)
      if (is_extendable(*y1, kit.markers[i].restrict(kit.f), y1->default_margin())) {
        ok = false;
        note(concat("a_", i + 1, " extends in ", y1->name()));
      }
    rep.conditions.add("markers_outside_y1", ok, y1->name());
  }
  return rep;
}

}  // namespace symdyn
