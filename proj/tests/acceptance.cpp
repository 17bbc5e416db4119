// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "symdyn/symdyn.hpp"

using namespace symdyn;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (notes.size() < 8) notes.push_back(what);
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, const Verdict& v, const std::string& numbers) {
  std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " [" << numbers << "]\n";
  for (const auto& n : v.notes) std::cout << "    " << n << "\n";
  if (!v.pass) ++failures;
}

// ---- independent oracles ----

std::uint64_t fibonacci(int n) {
  std::uint64_t a = 0, b = 1;
  for (int i = 0; i < n; ++i) {
    auto c = a + b;
    a = b;
    b = c;
  }
  return a;
}

std::uint64_t brute_hard_square(int n) {
  std::uint64_t count = 0;
  const int cells = n * n;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << cells); ++m) {
    bool ok = true;
    for (int r = 0; r < n && ok; ++r)
      for (int c = 0; c < n && ok; ++c) {
        if (!((m >> (r * n + c)) & 1)) continue;
        if (c + 1 < n && ((m >> (r * n + c + 1)) & 1)) ok = false;
        if (r + 1 < n && ((m >> ((r + 1) * n + c)) & 1)) ok = false;
      }
    count += ok;
  }
  return count;
}

std::vector<std::vector<Symbol>> golden_words(int n) {
  std::vector<std::vector<Symbol>> out;
  for (int b = 0; b < (1 << n); ++b) {
    std::vector<Symbol> w(static_cast<std::size_t>(n));
    bool ok = true;
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = (b >> (n - 1 - i)) & 1;
    for (int i = 0; i + 1 < n; ++i) ok &= !(w[static_cast<std::size_t>(i)] && w[static_cast<std::size_t>(i + 1)]);
    if (ok) out.push_back(w);
  }
  return out;
}

template <LatticeElement G>
std::set<G> cells_of(const std::vector<Tile<G>>& tiles) {
  std::set<G> out;
  for (const auto& t : tiles)
    for (const G& x : t.shape) out.insert(x + t.center);
  return out;
}

template <LatticeElement G>
bool separated_brute(const std::vector<G>& centers, const FiniteSet<G>& l) {
  std::set<G> diffs;
  for (const G& a : l)
    for (const G& b : l) diffs.insert(a - b);
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = 0; j < centers.size(); ++j)
      if (i != j && diffs.count(centers[i] - centers[j])) return false;
  return true;
}

// Loss of each tile to strictly earlier rounds, from scratch.
template <LatticeElement G>
bool eps_disjoint_brute(const QuasiTiling<G>& t, const Rational& eps) {
  for (const auto& tile : t.tiles()) {
    std::set<G> earlier;
    for (const auto& o : t.tiles())
      if (o.round < tile.round)
        for (const G& x : o.shape) earlier.insert(x + o.center);
    std::int64_t lost = 0;
    for (const G& x : tile.shape) lost += earlier.count(x + tile.center);
    if (!(Rational(lost) < eps * static_cast<std::int64_t>(tile.shape.size()))) return false;
  }
  return true;
}

// Could any (shape, center) still be accepted by the tiler's rule?
template <LatticeElement G>
bool maximal_brute(const QuasiTiling<G>& t, const FiniteSet<G>& l, const Rational& eps) {
  std::set<G> diffs;
  for (const G& a : l)
    for (const G& b : l) diffs.insert(a - b);
  const auto& w = t.window();
  for (std::size_t idx = 0; idx < t.shapes().size(); ++idx) {
    const auto& s = t.shapes()[idx];
    const int round = t.shapes().round_of(static_cast<int>(idx));
    std::set<G> earlier, same;
    for (const auto& o : t.tiles())
      for (const G& x : o.shape) (o.round < round ? earlier : same).insert(x + o.center);
    for (const G& c : w) {
      bool ok = true;
      for (const auto& o : t.tiles())
        if (diffs.count(c - o.center)) ok = false;
      if (!ok) continue;
      std::int64_t lost = 0;
      for (const G& x : s) {
        if (!w.contains(x + c) || same.count(x + c)) ok = false;
        lost += earlier.count(x + c);
      }
      if (ok && Rational(lost) < eps * static_cast<std::int64_t>(s.size())) return false;
    }
  }
  return true;
}

template <LatticeElement G>
std::vector<G> naive_hits(const Configuration<G>& c, const Pattern<G>& p, const FiniteSet<G>& scan) {
  std::vector<G> out;
  for (const G& g : scan) {
    bool inside = true, ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) {
      G x = p.shape()[i] + g;
      if (!scan.contains(x)) {
        inside = false;
        break;
      }
      ok = c.at(x) == p.labels()[i];
    }
    if (inside && ok) out.push_back(g);
  }
  return out;
}

// ---- criteria ----

void criterion1() {
  auto t0 = Clock::now();
  Verdict v;
  auto gm = golden_mean_shift();
  for (int n = 1; n <= 24; ++n)
    v.require(count_patterns_exact(gm, interval(0, n)) == BigInt(fibonacci(n + 2)), concat("count at n = ", n));
  auto est = entropy_estimate(gm, interval(0, 24));
  const double h_ref = std::log((1 + std::sqrt(5.0)) / 2);
  const double h_transfer = entropy_1d(gm);
  v.require(std::abs(h_transfer - h_ref) < 1e-12, "transfer-matrix entropy");
  v.require(std::abs(est.h - h_ref) <= 0.02, concat("h(24) = ", est.h));
  const auto hs_oracle = brute_hard_square(4);
  const auto hs = count_patterns_exact(hard_square_shift(), box<Z2>(Z2{0, 0}, Z2{4, 4}));
  v.require(hs_oracle == 1234 && hs == BigInt(hs_oracle), concat("hard square 4x4 = ", hs));
  const double secs = seconds_since(t0);
  v.require(secs < 10, "runtime");
  report(1, "entropy oracle", v, concat("h(24)=", est.h, " ref=", h_ref, " hs=", hs, " t=", secs, "s"));
}

void criterion2() {
  auto t0 = Clock::now();
  Verdict v;
  std::size_t checked = 0;
  auto tally = [&](const char* dim, const LemmaSuiteReport& r) {
    for (auto [name, t] : {std::pair{"transfer", &r.transfer}, std::pair{"containment", &r.containment},
                           std::pair{"boundary", &r.boundary}, std::pair{"density", &r.density}}) {
      checked += t->checked;
      v.require(t->checked > 0 && t->violations == 0,
                concat(dim, " ", name, ": ", t->violations, " of ", t->checked,
                       t->examples.empty() ? "" : " e.g. " + t->examples.front()));
    }
    v.require(r.instances == 1000, concat(dim, " instances ", r.instances));
  };
  tally("Z", run_lemma_suite<Z1>(1000, 11));
  tally("Z2", run_lemma_suite<Z2>(1000, 12));
  const double secs = seconds_since(t0);
  v.require(secs < 30, "runtime");
  report(2, "geometry lemma suite", v, concat("checks=", checked, " t=", secs, "s"));
}

template <LatticeElement G>
void tiler_runs(Verdict& v, const FiniteSet<G>& l, const Rational& eps, const std::vector<FiniteSet<G>>& windows,
                int seeds, std::size_t& runs, std::size_t& covered_ok, std::size_t& maximal_checked) {
  auto shapes = choose_folner_shapes<G>(l, eps, 3);
  ShapeSet<G> ss(shapes);
  for (const auto& w : windows)
    for (int seed = 0; seed < seeds; ++seed) {
      TilerOptions<G> o;
      o.eps = eps;
      o.seed = static_cast<std::uint64_t>(seed);
      auto t = dh_tile(ss, l, w, o);
      auto r = retract(t);
      const std::string at = concat("window ", w.size(), " seed ", seed);
      v.require(is_separated(t.centers(), l) && separated_brute(t.centers().elements(), l), "separation, " + at);
      v.require(check_eps_disjoint(t, eps).pass && eps_disjoint_brute(t, eps), "eps-disjoint, " + at);
      v.require(pairwise_disjoint(r.tiles), "retraction disjoint, " + at);
      v.require(cells_of(r.tiles) == cells_of(t.tiles()), "(R1) union, " + at);
      bool small = true;
      for (int i = 0; i < G::dim; ++i) small &= w.upper()[i] - w.lower()[i] < 60;
      if (small) {
        ++maximal_checked;
        v.require(!find_insertion(t, l, eps) && maximal_brute(t, l, eps), "maximality, " + at);
      }
      auto cov = check_covering(t, Rational(1) - eps, w);
      std::int64_t in = 0;
      auto cells = cells_of(t.tiles());
      for (const G& x : w) in += cells.count(x);
      const Rational fraction(in, static_cast<std::int64_t>(w.size()));
      v.require(fraction == cov.fraction, "covering fraction, " + at);
      ++runs;
      covered_ok += fraction >= (Rational(1) - eps) - cov.slack;
    }
}

void criterion3() {
  auto t0 = Clock::now();
  Verdict v;
  std::size_t runs = 0, ok = 0, maximal = 0;
  std::vector<FiniteSet<Z1>> w1;
  for (int n : {40, 60, 100, 150, 200}) w1.push_back(interval(0, n));
  tiler_runs<Z1>(v, interval(-1, 2), Rational(1, 5), w1, 10, runs, ok, maximal);
  std::vector<FiniteSet<Z2>> w2;
  for (int n : {24, 36, 48}) w2.push_back(box<Z2>(Z2{0, 0}, Z2{n, n}));
  tiler_runs<Z2>(v, centered_box<Z2>(1), Rational(1, 4), w2, 5, runs, ok, maximal);
  v.require(ok * 100 >= runs * 95, concat("covering held on ", ok, " of ", runs, " runs"));
  report(3, "tiler suite", v,
         concat("runs=", runs, " covering_ok=", ok, " maximality_checked=", maximal, " t=", seconds_since(t0), "s"));
}

void criterion4() {
  auto t0 = Clock::now();
  Verdict v;
  std::size_t runs = 0, uncovered = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const Rational eps = seed % 2 ? Rational(1, 5) : Rational(1, 4);
    const int n = 200 + 20 * (seed % 11);
    auto shapes = choose_folner_shapes<Z1>(interval(-1, 2), eps, 3, 4);
    TilerOptions<Z1> o;
    o.eps = eps;
    o.seed = static_cast<std::uint64_t>(1000 + seed);
    auto t1 = retract(dh_tile(ShapeSet<Z1>(shapes), interval(-1, 2), interval(0, n), o));
    auto e = exactify(t1, eps);
    ++runs;
    uncovered += e.uncovered.size();
    const auto at = concat("seed ", seed);
    v.require(check_exactification(t1, e, eps).pass(), "library check, " + at);
    // Interior of the window by the collar, from scratch.
    auto cells = cells_of(e.tiling.tiles());
    std::size_t total = 0;
    for (const auto& t : e.tiling.tiles()) total += t.shape.size();
    v.require(total == cells.size(), "disjoint, " + at);
    for (int x = e.region.lower()[0] + e.collar; x <= e.region.upper()[0] - e.collar; ++x)
      if (!cells.count(Z1{x})) {
        v.require(false, concat("interior cell ", x, " uncovered, ", at));
        break;
      }
    v.require(e.tiling.centers() == t1.centers(), "centers, " + at);
    for (const auto& t : t1.tiles) {
      const auto* x = e.tiling.find(t.center);
      const bool ext = x && is_subset(t.shape, x->shape);
      v.require(ext, "extends, " + at);
      if (ext)
        v.require(Rational(static_cast<std::int64_t>(x->shape.size() - t.shape.size())) <
                      eps * 3 * static_cast<std::int64_t>(t.shape.size()),
                  "growth, " + at);
    }
  }
  // Infeasible fixtures: a gap wider than the capacity of its neighbours.
  std::size_t witnesses = 0;
  ShapeSet<Z1> s({interval(0, 8)});
  for (int gap : {12, 14, 20}) {
    QuasiTiling<Z1> t(s, interval(0, 10 + gap + 8), {{Z1{0}, 0, 0, interval(0, 8)}, {Z1{8 + gap}, 0, 0, interval(0, 8)}});
    ExactifyOptions<Z1> eo;
    eo.collar = 0;
    try {
      exactify(retract(t), Rational(15, 100), eo);
      v.require(false, concat("gap ", gap, " matched"));
    } catch (const InfeasibleMatching<Z1>& ex) {
      const auto& w = ex.witness();
      bool ok = w.deficient.size() > w.neighbours.size();
      for (const auto& x : w.deficient) ok &= !t.covered().contains(x);
      v.require(ok, concat("gap ", gap, " witness"));
      witnesses += ok;
    }
  }
  report(4, "exactifier", v,
         concat("runs=", runs, " collar_uncovered=", uncovered, " witnesses=", witnesses, " t=", seconds_since(t0), "s"));
}

void criterion5() {
  auto t0 = Clock::now();
  Verdict v;
  auto y = full_shift<Z1>(2);
  auto gm = golden_mean_shift();
  std::size_t scanned = 0;
  for (int r = 1; r <= 3; ++r) {
    MarkerKitOptions<Z1> o;
    o.k = interval(-1, 2);
    auto kit = build_marker_kit(y, gm, gm, r, o);
    v.require(kit.size() == static_cast<std::size_t>(r), concat("r = ", r, " size"));
    v.require(kit.window.size() >= 4 * kit.m.size(), concat("r = ", r, " scan window"));
    auto rep = verify_marker_kit(kit, kit.window, &y, &gm);
    v.require(rep.pass(), concat("r = ", r, rep.counterexamples.empty() ? "" : ": " + rep.counterexamples.front()));
    scanned += rep.translates_scanned;
    for (std::size_t i = 0; i < kit.size(); ++i)
      for (std::size_t j = 0; j < kit.size(); ++j)
        v.require(naive_hits(kit.carriers[j], kit.markers[i], kit.window) ==
                      (i == j ? std::vector<Z1>{Z1{0}} : std::vector<Z1>{}),
                  concat("r = ", r, " marker ", i, " in carrier ", j));
  }
  // Negative controls.
  std::size_t named = 0;
  {
    MarkerKitOptions<Z1> o;
    o.k = interval(-1, 2);
    SurplusPatterns<Z1> bad;
    bad.f = interval(0, 3);
    bad.patterns = {Pattern<Z1>(bad.f, {0, 0, 0})};
    o.surplus = bad;
    auto kit = build_marker_kit(y, gm, gm, 1, o);
    auto rep = verify_marker_kit(kit, kit.window, &y, &gm);
    v.require(!rep.pass() && !rep.counterexamples.empty(), "surplus from Y1 accepted");
    named += rep.counterexamples.size();
  }
  {
    MarkerKitOptions<Z1> o;
    o.k = interval(-1, 2);
    auto kit = build_marker_kit(y, gm, gm, 2, o);
    const Z1 far{kit.window.upper()[0] - kit.m.upper()[0]};
    kit.carriers[0] = kit.carriers[0].overwrite(kit.markers[0].translate(far));
    auto rep = verify_marker_kit(kit, kit.window, &y, &gm);
    v.require(!rep.pass() && !rep.counterexamples.empty(), "planted second occurrence accepted");
    v.require(naive_hits(kit.carriers[0], kit.markers[0], kit.window).size() == 2, "planted occurrence oracle");
    named += rep.counterexamples.size();
  }
  report(5, "marker suite", v, concat("translates=", scanned, " negative_counterexamples=", named, " t=", seconds_since(t0), "s"));
}

void criterion6() {
  Verdict v;
  auto b = build_block_injection(golden_mean_shift(), full_shift<Z1>(3), interval(0, 8), interval(0, 6));
  auto words = golden_words(8);
  v.require(words.size() == 55 && b.source.count() == 55, "source count");
  v.require(b.target.count() == 729 && BigInt(729) == BigInt(3 * 3 * 3 * 3 * 3 * 3), "target count");
  auto rows = b.rows();
  std::set<std::vector<Symbol>> images;
  std::set<std::vector<Symbol>> sources;
  for (const auto& [src, img] : rows) {
    sources.insert(src.labels());
    images.insert(img.labels());
    v.require(b.inverse(img) == std::optional<Pattern<Z1>>(src), "inverse");
    v.require(img.shape() == interval(0, 6), "image shape");
  }
  v.require(rows.size() == 55 && images.size() == 55, "injective table");
  v.require(sources == std::set<std::vector<Symbol>>(words.begin(), words.end()), "rows cover every source block");
  bool rejected = false;
  std::string msg;
  try {
    build_block_injection(full_shift<Z1>(2), full_shift<Z1>(2), interval(0, 4), interval(0, 4));
  } catch (const BudgetError& e) {
    rejected = true;
    msg = e.what();
  }
  v.require(rejected && msg.find("16") != std::string::npos, "16 vs 16 accepted");
  report(6, "block injection", v, concat("rows=", rows.size(), " images=", images.size()));
}

void criterion7() {
  auto t0 = Clock::now();
  Verdict v;
  auto setup = make_target_setup(full_shift<Z1>(2), interval_tiling_system({4, 5}));
  auto w = build_witness_set(setup);
  auto gm = golden_mean_shift();
  ChainOptions o;
  o.a = 0.55;
  o.b = 0.68;
  o.stop_on_entry = false;
  auto r = run_forbid_chain(setup, gm, w, o);
  v.require(r.stages.size() >= 2 && r.terminal, "chain terminal");
  for (std::size_t n = 0; n + 1 < r.stages.size(); ++n)
    v.require(r.stages[n + 1].total < r.stages[n].total, concat("count decrease at stage ", n));
  v.require(r.selected.has_value(), "no stage selected");
  double h = 0;
  if (r.selected) {
    h = r.stages[*r.selected].h_projection;
    v.require(h > o.a && h < o.b, concat("selected entropy ", h));
  }
  const std::vector<int> windows{4, 6, 8};
  auto audit = verify_chain(setup, gm, w, r, windows);
  v.require(audit.pass(), audit.failures.empty() ? "audit" : audit.failures.front());
  // Sandwich by direct word counts: golden words <= pi(Z_n) words <= 2^w.
  for (std::size_t n = 0; n < r.systems.size(); ++n)
    for (int len : windows) {
      auto words = projection_words(r.systems[n], r.pc, r.y, len, r.margin);
      std::set<std::vector<Symbol>> got;
      for (const auto& p : words) got.insert(p.labels());
      bool inside = true;
      for (const auto& g : golden_words(len)) inside &= got.count(g) > 0;
      v.require(inside && got.size() <= (std::size_t{1} << len), concat("sandwich at stage ", n, " window ", len));
    }
  report(7, "target chain", v,
         concat("stages=", r.stages.size(), " selected_h=", h, " t=", seconds_since(t0), "s"));
}

EmbeddingSpec<Z1> embed_instance(int symbols, std::vector<FiniteSet<Z1>> shapes) {
  auto y = full_shift<Z1>(symbols);
  auto y01 = subalphabet_shift<Z1>(symbols, {0, 1});
  MarkerKitOptions<Z1> ko;
  ko.k = FiniteSet<Z1>{Z1{0}};
  ko.window = interval(-4, 5);
  return EmbeddingSpec<Z1>{golden_mean_shift(), y, y01, y01, one_block_map<Z1>({0, 1}, "inclusion"),
                           build_marker_kit(y, y01, y01, static_cast<int>(shapes.size()), ko),
                           ShapeSet<Z1>(std::move(shapes)), interval(-3, 4), Rational(1, 5)};
}

std::vector<Configuration<Z1>> golden_samples(int n, const FiniteSet<Z1>& w) {
  std::vector<Configuration<Z1>> out;
  for (int s = 0; s < n; ++s) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(100 + s));
    out.push_back(*sample_configuration(golden_mean_shift(), w, rng));
  }
  return out;
}

void criterion8() {
  auto t0 = Clock::now();
  Verdict v;
  const double hx = std::log((1 + std::sqrt(5.0)) / 2), hy0 = std::log(2.0);
  EmbeddingMachine<Z1> m(embed_instance(3, {interval(-110, 110)}));
  auto budget = compute_budget(hx, hy0, 2, 3, 1, m.spec().eps);
  v.require(budget.mode() == "direct-verification", "mode " + budget.mode());
  auto val = m.validate(hx, hy0);
  v.require(val.pass(), val.pass() ? "" : "shape conditions: " + val.failures().front());

  const auto window = interval(0, 600);
  auto xs = golden_samples(20, window);
  std::size_t covered = 0, encodings = 0;
  std::set<std::vector<Symbol>> outputs;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& x = xs[i];
    const auto at = concat("sample ", i);
    auto enc = m.encode(x);
    // Y = full 3-shift: every cell is one of the three symbols; Y1 is the {0, 1} subalphabet.
    bool y_ok = enc.y.window() == window, y1_ok = true;
    for (Symbol s : enc.y.labels()) y_ok &= s >= 0 && s < 3;
    for (Symbol s : enc.y1.labels()) y1_ok &= s == 0 || s == 1;
    v.require(y_ok && is_locally_admissible(m.spec().y, enc.y), "y in Y, " + at);
    v.require(y1_ok, "y1 in Y1, " + at);
    // Marker recovery: occurrences of the single-cell marker are exactly the tile centers.
    std::vector<Z1> found = naive_hits(enc.y, m.spec().kit.markers[0], window);
    auto centers = enc.trace.t0.centers().elements();
    v.require(found == centers && !centers.empty(), "marker recovery, " + at);
    auto dec = m.decode(enc.y);
    v.require(dec.consistent(), "decode consistent, " + at);
    auto cov = enc.trace.t2.tiling.covered();
    bool same = true;
    for (const Z1& g : cov) same &= dec.x.shape().contains(g) && dec.x.at(g) == x.at(g);
    v.require(same, "round trip, " + at);
    covered += cov.size();
    ++encodings;
    outputs.insert(enc.y.labels());
    // One admissible flip on a covered cell.
    std::optional<Z1> flip;
    for (const Z1& g : cov)
      if (g[0] > 0 && g[0] + 1 < 600 && x.at(g) == 0 && x.at(g - Z1{1}) == 0 && x.at(g + Z1{1}) == 0) {
        flip = g;
        break;
      }
    v.require(flip.has_value(), "no flippable cell, " + at);
    if (flip) {
      auto x2 = x.overwrite(Pattern<Z1>(FiniteSet<Z1>{*flip}, {1}));
      v.require(m.encode(x2).y != enc.y, "flip collides, " + at);
    }
  }
  v.require(outputs.size() == xs.size(), "distinct inputs share an encoding");
  auto rep = verify_injectivity(m, xs);
  v.require(rep.conditions.pass(), rep.counterexamples.empty() ? "library verification" : rep.counterexamples.front());

  // Two shapes; two single-cell markers need a fourth symbol.
  EmbeddingMachine<Z1> m2(embed_instance(4, {interval(-110, 110), interval(-130, 130)}));
  auto rep2 = verify_injectivity(m2, golden_samples(20, window));
  v.require(rep2.conditions.pass(), rep2.counterexamples.empty() ? "two shapes" : rep2.counterexamples.front());
  v.require(m2.validate(hx, hy0).pass(), "two-shape shape conditions");

  const double secs = seconds_since(t0);
  v.require(secs < 120, "runtime");
  report(8, "end-to-end embedding", v,
         concat("samples=", encodings, " covered=", covered, " code_radius=", rep.observed_code_radius,
                " two_shape_covered=", rep2.covered_cells, " mode=", budget.mode(), " t=", secs, "s"));
}

void criterion9() {
  Verdict v;
  const double want = 0.5188 / (2 + 5 * std::log(2.0) + (5 + 4 * 729) * std::log(3.0));
  auto b = compute_budget(0.4812, 1.0, 2, 3, 3);
  v.require(std::abs(b.eps_bound - want) <= 1e-6 * want, concat("bound ", b.eps_bound, " vs ", want));
  v.require(std::abs(b.eps_bound - 1.61e-4) < 0.01e-4, "bound near 1.61e-4");
  auto r_of = [](double e) { return 1 + static_cast<int>(std::ceil((2 / e) * std::log(1 / e))); };
  v.require(marker_count(0.1) == 48 && r_of(0.1) == 48, "r(0.1)");
  v.require(marker_count(0.3) == 10 && r_of(0.3) == 10, "r(0.3)");
  for (auto [eps, r] : {std::pair{Rational(1, 10), 48}, std::pair{Rational(3, 10), 10}}) {
    auto c = compute_budget(0.4812, 1.0, 2, 3, 3, eps);
    const double e = to_double(eps);
    v.require(c.r == r && c.decay_ok() && std::pow(1 - e / 2, r) < e, concat("decay at ", to_string(eps)));
  }
  bool rejected = false;
  try {
    compute_budget(0.4812, 1.0, 2, 3, 3, Rational(1, 3));
  } catch (const BudgetError&) {
    rejected = true;
  }
  v.require(rejected, "eps = 1/3 accepted");
  report(9, "budget arithmetic", v, concat("eps_bound=", b.eps_bound, " r(0.1)=", marker_count(0.1), " r(0.3)=", marker_count(0.3)));
}

}  // namespace

int main() {
  std::cout.precision(6);
  auto guard = [](int id, void (*f)()) {
    try {
      f();
    } catch (const std::exception& e) {
      std::cout << "FAIL criterion " << id << ": threw " << e.what() << "\n";
      ++failures;
    }
  };
  guard(1, criterion1);
  guard(2, criterion2);
  guard(3, criterion3);
  guard(4, criterion4);
  guard(5, criterion5);
  guard(6, criterion6);
  guard(7, criterion7);
  guard(8, criterion8);
  guard(9, criterion9);
  std::cout << (failures ? "FAILED " : "ALL PASS ") << failures << " failing\n";
  return failures;
}
