#pragma once

// Line-based text formats. Blank lines and text after '#' are ignored. Blocks open with a keyword
// line and close with "end". Coordinates are space-separated integers; symbols are alphabet names.
//
//   set <role>           one element per line, or "range lo.. hi.." for a half-open box
//   pattern              "<coords> <symbol>" per line
//   configuration <mode> as pattern; mode is free or periodic; "word <start> s1 s2 ..." on Z
//   sft <name>           "dim d", "alphabet a b ...", window/mix set blocks, forbid blocks
//                        (symbol fields may be "a|b" for a cylinder), "forbid-word s1 s2 ..." on Z
//   tiling               shape/window blocks, "tile <coords> <index>" lines, "order i j ..."
//   kit                  the marker kit fields as nested blocks

#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "symdyn/embedding.hpp"
#include "symdyn/markers.hpp"
#include "symdyn/quasitiling.hpp"
#include "symdyn/report.hpp"

namespace symdyn {

class ParseError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

namespace io {

using Tokens = std::vector<std::string>;

class Reader {
 public:
  explicit Reader(std::istream& in, std::string source = "<input>") : source_(std::move(source)) {
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::istringstream ls(line);
      Tokens t;
      for (std::string w; ls >> w;) t.push_back(w);
      if (!t.empty()) lines_.push_back({n, std::move(t)});
    }
  }

  bool done() const { return pos_ >= lines_.size(); }
  const Tokens& peek() const {
    if (done()) fail("unexpected end of input");
    cur_ = pos_;
    return lines_[pos_].tokens;
  }
  const Tokens& next() {
    const auto& t = peek();
    ++pos_;
    return t;
  }
  const Tokens& expect(const std::string& keyword) {
    const auto& t = next();
    if (t[0] != keyword) fail("expected '" + keyword + "', found '" + t[0] + "'");
    return t;
  }
  bool at_end_marker() const { return !done() && peek()[0] == "end"; }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, cur_); }
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    std::string where = source_;
    if (at < lines_.size()) where += ":" + std::to_string(lines_[at].number);
    throw ParseError(where + ": " + msg);
  }

 private:
  struct Line {
    int number;
    Tokens tokens;
  };
  std::string source_;
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  mutable std::size_t cur_ = 0;  // line of the last peek or next
};

inline int to_int(const Reader& r, const std::string& s) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  r.fail("not an integer: '" + s + "'");
}

template <LatticeElement G>
G coords(const Reader& r, const Tokens& t, std::size_t from) {
  if (t.size() < from + G::dim) r.fail("expected " + std::to_string(G::dim) + " coordinates");
  G g{};
  for (int i = 0; i < G::dim; ++i) g[i] = to_int(r, t[from + static_cast<std::size_t>(i)]);
  return g;
}

template <LatticeElement G>
void put_coords(std::ostream& os, const G& g) {
  for (int i = 0; i < G::dim; ++i) os << (i ? " " : "") << g[i];
}

inline Symbol symbol(const Reader& r, const Alphabet& a, const std::string& s) {
  try {
    return a.index_of(s);
  } catch (const std::exception&) {
    r.fail("unknown symbol '" + s + "'");
  }
}

inline SymbolMask symbol_mask(const Reader& r, const Alphabet& a, const std::string& s) {
  SymbolMask m = 0;
  std::size_t start = 0;
  while (true) {
    auto bar = s.find('|', start);
    m |= symbol_bit(symbol(r, a, s.substr(start, bar - start)));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return m;
}

// Body of a set block up to and including "end".
template <LatticeElement G>
FiniteSet<G> set_body(Reader& r, Role role) {
  std::vector<G> v;
  while (!r.at_end_marker()) {
    const auto& t = r.next();
    if (t[0] == "range") {
      if (t.size() != 1 + 2 * G::dim) r.fail("range needs " + std::to_string(2 * G::dim) + " integers");
      auto b = box<G>(coords<G>(r, t, 1), coords<G>(r, t, 1 + G::dim));
      v.insert(v.end(), b.begin(), b.end());
    } else {
      if (t.size() != static_cast<std::size_t>(G::dim)) r.fail("expected " + std::to_string(G::dim) + " coordinates");
      v.push_back(coords<G>(r, t, 0));
    }
  }
  r.expect("end");
  return FiniteSet<G>(std::move(v), role);
}

template <LatticeElement G>
FiniteSet<G> read_set(Reader& r, const std::string& keyword = "set") {
  const auto& h = r.expect(keyword);
  Role role = Role::generic;
  if (h.size() > 1) {
    try {
      role = role_from_name(h[1]);
    } catch (const PreconditionError& e) {
      r.fail(e.what());
    }
  }
  return set_body<G>(r, role);
}

template <LatticeElement G>
void write_set(std::ostream& os, const FiniteSet<G>& s, const std::string& keyword = "set") {
  os << keyword << " " << role_name(s.role()) << "\n";
  for (const G& g : s) {
    put_coords(os, g);
    os << "\n";
  }
  os << "end\n";
}

template <LatticeElement G>
std::pair<std::vector<G>, std::vector<Symbol>> cell_lines(Reader& r, const Alphabet& a) {
  std::vector<G> cells;
  std::vector<Symbol> labels;
  while (!r.at_end_marker()) {
    const auto& t = r.next();
    if (t[0] == "word") {
      if constexpr (G::dim == 1) {
        if (t.size() < 2) r.fail("word needs a start");
        int x = to_int(r, t[1]);
        for (std::size_t i = 2; i < t.size(); ++i) {
          cells.push_back(G{x++});
          labels.push_back(symbol(r, a, t[i]));
        }
        continue;
      } else {
        r.fail("word lines need Z");
      }
    }
    if (t.size() != static_cast<std::size_t>(G::dim) + 1) r.fail("expected coordinates and a symbol");
    cells.push_back(coords<G>(r, t, 0));
    labels.push_back(symbol(r, a, t.back()));
  }
  r.expect("end");
  std::vector<std::size_t> idx(cells.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return cells[i] < cells[j]; });
  std::vector<G> c2;
  std::vector<Symbol> l2;
  for (auto i : idx) {
    if (!c2.empty() && c2.back() == cells[i]) r.fail("cell listed twice");
    c2.push_back(cells[i]);
    l2.push_back(labels[i]);
  }
  return {std::move(c2), std::move(l2)};
}

template <LatticeElement G>
Pattern<G> read_pattern(Reader& r, const Alphabet& a, const std::string& keyword = "pattern") {
  r.expect(keyword);
  auto [cells, labels] = cell_lines<G>(r, a);
  return Pattern<G>(FiniteSet<G>(std::move(cells)), std::move(labels));
}

template <LatticeElement G>
void write_cells(std::ostream& os, const FiniteSet<G>& shape, const std::vector<Symbol>& labels, const Alphabet& a) {
  for (std::size_t i = 0; i < shape.size(); ++i) {
    put_coords(os, shape[i]);
    os << " " << a.name(labels[i]) << "\n";
  }
  os << "end\n";
}

template <LatticeElement G>
void write_pattern(std::ostream& os, const Pattern<G>& p, const Alphabet& a, const std::string& keyword = "pattern") {
  os << keyword << "\n";
  write_cells(os, p.shape(), p.labels(), a);
}

template <LatticeElement G>
Configuration<G> read_configuration(Reader& r, const Alphabet& a) {
  const auto& h = r.expect("configuration");
  BoundaryMode mode = BoundaryMode::free;
  if (h.size() > 1) {
    if (h[1] == "periodic") mode = BoundaryMode::periodic;
    else if (h[1] != "free") r.fail("boundary mode must be free or periodic");
  }
  auto [cells, labels] = cell_lines<G>(r, a);
  return Configuration<G>(FiniteSet<G>(std::move(cells)), std::move(labels), mode);
}

template <LatticeElement G>
void write_configuration(std::ostream& os, const Configuration<G>& c, const Alphabet& a) {
  os << "configuration " << boundary_mode_name(c.mode()) << "\n";
  write_cells(os, c.window(), c.labels(), a);
}

template <LatticeElement G>
Sft<G> read_sft(Reader& r) {
  const auto& h = r.expect("sft");
  std::string name = h.size() > 1 ? h[1] : "";
  std::optional<Alphabet> alpha;
  std::optional<FiniteSet<G>> window, mix;
  std::vector<Cylinder<G>> forbidden;
  while (!r.at_end_marker()) {
    const auto t = r.peek();
    if (t[0] == "dim") {
      r.next();
      if (t.size() != 2 || to_int(r, t[1]) != G::dim) r.fail("dimension mismatch");
    } else if (t[0] == "alphabet") {
      r.next();
      try {
        alpha = Alphabet(Tokens(t.begin() + 1, t.end()));
        if (alpha->size() >= 2 && alpha->name(0) == "0" && alpha->name(1) == "1") alpha = Alphabet(alpha->names(), 0, 1);
      } catch (const PreconditionError& e) {
        r.fail(e.what());
      }
    } else if (t[0] == "window") {
      window = read_set<G>(r, "window");
    } else if (t[0] == "mix") {
      mix = read_set<G>(r, "mix");
    } else if (t[0] == "forbid" || t[0] == "forbid-word") {
      if (!alpha) r.fail("alphabet must precede forbidden patterns");
      r.next();
      std::vector<G> cells;
      std::vector<SymbolMask> masks;
      if (t[0] == "forbid-word") {
        if constexpr (G::dim == 1) {
          for (std::size_t i = 1; i < t.size(); ++i) {
            cells.push_back(G{static_cast<int>(i - 1)});
            masks.push_back(symbol_mask(r, *alpha, t[i]));
          }
        } else {
          r.fail("forbid-word needs Z");
        }
      } else {
        while (!r.at_end_marker()) {
          const auto& c = r.next();
          if (c.size() != static_cast<std::size_t>(G::dim) + 1) r.fail("expected coordinates and a symbol field");
          cells.push_back(coords<G>(r, c, 0));
          masks.push_back(symbol_mask(r, *alpha, c.back()));
        }
        r.expect("end");
      }
      FiniteSet<G> shape(cells);
      if (shape.size() != cells.size()) r.fail("forbidden pattern lists a cell twice");
      std::vector<SymbolMask> sorted(cells.size());
      for (std::size_t i = 0; i < cells.size(); ++i) sorted[shape.index_of(cells[i]).value()] = masks[i];
      forbidden.emplace_back(std::move(shape), std::move(sorted));
    } else {
      r.fail("unknown sft key '" + t[0] + "'");
    }
  }
  r.expect("end");
  if (!alpha) r.fail("sft needs an alphabet");
  if (!window) r.fail("sft needs a window");
  try {
    return Sft<G>(*alpha, std::move(forbidden), *window, mix, name);
  } catch (const std::exception& e) {
    r.fail(e.what());
  }
}

template <LatticeElement G>
void write_sft(std::ostream& os, const Sft<G>& s) {
  os << "sft " << (s.name().empty() ? "unnamed" : s.name()) << "\ndim " << G::dim << "\nalphabet";
  for (const auto& n : s.alphabet().names()) os << " " << n;
  os << "\n";
  write_set(os, s.window(), "window");
  if (s.mix()) write_set(os, *s.mix(), "mix");
  for (const auto& c : s.forbidden()) {
    os << "forbid\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
      put_coords(os, c.shape()[i]);
      os << " ";
      bool first = true;
      for (Symbol a = 0; a < s.alphabet().size(); ++a)
        if (c.admits(i, a)) {
          os << (first ? "" : "|") << s.alphabet().name(a);
          first = false;
        }
      os << "\n";
    }
    os << "end\n";
  }
  os << "end\n";
}

template <LatticeElement G>
QuasiTiling<G> read_tiling(Reader& r) {
  r.expect("tiling");
  std::vector<FiniteSet<G>> shapes;
  std::optional<FiniteSet<G>> window;
  std::vector<std::pair<G, int>> centers;
  std::optional<std::vector<int>> order;
  while (!r.at_end_marker()) {
    const auto t = r.peek();
    if (t[0] == "shape") {
      shapes.push_back(read_set<G>(r, "shape").with_role(Role::s_tile_shape));
    } else if (t[0] == "window") {
      window = read_set<G>(r, "window");
    } else if (t[0] == "tile") {
      r.next();
      if (t.size() != static_cast<std::size_t>(G::dim) + 2) r.fail("tile needs coordinates and a shape index");
      centers.emplace_back(coords<G>(r, t, 1), to_int(r, t.back()));
    } else if (t[0] == "order") {
      r.next();
      order.emplace();
      for (std::size_t i = 1; i < t.size(); ++i) order->push_back(to_int(r, t[i]));
    } else {
      r.fail("unknown tiling key '" + t[0] + "'");
    }
  }
  r.expect("end");
  if (!window) r.fail("tiling needs a window");
  ShapeSet<G> ss(std::move(shapes));
  if (order && *order != ss.placement_order()) r.fail("placement order disagrees with the shapes");
  std::vector<Tile<G>> tiles;
  for (const auto& [c, i] : centers) {
    if (i < 0 || static_cast<std::size_t>(i) >= ss.size()) r.fail("shape index out of range");
    tiles.push_back({c, i, ss.round_of(i), ss[static_cast<std::size_t>(i)]});
  }
  return QuasiTiling<G>(ss, *window, std::move(tiles));
}

template <LatticeElement G>
void write_tiling(std::ostream& os, const QuasiTiling<G>& t) {
  os << "tiling\n";
  for (const auto& s : t.shapes().shapes()) write_set(os, s, "shape");
  write_set(os, t.window(), "window");
  for (const auto& tile : t.tiles()) {
    os << "tile ";
    put_coords(os, tile.center);
    os << " " << tile.shape_index << "\n";
  }
  os << "order";
  for (int i : t.shapes().placement_order()) os << " " << i;
  os << "\nend\n";
}

template <LatticeElement G>
MarkerKit<G> read_kit(Reader& r, const Alphabet& a) {
  r.expect("kit");
  MarkerKit<G> k;
  bool have_k = false, have_f = false, have_m = false, have_w = false, have_sub = false, have_mixed = false;
  while (!r.at_end_marker()) {
    const auto t = r.peek();
    if (t[0] == "k") {
      k.k = read_set<G>(r, "k").with_role(Role::k_window);
      have_k = true;
    } else if (t[0] == "f") {
      k.f = read_set<G>(r, "f");
      have_f = true;
    } else if (t[0] == "m") {
      k.m = read_set<G>(r, "m").with_role(Role::m_marker_shape);
      have_m = true;
    } else if (t[0] == "window") {
      k.window = read_set<G>(r, "window");
      have_w = true;
    } else if (t[0] == "anchor") {
      r.next();
      if (t.size() != 1 + 2 * static_cast<std::size_t>(G::dim)) r.fail("anchor needs g and h coordinates");
      k.anchors.push_back({coords<G>(r, t, 1), coords<G>(r, t, 1 + G::dim)});
    } else if (t[0] == "surplus") {
      k.surplus.push_back(read_pattern<G>(r, a, "surplus"));
    } else if (t[0] == "marker") {
      k.markers.push_back(read_pattern<G>(r, a, "marker"));
    } else if (t[0] == "substrate" || t[0] == "mixed" || t[0] == "carrier") {
      r.next();
      auto [cells, labels] = cell_lines<G>(r, a);
      Configuration<G> c(FiniteSet<G>(std::move(cells)), std::move(labels));
      if (t[0] == "substrate") k.substrate = std::move(c), have_sub = true;
      else if (t[0] == "mixed") k.mixed = std::move(c), have_mixed = true;
      else k.carriers.push_back(std::move(c));
    } else {
      r.fail("unknown kit key '" + t[0] + "'");
    }
  }
  r.expect("end");
  if (!(have_k && have_f && have_m && have_w && have_sub)) r.fail("kit needs k, f, m, window and substrate");
  if (!have_mixed) k.mixed = k.substrate;
  if (k.markers.size() != k.carriers.size() || k.markers.size() != k.surplus.size())
    r.fail("kit needs one surplus pattern, marker and carrier per index");
  k.core = product(k.k, k.f);
  return k;
}

template <LatticeElement G>
void write_kit(std::ostream& os, const MarkerKit<G>& k, const Alphabet& a) {
  os << "kit\n";
  write_set(os, k.k, "k");
  write_set(os, k.f, "f");
  write_set(os, k.m, "m");
  write_set(os, k.window, "window");
  for (const auto& an : k.anchors) {
    os << "anchor ";
    put_coords(os, an.g);
    os << " ";
    put_coords(os, an.h);
    os << "\n";
  }
  for (const auto& p : k.surplus) write_pattern(os, p, a, "surplus");
  os << "substrate\n";
  write_cells(os, k.substrate.window(), k.substrate.labels(), a);
  os << "mixed\n";
  write_cells(os, k.mixed.window(), k.mixed.labels(), a);
  for (std::size_t i = 0; i < k.size(); ++i) {
    write_pattern(os, k.markers[i], a, "marker");
    os << "carrier\n";
    write_cells(os, k.carriers[i].window(), k.carriers[i].labels(), a);
  }
  os << "end\n";
}

template <class T, class F>
T read_file(const std::string& path, F&& parse) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Reader r(in, path);
  T out = parse(r);
  if (!r.done()) r.fail("trailing content");
  return out;
}

template <class F>
void write_file(const std::string& path, F&& emit) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  emit(out);
}

// ---- JSON ----

using nlohmann::json;

template <LatticeElement G>
json to_json(const G& g) {
  json a = json::array();
  for (int i = 0; i < G::dim; ++i) a.push_back(g[i]);
  return a;
}

template <LatticeElement G>
json to_json(const FiniteSet<G>& s) {
  json a = json::array();
  for (const G& g : s) a.push_back(G::dim == 1 ? json(g[0]) : to_json(g));
  return a;
}

inline json to_json(const ConditionReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"pass", r.pass()}, {"checks", checks}};
}

template <LatticeElement G>
json to_json(const EncodeTrace<G>& t) {
  json tiles = json::array();
  for (const auto& rec : t.tiles)
    tiles.push_back({{"center", to_json(rec.center)},
                     {"shape_index", rec.shape_index},
                     {"s0", rec.s0.size()},
                     {"s1", rec.s1.size()},
                     {"s2", rec.s2.size()},
                     {"s1_star", rec.s1_star.size()},
                     {"lemma_hypotheses", rec.lemma_hypotheses}});
  json dropped = json::array();
  for (const G& g : t.t1.dropped) dropped.push_back(to_json(g));
  return {{"centers", t.t0.size()},
          {"dropped", dropped},
          {"tiles", tiles},
          {"cells", {{"c1", t.cells_c1}, {"c2", t.cells_c2}, {"y0", t.cells_base}}},
          {"uncovered", t.t2.uncovered.size()},
          {"max_displacement", t.t2.max_displacement},
          {"exactify_collar", t.t2.collar},
          {"hash_radius", t.hash_radius},
          {"count_mode", t.mode}};
}

}  // namespace io
}  // namespace symdyn
