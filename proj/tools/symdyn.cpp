// Experiment runner: symdyn <command> --config run.json [--report r.json] [--csv c.csv] [--seed N] [--threads N]

#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "symdyn/symdyn.hpp"

using namespace symdyn;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- config access ----

class Section {
 public:
  Section(const json& j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!allowed.count(it.key())) throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
  }
  bool has(const std::string& k) const { return j_.contains(k); }
  const json& raw(const std::string& k) const {
    if (!has(k)) throw ConfigError(path_ + ": missing key '" + k + "'");
    return j_.at(k);
  }
  template <class T>
  T get(const std::string& k) const {
    try {
      return raw(k).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + k + ": wrong type");
    }
  }
  template <class T>
  T get(const std::string& k, T fallback) const {
    return has(k) ? get<T>(k) : fallback;
  }
  std::string where(const std::string& k) const { return path_ + "." + k; }

 private:
  const json& j_;
  std::string path_;
};

Rational parse_rational(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_string()) {
    auto s = v.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stoll(s));
      return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(where + ": expected a rational such as \"1/5\"");
}

Rational epsilon(const Section& s, const std::string& key, Rational fallback) {
  Rational e = s.has(key) ? parse_rational(s.raw(key), s.where(key)) : fallback;
  if (e <= 0) throw ConfigError(s.where(key) + ": epsilon must be positive");
  if (!(e < Rational(1, 3))) throw ConfigError(s.where(key) + ": epsilon " + to_string(e) + " violates the budget eps < 1/3");
  return e;
}

// [a, b) on Z, or [x0, y0, x1, y1) on Z^2.
template <LatticeElement G>
FiniteSet<G> box_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 * G::dim) throw ConfigError(where + ": expected " + std::to_string(2 * G::dim) + " integers");
  G lo{}, hi{};
  for (int i = 0; i < G::dim; ++i) {
    lo[i] = v[static_cast<std::size_t>(i)].get<int>();
    hi[i] = v[static_cast<std::size_t>(G::dim + i)].get<int>();
  }
  return box<G>(lo, hi);
}

template <LatticeElement G>
FiniteSet<G> set_of(const json& v, const std::string& where) {
  if (v.is_string()) return io::read_file<FiniteSet<G>>(v.get<std::string>(), [](io::Reader& r) { return io::read_set<G>(r); });
  return box_of<G>(v, where);
}

// "golden-mean", "full:3", "sub:3:0,1", "hard-square", "one-symbol", or a path to an sft file.
template <LatticeElement G>
Sft<G> sft_of(const std::string& spec) {
  if (spec.rfind("full:", 0) == 0) return full_shift<G>(std::stoi(spec.substr(5)));
  if (spec.rfind("sub:", 0) == 0) {
    auto rest = spec.substr(4);
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw ConfigError("sub: needs sub:<k>:<symbols>");
    std::vector<Symbol> keep;
    std::stringstream ss(rest.substr(colon + 1));
    for (std::string t; std::getline(ss, t, ',');) keep.push_back(std::stoi(t));
    return subalphabet_shift<G>(std::stoi(rest.substr(0, colon)), keep);
  }
  if (spec == "one-symbol") return one_symbol_shift<G>();
  if constexpr (G::dim == 1) {
    if (spec == "golden-mean") return golden_mean_shift();
  } else {
    if (spec == "hard-square") return hard_square_shift();
  }
  return io::read_file<Sft<G>>(spec, [](io::Reader& r) { return io::read_sft<G>(r); });
}

CountMode count_mode(const Section& s) {
  auto m = s.get<std::string>("mode", "extendable");
  if (m == "extendable") return CountMode::extendable(s.get<int>("margin", -1));
  if (m == "locally_admissible") return CountMode::local();
  throw ConfigError(s.where("mode") + ": expected extendable or locally_admissible");
}

// ---- output ----

struct Output {
  json records = json::array();
  std::vector<std::string> csv;  // "series,x,y"
  bool failed = false;

  void record(const std::string& name, const std::string& anchor, bool pass, json numbers, const std::string& mode = "") {
    json r{{"name", name}, {"anchor", anchor}, {"pass", pass}, {"numbers", std::move(numbers)}};
    if (!mode.empty()) r["mode"] = mode;
    records.push_back(std::move(r));
    if (!pass) failed = true;
    std::cout << (pass ? "PASS " : "FAIL ") << name << "\n";
  }
  void conditions(const std::string& prefix, const std::string& anchor, const ConditionReport& rep,
                  const std::string& mode = "") {
    for (const auto& c : rep.checks) record(prefix + c.name, anchor, c.pass, {{"detail", c.detail}}, mode);
  }
  void point(const std::string& series, double x, double y) {
    std::ostringstream os;
    os.precision(10);
    os << series << "," << x << "," << y;
    csv.push_back(os.str());
  }
};

struct Globals {
  std::optional<std::uint64_t> seed;
  int threads = 1;

  std::uint64_t need_seed(const std::string& step) const {
    if (!seed) throw ConfigError(step + ": a seed is required (config \"seed\" or --seed)");
    return *seed;
  }
};

// ---- commands ----

void run_geometry(const Section& s, const Globals& g, Output& out) {
  auto n = s.get<std::size_t>("instances", 1000);
  auto seed = g.need_seed("geometry");
  auto job1 = [&] { return run_lemma_suite<Z1>(n, seed); };
  auto job2 = [&] { return run_lemma_suite<Z2>(n, seed + 1); };
  LemmaSuiteReport r1, r2;
  if (g.threads > 1) {
    auto f = std::async(std::launch::async, job2);
    r1 = job1();
    r2 = f.get();
  } else {
    r1 = job1();
    r2 = job2();
  }
  for (auto [tag, r] : {std::pair{"Z", &r1}, std::pair{"Z2", &r2}}) {
    auto add = [&](const char* name, const char* anchor, const LemmaTally& t) {
      json nums{{"checked", t.checked}, {"violations", t.violations}};
      if (!t.examples.empty()) nums["examples"] = t.examples;
      out.record(std::string("geometry/") + tag + "/" + name, anchor, t.violations == 0, nums);
    };
    add("transfer", "invariance transfer bound", r->transfer);
    add("containment", "interior containment", r->containment);
    add("boundary", "boundary bound", r->boundary);
    add("density", "separated density bound", r->density);
  }
}

template <LatticeElement G>
void run_entropy_dim(const Section& s, const Globals& g, Output& out) {
  auto spec = s.get<std::string>("sft");
  auto sft = sft_of<G>(spec);
  auto mode = count_mode(s);
  auto sizes = s.get<std::vector<int>>("sizes", G::dim == 1 ? std::vector<int>{4, 8, 16, 24} : std::vector<int>{2, 3, 4});
  std::vector<std::future<EntropyEstimate>> jobs;
  std::vector<EntropyEstimate> est(sizes.size());
  auto one = [&](int n) {
    G hi{};
    for (int i = 0; i < G::dim; ++i) hi[i] = n;
    return entropy_estimate(sft, box<G>(G{}, hi), mode);
  };
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (g.threads > 1) jobs.push_back(std::async(std::launch::async, one, sizes[i]));
    else est[i] = one(sizes[i]);
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) est[i] = jobs[i].get();
  std::optional<double> ref;
  if constexpr (G::dim == 1) ref = entropy_1d(sft);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    json nums{{"n", sizes[i]}, {"cells", est[i].cells}, {"log_count", est[i].log_count}, {"h", est[i].h}};
    if (est[i].count < UINT64_MAX) nums["count"] = est[i].count;
    if (ref) nums["h_transfer"] = *ref;
    out.record("entropy/" + sft.name() + "/" + std::to_string(sizes[i]), "pattern count growth", std::isfinite(est[i].h),
               nums, est[i].mode.tag());
    out.point("entropy/" + sft.name(), sizes[i], est[i].h);
  }
  if (s.has("tolerance") && ref) {
    double tol = s.get<double>("tolerance");
    double err = std::abs(est.back().h - *ref);
    out.record("entropy/" + sft.name() + "/tolerance", "block entropy against spectral radius", err <= tol,
               {{"error", err}, {"tolerance", tol}}, est.back().mode.tag());
  }
}

void run_entropy(const Section& s, const Globals& g, Output& out) {
  if (s.get<int>("dim", 1) == 2) run_entropy_dim<Z2>(s, g, out);
  else run_entropy_dim<Z1>(s, g, out);
}

template <LatticeElement G>
void run_tile_dim(const Section& s, const Globals& g, Output& out) {
  std::vector<FiniteSet<G>> shapes;
  for (const auto& v : s.raw("shapes")) shapes.push_back(set_of<G>(v, s.where("shapes")));
  ShapeSet<G> ss(shapes);
  auto l = set_of<G>(s.raw("L"), s.where("L"));
  auto eps = epsilon(s, "eps", Rational(1, 10));
  auto window = set_of<G>(s.raw("window"), s.where("window"));
  TilerOptions<G> o;
  o.eps = eps;
  auto order = s.get<std::string>("order", "seeded");
  if (order == "seeded") o.order = CandidateOrder::seeded, o.seed = g.need_seed("tile");
  else if (order == "sequential") o.order = CandidateOrder::sequential;
  else throw ConfigError(s.where("order") + ": expected seeded or sequential");

  auto t = dh_tile(ss, l, window, o);
  auto r = retract(t);
  const std::string tag = "tile/";
  out.record(tag + "separated", "centers L-separated", is_separated(t.centers(), l), {{"centers", t.size()}});
  auto ed = check_eps_disjoint(t, eps);
  out.record(tag + "eps_disjoint", "retraction loses less than eps", ed.pass, {{"violators", ed.violators.size()}});
  out.record(tag + "union_preserved", "retraction keeps the union", r.covered() == t.covered(), {{"cells", t.covered().size()}});
  if (window.size() <= s.get<std::size_t>("maximality_limit", 3600)) {
    auto ins = find_insertion(t, l, eps);
    out.record(tag + "maximal", "no tile can be added", !ins, json::object());
  }
  auto cov = check_covering(t, Rational(1) - eps, window);
  out.record(tag + "covering", "covering fraction", cov.pass,
             {{"fraction", to_double(cov.fraction)}, {"target", to_double(cov.target)}, {"slack", to_double(cov.slack)}});
  out.point("covering", static_cast<double>(window.size()), to_double(cov.fraction));
  if (s.get<bool>("exactify", true)) {
    try {
      auto e = exactify(r, eps);
      auto rep = check_exactification(r, e, eps);
      out.record(tag + "exactify", "exact partition of the interior", rep.pass(),
                 {{"uncovered", e.uncovered.size()}, {"max_displacement", e.max_displacement}});
      if (s.has("out")) io::write_file(s.get<std::string>("out"), [&](std::ostream& os) { io::write_tiling(os, e.tiling); });
    } catch (const InfeasibleMatching<G>& ex) {
      out.record(tag + "exactify", "exact partition of the interior", false,
                 {{"deficient", ex.witness().deficient.size()}, {"neighbours", ex.witness().neighbours.size()}});
    }
  } else if (s.has("out")) {
    io::write_file(s.get<std::string>("out"), [&](std::ostream& os) { io::write_tiling(os, t); });
  }
}

void run_tile(const Section& s, const Globals& g, Output& out) {
  if (s.get<int>("dim", 1) == 2) run_tile_dim<Z2>(s, g, out);
  else run_tile_dim<Z1>(s, g, out);
}

void run_target(const Section& s, const Globals&, Output& out) {
  auto y = sft_of<Z1>(s.get<std::string>("y"));
  auto y1 = sft_of<Z1>(s.get<std::string>("y1"));
  std::optional<FiniteSet<Z1>> k;
  if (s.has("k")) k = set_of<Z1>(s.raw("k"), s.where("k"));
  auto setup = make_target_setup(y, interval_tiling_system(s.get<std::vector<int>>("lengths", {4, 5})), k);
  auto w = build_witness_set(setup);
  ChainOptions o;
  o.a = s.get<double>("a");
  o.b = s.get<double>("b");
  o.stop_on_entry = s.get<bool>("stop_on_entry", false);
  o.throw_on_miss = false;
  auto r = run_forbid_chain(setup, y1, w, o);
  for (std::size_t n = 0; n < r.stages.size(); ++n) out.point("chain", static_cast<double>(n), static_cast<double>(r.stages[n].total));
  json stages = json::array();
  for (const auto& st : r.stages)
    stages.push_back({{"total", st.total}, {"h_projection", st.h_projection}, {"shape", st.shape_index ? *st.shape_index : -1}});
  out.record("target/selected", "stage with entropy in (a, b)", r.selected.has_value(),
             {{"stages", stages}, {"terminal", r.terminal}, {"diagnostic", r.diagnostic}, {"eps_bound", r.eps_bound}});
  auto v = verify_chain(setup, y1, w, r, s.get<std::vector<int>>("sandwich_windows", {6}));
  out.record("target/counts_decrease", "stage counts strictly decrease", v.counts_decrease, json::object());
  out.record("target/B1", "forbidden block outside Y1", v.b1, json::object());
  out.record("target/B2", "forbidden block is no witness", v.b2, json::object());
  out.record("target/B3", "sibling with the same collar", v.b3, json::object());
  out.record("target/witnesses", "witness blocks survive", v.witnesses_survive, json::object());
  out.record("target/sandwich", "Y1 inside pi(Z_n) inside Y", v.sandwich, {{"failures", v.failures}});
}

MarkerKit<Z1> kit_of(const Section& s, const Sft<Z1>& y, const Sft<Z1>& y1, const Sft<Z1>& y0, int r) {
  if (s.has("in")) {
    return io::read_file<MarkerKit<Z1>>(s.get<std::string>("in"),
                                        [&](io::Reader& rd) { return io::read_kit<Z1>(rd, y.alphabet()); });
  }
  MarkerKitOptions<Z1> o;
  if (s.has("k")) o.k = set_of<Z1>(s.raw("k"), s.where("k"));
  if (s.has("window")) o.window = set_of<Z1>(s.raw("window"), s.where("window"));
  if (s.has("surplus")) {
    SurplusPatterns<Z1> sp;
    for (const auto& w : s.raw("surplus")) {
      auto names = w.get<std::vector<std::string>>();
      std::vector<Symbol> l;
      for (const auto& n : names) l.push_back(y.alphabet().index_of(n));
      sp.f = interval(0, static_cast<int>(l.size()));
      sp.patterns.emplace_back(sp.f, l);
    }
    sp.surplus = sp.patterns.size();
    o.surplus = sp;
    r = static_cast<int>(sp.patterns.size());
  }
  return build_marker_kit(y, y1, y0, r, o);
}

void run_markers(const Section& s, const Globals&, Output& out) {
  auto y = sft_of<Z1>(s.get<std::string>("y"));
  auto y1 = sft_of<Z1>(s.get<std::string>("y1"));
  auto y0 = sft_of<Z1>(s.get<std::string>("y0", s.get<std::string>("y1")));
  auto kit = kit_of(s, y, y1, y0, s.get<int>("r", 1));
  auto rep = verify_marker_kit(kit, kit.window, &y, &y1);
  out.conditions("markers/", "marker uniqueness scan", rep.conditions);
  out.record("markers/summary", "marker kit", rep.pass(),
             {{"r", kit.size()}, {"M", kit.m.size()}, {"window", kit.window.size()},
              {"translates", rep.translates_scanned}, {"counterexamples", rep.counterexamples}});
  for (const auto& c : rep.counterexamples) std::cout << "  counterexample: " << c << "\n";
  if (s.has("out")) io::write_file(s.get<std::string>("out"), [&](std::ostream& os) { io::write_kit(os, kit, y.alphabet()); });
}

struct EmbedSetup {
  EmbeddingSpec<Z1> spec;
  FiniteSet<Z1> window;
  double hx = 0, hy0 = 0;
};

EmbedSetup embed_setup(const Section& s) {
  EmbedSetup e;
  auto x = sft_of<Z1>(s.get<std::string>("x"));
  auto y = sft_of<Z1>(s.get<std::string>("y"));
  auto y1 = sft_of<Z1>(s.get<std::string>("y1"));
  auto y0 = sft_of<Z1>(s.get<std::string>("y0", s.get<std::string>("y1")));
  std::vector<Symbol> image;
  for (const auto& n : s.get<std::vector<std::string>>("phi", x.alphabet().names())) image.push_back(y0.alphabet().index_of(n));
  if (static_cast<int>(image.size()) != x.alphabet().size()) throw ConfigError(s.where("phi") + ": one image per X symbol");
  std::vector<FiniteSet<Z1>> shapes;
  for (const auto& v : s.raw("shapes")) shapes.push_back(set_of<Z1>(v, s.where("shapes")));
  MarkerKit<Z1> kit;
  if (s.has("kit")) {
    kit = io::read_file<MarkerKit<Z1>>(s.get<std::string>("kit"), [&](io::Reader& r) { return io::read_kit<Z1>(r, y.alphabet()); });
  } else {
    MarkerKitOptions<Z1> o;
    if (s.has("k")) o.k = set_of<Z1>(s.raw("k"), s.where("k"));
    kit = build_marker_kit(y, y1, y0, static_cast<int>(shapes.size()), o);
  }
  e.spec = EmbeddingSpec<Z1>{x, y, y1, y0, one_block_map<Z1>(image, "phi"), kit, ShapeSet<Z1>(shapes),
                             set_of<Z1>(s.raw("L"), s.where("L")), epsilon(s, "eps", Rational(1, 5))};
  e.window = set_of<Z1>(s.raw("window"), s.where("window"));
  e.hx = s.get<double>("hx", entropy_1d(x));
  e.hy0 = s.get<double>("hy0", entropy_1d(y0));
  return e;
}

void run_embed(const Section& s, const Globals& g, Output& out, const std::string& action, const std::string& in_path,
               const std::string& out_path, const std::string& trace_path, std::optional<int> samples_flag) {
  auto e = embed_setup(s);
  EmbeddingMachine<Z1> m(e.spec);
  auto budget = compute_budget(e.hx, e.hy0, e.spec.x.alphabet().size(), e.spec.y.alphabet().size(),
                               static_cast<int>(e.spec.kit.k.size()), e.spec.eps);
  const auto mode = budget.mode();
  out.record("embed/budget", "epsilon and marker budget", budget.decay_ok(),
             {{"eps", to_string(budget.eps)}, {"eps_bound", budget.eps_bound}, {"r", budget.r}, {"decay", budget.decay}}, mode);
  out.conditions("embed/", "shape conditions", m.validate(e.hx, e.hy0), mode);

  const auto& ax = e.spec.x.alphabet();
  const auto& ay = e.spec.y.alphabet();
  if (action == "encode") {
    if (in_path.empty()) throw ConfigError("embed encode: --in is required");
    auto x = io::read_file<Configuration<Z1>>(in_path, [&](io::Reader& r) { return io::read_configuration<Z1>(r, ax); });
    auto enc = m.encode(x);
    auto chk = check_encoding(m, x, enc);
    out.conditions("embed/encode/", "encoder properties", chk.conditions, mode);
    if (!out_path.empty()) io::write_file(out_path, [&](std::ostream& os) { io::write_configuration(os, enc.y, ay); });
    if (!trace_path.empty()) io::write_file(trace_path, [&](std::ostream& os) { os << io::to_json(enc.trace).dump(2) << "\n"; });
  } else if (action == "decode") {
    if (in_path.empty()) throw ConfigError("embed decode: --in is required");
    auto y = io::read_file<Configuration<Z1>>(in_path, [&](io::Reader& r) { return io::read_configuration<Z1>(r, ay); });
    auto dec = m.decode(y);
    out.record("embed/decode", "marker scan and block inversion", dec.consistent(),
               {{"centers", dec.centers.size()}, {"cells", dec.x.size()}, {"issues", dec.issues}}, mode);
    if (!out_path.empty() && !dec.x.empty())
      io::write_file(out_path, [&](std::ostream& os) { io::write_configuration(os, Configuration<Z1>(dec.x), ax); });
  } else {
    const int n = samples_flag ? *samples_flag : s.get<int>("samples", 20);
    std::mt19937_64 rng(g.need_seed("embed verify"));
    std::vector<Configuration<Z1>> xs;
    for (int i = 0; i < n; ++i) {
      auto x = sample_configuration(e.spec.x, e.window, rng);
      if (!x) throw HypothesisError("embed verify: X has no configuration on the window");
      xs.push_back(std::move(*x));
    }
    auto rep = verify_injectivity(m, xs);
    out.conditions("embed/verify/", "round trip and injectivity", rep.conditions, mode);
    out.record("embed/verify/summary", "round trip and injectivity", rep.conditions.pass(),
               {{"samples", rep.samples}, {"covered_cells", rep.covered_cells},
                {"observed_code_radius", rep.observed_code_radius}, {"counterexamples", rep.counterexamples}},
               mode);
    if (!trace_path.empty() && !xs.empty())
      io::write_file(trace_path, [&](std::ostream& os) { os << io::to_json(m.encode(xs.front()).trace).dump(2) << "\n"; });
  }
}

const std::set<std::string> kTopKeys{"seed", "threads", "geometry", "entropy", "tile", "target", "markers", "embed"};
const std::set<std::string> kGeometryKeys{"instances"};
const std::set<std::string> kEntropyKeys{"sft", "dim", "sizes", "mode", "margin", "tolerance"};
const std::set<std::string> kTileKeys{"dim", "shapes", "L", "window", "eps", "order", "exactify", "out", "maximality_limit"};
const std::set<std::string> kTargetKeys{"y", "y1", "k", "lengths", "a", "b", "stop_on_entry", "sandwich_windows"};
const std::set<std::string> kMarkerKeys{"y", "y1", "y0", "r", "k", "window", "surplus", "in", "out"};
const std::set<std::string> kEmbedKeys{"x", "y", "y1", "y0", "phi", "k", "kit", "shapes", "L", "eps", "window",
                                       "samples", "hx", "hy0"};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-window subshift embedding experiments"};
  app.require_subcommand(1);
  std::string config_path, report_path, csv_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--report", report_path, "write the JSON report here");
  app.add_option("--csv", csv_path, "write plot data (series,x,y) here");
  app.add_option("--seed", seed, "seed for every randomized step; overrides the config");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));

  std::vector<std::string> commands{"geometry-checks", "entropy", "tile", "target", "markers", "full-pipeline"};
  for (const auto& c : commands) app.add_subcommand(c)->fallthrough();
  auto* embed = app.add_subcommand("embed", "encode, decode or verify")->fallthrough();
  embed->require_subcommand(1);
  std::string in_path, out_path, trace_path, kit_path, sft_x, sft_y, sft_y0, window_spec;
  std::optional<int> samples;
  for (const char* a : {"encode", "decode", "verify"}) {
    auto* sub = embed->add_subcommand(a)->fallthrough();
    sub->add_option("--in", in_path);
    sub->add_option("--out", out_path);
    sub->add_option("--trace", trace_path);
    sub->add_option("--kit", kit_path);
    sub->add_option("--sft-x", sft_x);
    sub->add_option("--sft-y", sft_y);
    sub->add_option("--sft-y0", sft_y0);
    sub->add_option("--window", window_spec, "a:b for [a, b)");
    sub->add_option("--samples", samples);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Output out;
  std::string command = app.get_subcommands().front()->get_name();
  std::string action;
  if (command == "embed") action = embed->get_subcommands().front()->get_name();
  const auto t_start = std::chrono::steady_clock::now();
  try {
    json cfg = json::object();
    std::string text;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      text = ss.str();
      try {
        cfg = json::parse(text);
      } catch (const json::parse_error& e) {
        throw ConfigError(config_path + ": " + e.what());
      }
    }
    Section top(cfg, "config", kTopKeys);
    Globals g;
    g.seed = seed ? seed : (top.has("seed") ? std::optional<std::uint64_t>(top.get<std::uint64_t>("seed")) : std::nullopt);
    g.threads = threads > 0 ? threads : top.get<int>("threads", 1);

    auto section = [&](const std::string& k, const std::set<std::string>& keys, bool required) -> std::optional<Section> {
      if (!cfg.contains(k)) {
        if (required) throw ConfigError("config: section '" + k + "' is required for " + command);
        return std::nullopt;
      }
      return Section(cfg.at(k), k, keys);
    };
    static const json empty = json::object();
    auto geometry_or_default = [&] {
      return cfg.contains("geometry") ? Section(cfg.at("geometry"), "geometry", kGeometryKeys)
                                      : Section(empty, "geometry", kGeometryKeys);
    };

    if (command == "embed") {
      if (!cfg.contains("embed")) throw ConfigError("config: section 'embed' is required");
      json es = cfg.at("embed");
      if (!sft_x.empty()) es["x"] = sft_x;
      if (!sft_y.empty()) es["y"] = sft_y;
      if (!sft_y0.empty()) es["y0"] = sft_y0, es["y1"] = sft_y0;
      if (!kit_path.empty()) es["kit"] = kit_path;
      if (!window_spec.empty()) {
        auto colon = window_spec.find(':');
        if (colon == std::string::npos) throw ConfigError("--window: expected a:b");
        es["window"] = json::array({std::stoi(window_spec.substr(0, colon)), std::stoi(window_spec.substr(colon + 1))});
      }
      run_embed(Section(es, "embed", kEmbedKeys), g, out, action, in_path, out_path, trace_path, samples);
    } else if (command == "geometry-checks") {
      run_geometry(geometry_or_default(), g, out);
    } else if (command == "entropy") {
      run_entropy(*section("entropy", kEntropyKeys, true), g, out);
    } else if (command == "tile") {
      run_tile(*section("tile", kTileKeys, true), g, out);
    } else if (command == "target") {
      run_target(*section("target", kTargetKeys, true), g, out);
    } else if (command == "markers") {
      run_markers(*section("markers", kMarkerKeys, true), g, out);
    } else {
      // Validate every section before running any of them.
      auto geo = section("geometry", kGeometryKeys, false);
      auto ent = section("entropy", kEntropyKeys, false);
      auto til = section("tile", kTileKeys, false);
      auto tar = section("target", kTargetKeys, false);
      auto mar = section("markers", kMarkerKeys, false);
      auto emb = section("embed", kEmbedKeys, false);
      if (!emb) throw ConfigError("config: full-pipeline needs an 'embed' section");
      if (til) epsilon(*til, "eps", Rational(1, 10));
      epsilon(*emb, "eps", Rational(1, 5));
      if (geo) run_geometry(*geo, g, out);
      if (ent) run_entropy(*ent, g, out);
      if (til) run_tile(*til, g, out);
      if (tar) run_target(*tar, g, out);
      if (mar) run_markers(*mar, g, out);
      run_embed(*emb, g, out, "verify", "", "", "", std::nullopt);
    }

    json report{{"command", action.empty() ? command : command + " " + action},
                {"config_digest", concat(std::hex, fnv1a(text))},
                {"seed", g.seed ? json(*g.seed) : json(nullptr)},
                {"records", out.records}};
    json failed = json::array();
    for (const auto& r : out.records)
      if (!r["pass"].get<bool>()) failed.push_back(r["name"]);
    report["summary"] = {{"pass", !out.failed}, {"records", out.records.size()}, {"failed", failed}};
    if (!report_path.empty()) io::write_file(report_path, [&](std::ostream& os) { os << report.dump(2) << "\n"; });
    if (!csv_path.empty())
      io::write_file(csv_path, [&](std::ostream& os) {
        os << "series,x,y\n";
        for (const auto& l : out.csv) os << l << "\n";
      });
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  std::cerr << (out.failed ? "FAILED" : "OK") << " in " << secs << " s\n";
  return out.failed ? 1 : 0;
}
