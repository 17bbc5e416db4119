#pragma once

#include "symdyn/subshift.hpp"

namespace symdyn {

template <LatticeElement G>
Sft<G> full_shift(int k) {
  FiniteSet<G> e{G::identity()};
  return Sft<G>(Alphabet::numeric(k), std::vector<Pattern<G>>{}, e, e, "full-" + std::to_string(k) + "-shift");
}

// Full k-shift restricted to the symbols in keep (others forbidden as single cells).
template <LatticeElement G>
Sft<G> subalphabet_shift(int k, const std::vector<Symbol>& keep, std::string name = {}) {
  FiniteSet<G> e{G::identity()};
  std::vector<Pattern<G>> f;
  for (Symbol s = 0; s < k; ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) f.push_back(Pattern<G>(e, {s}));
  if (name.empty()) name = "subalphabet-shift";
  return Sft<G>(Alphabet::numeric(k), f, e, e, std::move(name));
}

// Only the constant configuration s.
template <LatticeElement G>
Sft<G> constant_shift(int k, Symbol s) {
  auto sft = subalphabet_shift<G>(k, {s}, "constant-" + std::to_string(s));
  return sft;
}

// Forbid "11" on Z.
inline Sft<Z1> golden_mean_shift() {
  auto k = interval(-1, 2);
  return Sft<Z1>(Alphabet::numeric(2), std::vector<Pattern<Z1>>{Pattern<Z1>(interval(0, 2), {1, 1})}, k, k,
                 "golden-mean");
}

// Forbid "10" on Z; not strongly irreducible.
inline Sft<Z1> sink_shift() {
  return Sft<Z1>(Alphabet::numeric(2), std::vector<Pattern<Z1>>{Pattern<Z1>(interval(0, 2), {1, 0})},
                 interval(-1, 2), std::nullopt, "sink");
}

// Forbid horizontally or vertically adjacent 1s on Z^2.
inline Sft<Z2> hard_square_shift() {
  auto k = plus_shape<Z2>();
  std::vector<Pattern<Z2>> f{Pattern<Z2>(FiniteSet<Z2>{Z2{0, 0}, Z2{1, 0}}, {1, 1}),
                             Pattern<Z2>(FiniteSet<Z2>{Z2{0, 0}, Z2{0, 1}}, {1, 1})};
  return Sft<Z2>(Alphabet::numeric(2), f, k, k, "hard-square");
}

// Model of Z x (Z/2) inside Z^2: windows are strips of height 2 and the rule x(m,0) = x(m,1)
// is imposed by forbidding vertically unequal pairs.
inline Sft<Z2> strip_equality_shift(int k = 2) {
  std::vector<Pattern<Z2>> f;
  FiniteSet<Z2> pair{Z2{0, 0}, Z2{0, 1}};
  for (Symbol a = 0; a < k; ++a)
    for (Symbol b = 0; b < k; ++b)
      if (a != b) f.push_back(Pattern<Z2>(pair, {a, b}));
  auto w = plus_shape<Z2>();
  return Sft<Z2>(Alphabet::numeric(k), f, w, std::nullopt, "strip-equality");
}

template <LatticeElement G>
Sft<G> one_symbol_shift() {
  return full_shift<G>(1).with_name("one-symbol");
}

}  // namespace symdyn
