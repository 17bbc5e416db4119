// Encode a golden-mean word into the full 3-shift and decode it back.

#include <iostream>
#include <random>

#include "symdyn/symdyn.hpp"

using namespace symdyn;

int main() {
  auto y = full_shift<Z1>(3);
  auto y01 = subalphabet_shift<Z1>(3, {0, 1});
  MarkerKitOptions<Z1> ko;
  ko.k = FiniteSet<Z1>{Z1{0}};
  ko.window = interval(-4, 5);
  EmbeddingSpec<Z1> spec{golden_mean_shift(), y, y01, y01, one_block_map<Z1>({0, 1}, "inclusion"),
                         build_marker_kit(y, y01, y01, 1, ko), ShapeSet<Z1>({interval(-110, 110)}),
                         interval(-3, 4), Rational(1, 5)};
  EmbeddingMachine<Z1> m(spec);

  std::mt19937_64 rng(7);
  auto x = *sample_configuration(spec.x, interval(0, 600), rng);
  auto enc = m.encode(x);
  auto dec = m.decode(enc.y);

  std::size_t agree = 0;
  const auto covered = enc.trace.t2.tiling.covered();
  for (const Z1& g : covered) agree += dec.x.at(g) == x.at(g);
  std::cout << "tiles " << enc.trace.t0.size() << ", covered " << covered.size() << ", recovered " << agree << "\n";
  std::cout << "marker centers:";
  for (const auto& [c, i] : m.scan_markers(enc.y)) std::cout << " " << c[0];
  std::cout << "\n";
  return agree == covered.size() ? 0 : 1;
}
