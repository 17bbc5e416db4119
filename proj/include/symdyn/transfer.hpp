#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "symdyn/search.hpp"

namespace symdyn {

using BigInt = boost::multiprecision::cpp_int;

// Exact count, rank and unrank of the locally admissible patterns of a Z-SFT on a finite shape,
// in lexicographic order of their label vectors.
class LexCodec1D {
 public:
  LexCodec1D(const Sft<Z1>& sft, FiniteSet<Z1> shape, SearchLimits limits = {})
      : shape_(std::move(shape)) {
    std::vector<Symbol> all(static_cast<std::size_t>(sft.alphabet().size()));
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::vector<Symbol>> dom(shape_.size(), all);
    eng_ = std::make_shared<detail::BasicLineEngine<BigInt>>(sft, shape_, dom, limits);
  }

  const FiniteSet<Z1>& shape() const { return shape_; }
  BigInt count() const { return eng_->total(); }

  BigInt rank(const Pattern<Z1>& p) const {
    if (p.shape() != shape_) throw PreconditionError("LexCodec1D::rank: shape mismatch");
    auto r = eng_->rank(p.labels());
    if (!r) throw PreconditionError("LexCodec1D::rank: pattern is not locally admissible");
    return *r;
  }
  std::optional<BigInt> try_rank(const Pattern<Z1>& p) const {
    if (p.shape() != shape_) return std::nullopt;
    return eng_->rank(p.labels());
  }
  Pattern<Z1> unrank(const BigInt& i) const { return Pattern<Z1>(shape_, eng_->unrank(i)); }

 private:
  FiniteSet<Z1> shape_;
  std::shared_ptr<const detail::BasicLineEngine<BigInt>> eng_;
};

inline BigInt count_interval(const Sft<Z1>& sft, int n) { return LexCodec1D(sft, interval(0, n)).count(); }

// ln of the spectral radius of the word-transition graph of a Z-SFT.
inline double entropy_1d(const Sft<Z1>& sft, int iterations = 4000) {
  const int span = sft.span();
  const int a = sft.alphabet().size();
  // States: admissible words of length span.
  std::vector<std::vector<Symbol>> words;
  Search<Z1> ws(sft, interval(0, span));
  ws.for_each([&](const std::vector<Symbol>& v) {
    words.push_back(v);
    return true;
  });
  std::map<std::vector<Symbol>, std::size_t> id;
  for (std::size_t i = 0; i < words.size(); ++i) id[words[i]] = i;
  std::vector<std::vector<std::size_t>> succ(words.size());
  for (std::size_t i = 0; i < words.size(); ++i)
    for (Symbol s = 0; s < a; ++s) {
      std::vector<Symbol> w = words[i];
      w.push_back(s);
      if (!is_locally_admissible(sft, Pattern<Z1>(interval(0, span + 1), w))) continue;
      w.erase(w.begin());
      auto it = id.find(w);
      if (it != id.end()) succ[i].push_back(it->second);
    }
  std::vector<double> v(words.size(), 1.0), nv(words.size());
  double logsum = 0;
  const int burn = iterations / 2;
  double log_at_burn = 0;
  for (int t = 1; t <= iterations; ++t) {
    std::fill(nv.begin(), nv.end(), 0.0);
    for (std::size_t i = 0; i < words.size(); ++i)
      for (std::size_t j : succ[i]) nv[j] += v[i];
    double norm = std::accumulate(nv.begin(), nv.end(), 0.0);
    if (norm == 0) return -std::numeric_limits<double>::infinity();
    for (auto& x : nv) x /= norm;
    logsum += std::log(norm);
    if (t == burn) log_at_burn = logsum;
    std::swap(v, nv);
  }
  return (logsum - log_at_burn) / (iterations - burn);
}

}  // namespace symdyn
