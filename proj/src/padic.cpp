#include "alloysim/padic.hpp"

#include <cmath>

namespace alloysim {

double success_probability(std::uint64_t q, unsigned k) {
  if (q < 2 || k < 1) throw std::invalid_argument("success_probability: need q >= 2, k >= 1");
  double p = 1.0;
  for (unsigned i = 1; i <= k; ++i) p *= 1.0 - std::pow(static_cast<double>(q), -static_cast<double>(i));
  return p;
}

UniformityReport product_uniformity(std::uint64_t q, unsigned l, std::size_t samples, Rng& rng) {
  if (samples < 1) throw std::invalid_argument("product_uniformity: samples");
  const PadicDistribution dist(q, l);
  const PrimeField field(q);
  std::vector<std::size_t> counts(q, 0);
  for (std::size_t s = 0; s < samples; ++s) {
    std::uint64_t prod = field.one();
    for (unsigned i = 0; i < l; ++i) prod = field.mul(prod, dist.sample(rng));
    ++counts[prod];
  }
  UniformityReport rep;
  rep.frequencies.resize(q);
  const double uniform = 1.0 / static_cast<double>(q);
  double tv = 0.0;
  for (std::size_t v = 0; v < q; ++v) {
    rep.frequencies[v] = static_cast<double>(counts[v]) / static_cast<double>(samples);
    tv += std::abs(rep.frequencies[v] - uniform);
  }
  rep.tv_distance = 0.5 * tv;
  return rep;
}

}  // namespace alloysim
