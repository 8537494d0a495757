#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "prc/bitstring.hpp"
#include "prc/rng.hpp"
#include "prc/stats.hpp"

namespace prc {

/// Parameters of a hypergeometric draw: t draws without replacement from a
/// population of n elements of which m are special.
struct HypSpec {
  uint64_t population;  // n
  uint64_t special;     // m
  uint64_t draws;       // t

  void validate() const {
    if (special > population || draws > population)
      throw std::invalid_argument("HypSpec: need draws <= population and special <= population");
  }
};

inline BitString sample_uniform_bits(std::size_t n, RngStream& rng) {
  BitString out(n);
  for (std::size_t w = 0; w < out.word_count(); ++w) out.word(w) = rng.next_u64();
  out.mask_tail();
  return out;
}

/// Length-n string with i.i.d. Ber(p) bits.
inline BitString sample_bernoulli_vector(std::size_t n, double p, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_bernoulli_vector: p outside [0,1]");
  BitString out(n);
  for (std::size_t w = 0; w < out.word_count(); ++w) out.word(w) = rng.bernoulli_word(p);
  out.mask_tail();
  return out;
}

/// Floyd's algorithm: a uniform size-d subset of [0, n), O(d) draws.
/// Marks are cleared afterwards so the scratch can be reused across calls.
inline void sample_subset(uint64_t n, uint64_t d, RngStream& rng,
                          std::vector<uint32_t>& out, std::vector<uint64_t>& scratch) {
  if (d > n) throw std::invalid_argument("sample_subset: d > n");
  out.clear();
  out.reserve(d);
  std::size_t words = (n + 63) / 64;
  if (scratch.size() < words) scratch.assign(words, 0);
  auto test = [&](uint64_t i) { return (scratch[i >> 6] >> (i & 63)) & 1; };
  auto mark = [&](uint64_t i) { scratch[i >> 6] |= uint64_t{1} << (i & 63); };
  for (uint64_t j = n - d; j < n; ++j) {
    uint64_t t = rng.next_below(j + 1);
    uint64_t pick = test(t) ? j : t;
    mark(pick);
    out.push_back(static_cast<uint32_t>(pick));
  }
  for (uint32_t i : out) scratch[i >> 6] &= ~(uint64_t{1} << (i & 63));
}

/// Uniform element of the Hamming sphere S_{d,n}.
inline BitString sample_hamming_sphere(std::size_t n, std::size_t d, RngStream& rng) {
  if (d > n) throw std::invalid_argument("sample_hamming_sphere: d > n");
  BitString out(n);
  if (d == 0) return out;
  std::vector<uint32_t> idx;
  std::vector<uint64_t> scratch;
  sample_subset(n, d, rng, idx, scratch);
  for (uint32_t i : idx) out.set(i, true);
  return out;
}

/// Uniform permutation of [0, n) by Fisher-Yates.
inline std::vector<uint32_t> sample_permutation(std::size_t n, RngStream& rng) {
  std::vector<uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = rng.next_below(i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

// ---------------------------------------------------------------------------
// Analytic bias oracles.
// ---------------------------------------------------------------------------

/// Pr[X_1 xor ... xor X_n = 0] for independent X_i ~ Ber(p_i):
/// (1/2)(1 + prod(1 - 2 p_i)).
///
/// The formula is stated for p_i in [0, 1/2] but stays valid on all of
/// [0, 1]; values above 1/2 flip the sign of their factor.
inline double xor_parity_zero_prob(const std::vector<double>& ps) {
  double prod = 1.0;
  for (double p : ps) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("xor_parity_zero_prob: p outside [0,1]");
    prod *= 1.0 - 2.0 * p;
  }
  return 0.5 * (1.0 + prod);
}

/// Exact Pr[Hyp(n, m, t) is even] by pmf enumeration over t+1 terms.
inline double hypergeom_even_parity_exact(const HypSpec& spec) {
  spec.validate();
  if (spec.population > 1000000)
    throw std::invalid_argument("hypergeom_even_parity_exact: population too large");
  const uint64_t n = spec.population, m = spec.special, t = spec.draws;
  double denom = log_choose(n, t);
  double acc = 0.0;
  for (uint64_t k = 0; k <= t; k += 2) {
    if (k > m || t - k > n - m) continue;
    acc += std::exp(log_choose(m, k) + log_choose(n - m, t - k) - denom);
  }
  return acc > 1.0 ? 1.0 : acc;
}

/// Two-sided bounds on Pr[Hyp(n, m, t) is even]:
///   1/2 +- (1/2)|1-2p|^t  with p maximizing |1-2p| over [(m-t)/n, m/(n-t)].
inline Interval hypergeom_even_parity_bounds(const HypSpec& spec) {
  spec.validate();
  const double n = static_cast<double>(spec.population);
  const double m = static_cast<double>(spec.special);
  const double t = static_cast<double>(spec.draws);
  if (t > m) throw std::invalid_argument("hypergeom_even_parity_bounds: need t <= m <= n");
  double plo = (m - t) / n;
  double phi = (n > t) ? std::min(1.0, m / (n - t)) : 1.0;
  double dev = std::max(std::abs(1.0 - 2.0 * plo), std::abs(1.0 - 2.0 * phi));
  double r = 0.5 * std::pow(dev, t);
  return {0.5 - r, 0.5 + r};
}

}  // namespace prc
