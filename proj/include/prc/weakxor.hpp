#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "prc/scheme.hpp"
#include "prc/sampling.hpp"

namespace prc {

/// n x m bit matrix, rows packed into 64-bit words.
class XorMatrix {
 public:
  XorMatrix() = default;
  XorMatrix(uint32_t rows, uint32_t cols)
      : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), words_(static_cast<std::size_t>(rows) * wpr_, 0) {}

  uint32_t rows() const { return rows_; }
  uint32_t cols() const { return cols_; }
  uint32_t words_per_row() const { return wpr_; }

  uint64_t* row(uint32_t i) { return words_.data() + static_cast<std::size_t>(i) * wpr_; }
  const uint64_t* row(uint32_t i) const { return words_.data() + static_cast<std::size_t>(i) * wpr_; }

  bool get(uint32_t i, uint32_t j) const { return (row(i)[j >> 6] >> (j & 63)) & 1; }

  void xor_row_into(uint32_t src, uint64_t* dst) const {
    const uint64_t* s = row(src);
    for (uint32_t w = 0; w < wpr_; ++w) dst[w] ^= s[w];
  }

  BitString row_bits(uint32_t i) const {
    BitString b(cols_);
    for (uint32_t w = 0; w < wpr_; ++w) b.word(w) = row(i)[w];
    b.mask_tail();
    return b;
  }

  void set_row(uint32_t i, const BitString& b) {
    for (uint32_t w = 0; w < wpr_; ++w) row(i)[w] = b.word(w);
  }

  void fill_uniform(RngStream& rng) {
    for (uint32_t i = 0; i < rows_; ++i) {
      uint64_t* r = row(i);
      for (uint32_t w = 0; w < wpr_; ++w) r[w] = rng.next_u64();
      mask_row_tail(r);
    }
  }

  void mask_row_tail(uint64_t* r) const {
    if (cols_ & 63) r[wpr_ - 1] &= (uint64_t{1} << (cols_ & 63)) - 1;
  }

 private:
  uint32_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<uint64_t> words_;
};

/// t-sparse indicator secret: the support of s.
struct XorSecret {
  std::vector<uint32_t> support;
};

struct WeakXorParams {
  uint32_t n = 64;   // codeword length, rows of G
  uint32_t m = 128;  // columns of G
  uint32_t t = 4;    // sparsity of the planted secret
  double eps = 0.0;  // planted-noise rate
  double eta = 0.05; // LPN noise rate

  void validate() const {
    if (t > n || t < 1) throw std::invalid_argument("weakxor: need 1 <= t <= n");
    if (!(eps >= 0.0 && eps <= 0.5) || !(eta >= 0.0 && eta <= 0.5))
      throw std::invalid_argument("weakxor: eps and eta must lie in [0, 1/2]");
  }
};

/// D_1(n, m, t, eps): uniform G with the rows indexed by s rewritten so they
/// XOR to v ~ Ber(m, eps). With eps = 0 the s-rows XOR to exactly 0^m.
inline std::pair<XorMatrix, XorSecret> sample_planted_xor(const WeakXorParams& params, RngStream& rng) {
  params.validate();
  XorMatrix g(params.n, params.m);
  g.fill_uniform(rng);
  std::vector<uint32_t> support;
  std::vector<uint64_t> scratch;
  sample_subset(params.n, params.t, rng, support, scratch);
  BitString acc = sample_bernoulli_vector(params.m, params.eps, rng);  // v
  for (uint32_t i = 0; i + 1 < support.size(); ++i) acc.xor_with(g.row_bits(support[i]));
  g.set_row(support.back(), acc);
  std::sort(support.begin(), support.end());
  return {std::move(g), XorSecret{std::move(support)}};
}

/// Parity of x on the support of s.
inline bool sparse_parity(const XorSecret& s, const BitString& x) {
  return x.parity_at(s.support);
}

/// F2 row rank by Gaussian elimination on a copy of the packed rows.
inline uint32_t gf2_rank(const XorMatrix& g) {
  const uint32_t n = g.rows(), wpr = g.words_per_row();
  std::vector<uint64_t> rows(static_cast<std::size_t>(n) * wpr);
  for (uint32_t i = 0; i < n; ++i)
    std::copy(g.row(i), g.row(i) + wpr, rows.begin() + static_cast<std::size_t>(i) * wpr);
  auto row_ptr = [&](uint32_t i) { return rows.data() + static_cast<std::size_t>(i) * wpr; };
  uint32_t rank = 0;
  for (uint32_t col = 0; col < g.cols() && rank < n; ++col) {
    const uint32_t w = col >> 6;
    const uint64_t bit = uint64_t{1} << (col & 63);
    uint32_t pivot = n;
    for (uint32_t i = rank; i < n; ++i)
      if (row_ptr(i)[w] & bit) {
        pivot = i;
        break;
      }
    if (pivot == n) continue;
    if (pivot != rank)
      std::swap_ranges(row_ptr(pivot), row_ptr(pivot) + wpr, row_ptr(rank));
    for (uint32_t i = rank + 1; i < n; ++i)
      if (row_ptr(i)[w] & bit)
        for (uint32_t k = 0; k < wpr; ++k) row_ptr(i)[k] ^= row_ptr(rank)[k];
    ++rank;
  }
  return rank;
}

/// Basis of the left kernel {y : y^T G = 0}, found by eliminating [G | I].
inline std::vector<BitString> gf2_left_kernel(const XorMatrix& g) {
  const uint32_t n = g.rows(), wpr = g.words_per_row();
  const uint32_t iw = (n + 63) / 64;
  std::vector<uint64_t> rows(static_cast<std::size_t>(n) * (wpr + iw), 0);
  auto gpart = [&](uint32_t i) { return rows.data() + static_cast<std::size_t>(i) * (wpr + iw); };
  auto ipart = [&](uint32_t i) { return gpart(i) + wpr; };
  for (uint32_t i = 0; i < n; ++i) {
    std::copy(g.row(i), g.row(i) + wpr, gpart(i));
    ipart(i)[i >> 6] |= uint64_t{1} << (i & 63);
  }
  uint32_t rank = 0;
  for (uint32_t col = 0; col < g.cols() && rank < n; ++col) {
    const uint32_t w = col >> 6;
    const uint64_t bit = uint64_t{1} << (col & 63);
    uint32_t pivot = n;
    for (uint32_t i = rank; i < n; ++i)
      if (gpart(i)[w] & bit) {
        pivot = i;
        break;
      }
    if (pivot == n) continue;
    if (pivot != rank)
      std::swap_ranges(gpart(pivot), gpart(pivot) + wpr + iw, gpart(rank));
    for (uint32_t i = rank + 1; i < n; ++i)
      if (gpart(i)[w] & bit)
        for (uint32_t k = 0; k < wpr + iw; ++k) gpart(i)[k] ^= gpart(rank)[k];
    ++rank;
  }
  std::vector<BitString> basis;
  for (uint32_t i = rank; i < n; ++i) {
    BitString y(n);
    for (uint32_t w = 0; w < iw; ++w) y.word(w) = ipart(i)[w];
    y.mask_tail();
    basis.push_back(std::move(y));
  }
  return basis;
}

enum class XorVerdict { Planted, Random };

/// Rank-deficiency distinguisher against XOR_{m,t,0}. Whole-matrix mode (the
/// n <= m regime): a uniform matrix has full row rank with overwhelming
/// probability, an eps=0 planted one never does. For n > m, samples
/// floor(m/2)-row submatrices and looks for a nontrivial left kernel.
inline XorVerdict rank_attack(const XorMatrix& g) {
  if (g.rows() > g.cols())
    throw std::invalid_argument("rank_attack: whole-matrix mode needs n <= m");
  return gf2_rank(g) < g.rows() ? XorVerdict::Planted : XorVerdict::Random;
}

inline XorVerdict rank_attack_submatrix(const XorMatrix& g, uint32_t samples, RngStream& rng) {
  const uint32_t k = std::min(g.rows(), g.cols() / 2);
  std::vector<uint32_t> pick;
  std::vector<uint64_t> scratch;
  for (uint32_t s = 0; s < samples; ++s) {
    sample_subset(g.rows(), k, rng, pick, scratch);
    XorMatrix sub(k, g.cols());
    for (uint32_t i = 0; i < k; ++i) sub.set_row(i, g.row_bits(pick[i]));
    if (gf2_rank(sub) < k) return XorVerdict::Planted;
  }
  return XorVerdict::Random;
}

/// Multi-check variant: G uniform subject to s_i^T G = 0^m for tau secrets
/// with pairwise-disjoint supports. Sampling is exact: rows outside the
/// supports are free, and within each support all rows but one are free with
/// the last set to the XOR of the others.
inline std::pair<std::vector<XorSecret>, XorMatrix> multicheck_keygen(uint32_t n, uint32_t m, uint32_t tau,
                                                                      uint32_t t, RngStream& rng) {
  if (tau < 1 || static_cast<uint64_t>(tau) * t > n)
    throw std::invalid_argument("multicheck_keygen: need tau >= 1 and tau*t <= n");
  XorMatrix g(n, m);
  g.fill_uniform(rng);
  std::vector<uint32_t> all;
  std::vector<uint64_t> scratch;
  sample_subset(n, static_cast<uint64_t>(tau) * t, rng, all, scratch);
  for (std::size_t i = all.size(); i > 1; --i) std::swap(all[i - 1], all[rng.next_below(i)]);
  std::vector<XorSecret> sks(tau);
  for (uint32_t c = 0; c < tau; ++c) {
    auto& sup = sks[c].support;
    sup.assign(all.begin() + static_cast<std::size_t>(c) * t, all.begin() + static_cast<std::size_t>(c + 1) * t);
    BitString acc(m);
    for (uint32_t i = 0; i + 1 < sup.size(); ++i) acc.xor_with(g.row_bits(sup[i]));
    g.set_row(sup.back(), acc);
    std::sort(sup.begin(), sup.end());
  }
  return {std::move(sks), std::move(g)};
}

inline Decode multicheck_decode(const std::vector<XorSecret>& sks, const BitString& x, uint32_t threshold) {
  uint32_t hits = 0;
  for (const auto& s : sks)
    if (!sparse_parity(s, x)) ++hits;
  return hits >= threshold ? Decode::One : Decode::Bot;
}

class WeakXorScheme final : public ZeroBitScheme {
 public:
  explicit WeakXorScheme(WeakXorParams p) : params_(p) { params_.validate(); }

  std::string name() const override { return "weakxor"; }
  std::unique_ptr<ZeroBitScheme> clone() const override {
    return std::make_unique<WeakXorScheme>(*this);
  }

  void keygen(RngStream& rng) override {
    auto [pk, sk] = sample_planted_xor(params_, rng);
    pk_ = std::move(pk);
    sk_ = std::move(sk);
    has_keys_ = true;
  }
  bool has_keys() const override { return has_keys_; }

  std::size_t codeword_length() const override { return params_.n; }

  /// Gu + e with u ~ Ber(m, eta), e ~ Ber(n, eta).
  BitString encode(RngStream& rng) const override {
    require_keys();
    BitString u = sample_bernoulli_vector(params_.m, params_.eta, rng);
    BitString e = sample_bernoulli_vector(params_.n, params_.eta, rng);
    return encode_with(u, e);
  }

  /// Deterministic encode from injected randomness (unit-test hook).
  BitString encode_with(const BitString& u, const BitString& e) const {
    require_keys();
    if (u.size() != params_.m || e.size() != params_.n)
      throw std::invalid_argument("weakxor encode_with: dimension mismatch");
    BitString out = e;
    for (uint32_t i = 0; i < params_.n; ++i) {
      uint64_t acc = 0;
      const uint64_t* r = pk_.row(i);
      for (uint32_t w = 0; w < pk_.words_per_row(); ++w) acc ^= r[w] & u.word(w);
      if (std::popcount(acc) & 1) out.flip(i);
    }
    return out;
  }

  Decode decode(const BitString& x) const override {
    require_keys();
    if (x.size() != params_.n) throw std::invalid_argument("weakxor decode: length mismatch");
    return sparse_parity(sk_, x) ? Decode::Bot : Decode::One;
  }

  const WeakXorParams& params() const { return params_; }
  const XorMatrix& public_key() const { return pk_; }
  const XorSecret& secret_key() const { return sk_; }

  nlohmann::json params_json() const override {
    return {{"name", "weakxor"}, {"n", params_.n},     {"m", params_.m},
            {"t", params_.t},    {"eps", params_.eps}, {"eta", params_.eta}};
  }

  nlohmann::json keys_json() const override {
    require_keys();
    nlohmann::json rows = nlohmann::json::array();
    for (uint32_t i = 0; i < params_.n; ++i) rows.push_back(pk_.row_bits(i).to_hex());
    return {{"pk", {{"n", params_.n}, {"m", params_.m}, {"rows", std::move(rows)}}},
            {"sk", {{"support", sk_.support}}}};
  }

  void load_keys(const nlohmann::json& j) override {
    const auto& pk = j.at("pk");
    uint32_t n = pk.at("n").get<uint32_t>();
    uint32_t m = pk.at("m").get<uint32_t>();
    if (n != params_.n || m != params_.m)
      throw std::invalid_argument("weakxor key: dimension mismatch with params");
    pk_ = XorMatrix(n, m);
    const auto& rows = pk.at("rows");
    for (uint32_t i = 0; i < n; ++i)
      pk_.set_row(i, BitString::from_hex(rows.at(i).get<std::string>(), m));
    sk_.support = j.at("sk").at("support").get<std::vector<uint32_t>>();
    has_keys_ = true;
  }

 private:
  WeakXorParams params_;
  XorMatrix pk_;
  XorSecret sk_;
  bool has_keys_ = false;
};

}  // namespace prc
