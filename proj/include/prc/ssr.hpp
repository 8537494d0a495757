#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "prc/scheme.hpp"
#include "prc/sampling.hpp"
#include "prc/stats.hpp"

namespace prc {

struct SsrParams {
  uint32_t n = 1024;
  double c = 0.2;       // ell = ceil(c * log2(n)) unless ell is set explicitly
  uint32_t ell = 0;     // 0 -> derive from c
  double eps = 0.25;    // tag advantage: tag noise is Ber(1/2 - eps)
  uint32_t kprime = 0;  // 0 -> ceil((2 n^{2 delta} / eps)^2)
  double delta = 0.01;  // threshold exponent

  uint32_t resolved_ell() const {
    if (ell) return ell;
    auto l = static_cast<uint32_t>(detail::nudged_ceil(c * std::log2(static_cast<double>(n))));
    return l < 1 ? 1 : l;
  }

  uint32_t resolved_kprime() const {
    if (kprime) return kprime;
    double v = 2.0 * std::pow(static_cast<double>(n), 2.0 * delta) / eps;
    return static_cast<uint32_t>(detail::nudged_ceil(v * v));
  }

  void validate() const {
    if (!(delta > 0.0 && delta <= 0.01 + 1e-12))
      throw std::invalid_argument("ssr: delta must lie in (0, 1/100]");
    if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("ssr: eps must lie in (0, 1/2]");
    if (resolved_ell() > n) throw std::invalid_argument("ssr: ell > n");
    if (resolved_kprime() < 1) throw std::invalid_argument("ssr: kprime must be >= 1");
  }
};

struct SsrKey {
  std::vector<BitString> secrets;  // k' vectors in S_{ell,n}
};

/// Analytic per-tag match rate under BSC(p): (1/2)(1 + 2 eps (1-2p)^{ell+1}).
inline double ssr_expected_tag_match(double eps, double p, uint32_t ell) {
  if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("ssr_expected_tag_match: p outside [0, 1/2)");
  return 0.5 * (1.0 + 2.0 * eps * std::pow(1.0 - 2.0 * p, static_cast<double>(ell) + 1.0));
}

/// Codeword: a || <a,s_1>+e_1 || ... || <a,s_k'>+e_k' with e_i ~ Ber(1/2-eps).
/// Decoding gates on header balance, then thresholds the tag-match count at
/// k'/2 + n^delta sqrt(k') using exact integer arithmetic.
class SsrScheme final : public ZeroBitScheme {
 public:
  explicit SsrScheme(SsrParams p) : params_(p) { params_.validate(); }

  std::string name() const override { return "ssr"; }
  std::unique_ptr<ZeroBitScheme> clone() const override { return std::make_unique<SsrScheme>(*this); }
  bool is_public_key() const override { return false; }

  void keygen(RngStream& rng) override {
    const uint32_t kp = params_.resolved_kprime();
    const uint32_t l = params_.resolved_ell();
    key_.secrets.clear();
    key_.secrets.reserve(kp);
    for (uint32_t i = 0; i < kp; ++i)
      key_.secrets.push_back(sample_hamming_sphere(params_.n, l, rng));
    has_keys_ = true;
  }
  bool has_keys() const override { return has_keys_; }

  std::size_t codeword_length() const override { return params_.n + params_.resolved_kprime(); }

  BitString encode(RngStream& rng) const override {
    require_keys();
    const uint32_t n = params_.n;
    BitString out(codeword_length());
    BitString a = sample_uniform_bits(n, rng);
    out.write_slice(0, a);
    const double tag_noise = 0.5 - params_.eps;
    for (std::size_t i = 0; i < key_.secrets.size(); ++i) {
      bool tag = a.dot(key_.secrets[i]) ^ rng.bernoulli(tag_noise);
      out.set(n + i, tag);
    }
    return out;
  }

  Decode decode(const BitString& x) const override {
    require_keys();
    if (x.size() != codeword_length()) throw std::invalid_argument("ssr decode: length mismatch");
    const uint32_t n = params_.n;
    BitString header = x.slice(0, n);
    long long diff = static_cast<long long>(n) - 2 * static_cast<long long>(header.weight());
    if (std::llabs(diff) > balance_gate_count()) return Decode::Bot;
    uint32_t matches = 0;
    for (std::size_t i = 0; i < key_.secrets.size(); ++i)
      if (header.dot(key_.secrets[i]) == x.get(n + i)) ++matches;
    return matches >= threshold_min_matches() ? Decode::One : Decode::Bot;
  }

  /// Largest allowed |#zeros - #ones| of the header: 2 n^{0.6}, the
  /// imbalance the soundness analysis tolerates (|weight - n/2| <= n^{0.6}).
  long long balance_gate_count() const {
    return static_cast<long long>(detail::nudged_floor(2.0 * std::pow(static_cast<double>(params_.n), 0.6)));
  }

  /// Minimum tag matches for ONE: 2*matches >= k' + ceil(2 n^delta sqrt(k')).
  uint32_t threshold_min_matches() const {
    const uint32_t kp = params_.resolved_kprime();
    auto margin = static_cast<uint64_t>(detail::nudged_ceil(
        2.0 * std::pow(static_cast<double>(params_.n), params_.delta) *
        std::sqrt(static_cast<double>(kp))));
    return static_cast<uint32_t>((kp + margin + 1) / 2);
  }

  const SsrParams& params() const { return params_; }
  const SsrKey& key() const { return key_; }

  nlohmann::json params_json() const override {
    return {{"name", "ssr"},           {"n", params_.n},
            {"ell", params_.resolved_ell()}, {"eps", params_.eps},
            {"kprime", params_.resolved_kprime()}, {"delta", params_.delta}};
  }

  nlohmann::json keys_json() const override {
    require_keys();
    nlohmann::json secrets = nlohmann::json::array();
    for (const auto& s : key_.secrets) {
      std::vector<uint32_t> idx;
      for (uint32_t i = 0; i < s.size(); ++i)
        if (s.get(i)) idx.push_back(i);
      secrets.push_back(idx);
    }
    return {{"sk", {{"n", params_.n}, {"ell", params_.resolved_ell()}, {"secrets", std::move(secrets)}}}};
  }

  void load_keys(const nlohmann::json& j) override {
    const auto& sk = j.at("sk");
    if (sk.at("n").get<uint32_t>() != params_.n)
      throw std::invalid_argument("ssr key: n mismatch with params");
    key_.secrets.clear();
    for (const auto& idx : sk.at("secrets")) {
      BitString s(params_.n);
      for (const auto& i : idx) s.set(i.get<uint32_t>(), true);
      key_.secrets.push_back(std::move(s));
    }
    has_keys_ = true;
  }

 private:
  SsrParams params_;
  SsrKey key_;
  bool has_keys_ = false;
};

}  // namespace prc
