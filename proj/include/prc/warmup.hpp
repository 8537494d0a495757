#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "prc/scheme.hpp"
#include "prc/siphash.hpp"
#include "prc/stats.hpp"

namespace prc {

/// PRF-tagged block scheme: codewords are t blocks of (header x_i, tag
/// f_k(x_i)), decoded by looking for any block whose tag is within Hamming
/// distance tag_len/10 of the PRF of its header. Robust only to sub-constant
/// error rates; kept as the baseline the local schemes are measured against.
struct WarmupParams {
  uint32_t tag_len = 256;     // n, the PRF output length
  uint32_t tau = 25;          // tolerated error rate is 1/tau
  uint32_t block_count = 64;  // t

  uint32_t input_len() const {
    double v = std::sqrt(static_cast<double>(tau)) * std::log2(static_cast<double>(tag_len));
    return static_cast<uint32_t>(detail::nudged_ceil(v));
  }

  void validate() const {
    if (tau < 1 || block_count < 1 || tag_len < 8)
      throw std::invalid_argument("warmup: need tau >= 1, t >= 1, tag_len >= 8");
  }
};

class WarmupScheme final : public ZeroBitScheme {
 public:
  explicit WarmupScheme(WarmupParams p) : params_(p) { params_.validate(); }

  std::string name() const override { return "warmup"; }
  std::unique_ptr<ZeroBitScheme> clone() const override {
    return std::make_unique<WarmupScheme>(*this);
  }
  bool is_public_key() const override { return false; }

  void keygen(RngStream& rng) override {
    k0_ = rng.next_u64();
    k1_ = rng.next_u64();
    has_keys_ = true;
  }
  bool has_keys() const override { return has_keys_; }

  std::size_t codeword_length() const override {
    return static_cast<std::size_t>(params_.block_count) * (params_.input_len() + params_.tag_len);
  }

  BitString encode(RngStream& rng) const override {
    require_keys();
    const uint32_t in_len = params_.input_len();
    BitString out(codeword_length());
    std::size_t pos = 0;
    for (uint32_t b = 0; b < params_.block_count; ++b) {
      BitString header = sample_uniform_bits(in_len, rng);
      out.write_slice(pos, header);
      pos += in_len;
      out.write_slice(pos, prf(header));
      pos += params_.tag_len;
    }
    return out;
  }

  Decode decode(const BitString& x) const override {
    require_keys();
    if (x.size() != codeword_length()) throw std::invalid_argument("warmup decode: length mismatch");
    const uint32_t in_len = params_.input_len();
    const uint32_t threshold = params_.tag_len / 10;
    std::size_t pos = 0;
    for (uint32_t b = 0; b < params_.block_count; ++b) {
      BitString header = x.slice(pos, in_len);
      pos += in_len;
      BitString tag = x.slice(pos, params_.tag_len);
      pos += params_.tag_len;
      if (hamming_distance(prf(header), tag) <= threshold) return Decode::One;
    }
    return Decode::Bot;
  }

  /// f_k: the keyed hash in counter mode, truncated to tag_len bits.
  BitString prf(const BitString& input) const {
    require_keys();
    std::vector<uint8_t> msg;
    const std::size_t in_bytes = (input.size() + 7) / 8;
    msg.resize(in_bytes + 8, 0);
    for (std::size_t i = 0; i < input.size(); ++i)
      if (input.get(i)) msg[i >> 3] |= static_cast<uint8_t>(1u << (i & 7));
    BitString out(params_.tag_len);
    const std::size_t words = out.word_count();
    for (std::size_t ctr = 0; ctr < words; ++ctr) {
      std::memcpy(msg.data() + in_bytes, &ctr, 8);
      out.word(ctr) = siphash24(k0_, k1_, msg.data(), msg.size());
    }
    out.mask_tail();
    return out;
  }

  const WarmupParams& params() const { return params_; }

  nlohmann::json params_json() const override {
    return {{"name", "warmup"},
            {"tag_len", params_.tag_len},
            {"tau", params_.tau},
            {"t", params_.block_count}};
  }

  nlohmann::json keys_json() const override {
    require_keys();
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(k0_),
                  static_cast<unsigned long long>(k1_));
    return {{"k", std::string(buf)}};
  }

  void load_keys(const nlohmann::json& j) override {
    std::string hex = j.at("k").get<std::string>();
    if (hex.size() != 32) throw std::invalid_argument("warmup key: expected 32 hex digits");
    k0_ = std::stoull(hex.substr(0, 16), nullptr, 16);
    k1_ = std::stoull(hex.substr(16, 16), nullptr, 16);
    has_keys_ = true;
  }

 private:
  WarmupParams params_;
  uint64_t k0_ = 0, k1_ = 0;
  bool has_keys_ = false;
};

}  // namespace prc
