#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "prc/scheme.hpp"
#include "prc/sampling.hpp"
#include "prc/stats.hpp"

namespace prc {

struct Calibration {
  double alpha = 0.0;  // Pr[decode(E(encode)) = ONE]
  double delta = 0.0;  // Pr[decode(uniform) = ONE]
  Interval alpha_ci{0.0, 1.0};
  Interval delta_ci{0.0, 1.0};
  uint64_t trials = 0;
};

/// Empirical estimates of the base scheme's corrupted-codeword decode rate
/// (alpha) and its random-string false-positive rate (delta), each with a
/// Wilson 99% interval. The amplifier needs alpha > delta; anything else
/// means the base scheme is unusable and is reported as a domain error.
inline Calibration calibrate_alpha_delta(const ZeroBitScheme& scheme, const ChannelSpec& channel,
                                         uint64_t trials, RngStream& rng) {
  if (trials < 1) throw std::invalid_argument("calibrate_alpha_delta: trials must be >= 1");
  Calibration cal;
  cal.trials = trials;
  uint64_t ones = scheme.robustness_successes(channel, trials, rng.substream(0));
  uint64_t false_ones = 0;
  RngStream rnd_root = rng.substream(1);
  for (uint64_t i = 0; i < trials; ++i) {
    RngStream t = rnd_root.substream(i);
    BitString x = sample_uniform_bits(scheme.codeword_length(), t);
    if (scheme.decode(x) == Decode::One) ++false_ones;
  }
  cal.alpha = static_cast<double>(ones) / static_cast<double>(trials);
  cal.delta = static_cast<double>(false_ones) / static_cast<double>(trials);
  cal.alpha_ci = wilson_ci(ones, trials);
  cal.delta_ci = wilson_ci(false_ones, trials);
  if (cal.alpha <= cal.delta)
    throw std::domain_error("calibrate_alpha_delta: alpha <= delta, base scheme gives no decoding advantage");
  return cal;
}

/// Chernoff sizing of the repetition count: t = ceil(12 ln(target) / (alpha-delta)^2)
/// puts both error tails far below 1/target.
inline uint64_t amplify_block_count(double alpha, double delta, double target = 200.0) {
  if (!(alpha > delta)) throw std::domain_error("amplify_block_count: need alpha > delta");
  double gap = alpha - delta;
  return static_cast<uint64_t>(detail::nudged_ceil(12.0 * std::log(target) / (gap * gap)));
}

/// Repetition-plus-masking wrapper: t base codewords, each XORed with a
/// secret shift z_i, concatenated and passed through a secret permutation of
/// the t*n coordinates; decoding votes the t base decoders against the
/// threshold ceil(t (alpha+delta)/2).
///
/// For public-key bases the shifts and permutation are part of both keys (the
/// encoder needs them); for secret-key bases everything stays secret.
class AmplifiedScheme final : public ZeroBitScheme {
 public:
  AmplifiedScheme(std::unique_ptr<ZeroBitScheme> base, uint64_t t, double alpha, double delta)
      : base_(std::move(base)), t_(t), alpha_(alpha), delta_(delta) {
    if (t_ < 1) throw std::invalid_argument("amplify: t must be >= 1");
    if (!(alpha_ > delta_)) throw std::domain_error("amplify: need alpha > delta");
    theta_ = static_cast<uint64_t>(detail::nudged_ceil(
        static_cast<double>(t_) * (alpha_ + delta_) / 2.0));
  }

  AmplifiedScheme(const AmplifiedScheme& o)
      : base_(o.base_->clone()), t_(o.t_), alpha_(o.alpha_), delta_(o.delta_), theta_(o.theta_),
        shifts_(o.shifts_), perm_(o.perm_), inv_perm_(o.inv_perm_), has_keys_(o.has_keys_) {}

  std::string name() const override { return "amplified-" + base_->name(); }
  std::unique_ptr<ZeroBitScheme> clone() const override {
    return std::make_unique<AmplifiedScheme>(*this);
  }
  bool is_public_key() const override { return base_->is_public_key(); }

  void keygen(RngStream& rng) override {
    RngStream base_rng = rng.substream(0);
    base_->keygen(base_rng);
    const std::size_t n = base_->codeword_length();
    RngStream shift_rng = rng.substream(1);
    shifts_.clear();
    shifts_.reserve(t_);
    for (uint64_t i = 0; i < t_; ++i) shifts_.push_back(sample_uniform_bits(n, shift_rng));
    RngStream perm_rng = rng.substream(2);
    perm_ = sample_permutation(t_ * n, perm_rng);
    rebuild_inverse();
    has_keys_ = true;
  }
  bool has_keys() const override { return has_keys_ && base_->has_keys(); }

  std::size_t codeword_length() const override { return t_ * base_->codeword_length(); }

  BitString encode(RngStream& rng) const override {
    require_keys();
    const std::size_t n = base_->codeword_length();
    BitString concat(t_ * n);
    for (uint64_t i = 0; i < t_; ++i) {
      BitString a = base_->encode(rng);
      a.xor_with(shifts_[i]);
      concat.write_slice(i * n, a);
    }
    BitString out(t_ * n);
    for (std::size_t j = 0; j < perm_.size(); ++j)
      if (concat.get(j)) out.set(perm_[j], true);
    return out;
  }

  Decode decode(const BitString& x) const override {
    return votes(x) >= theta_ ? Decode::One : Decode::Bot;
  }

  /// Number of blocks whose base decoder says ONE.
  uint64_t votes(const BitString& x) const {
    require_keys();
    const std::size_t n = base_->codeword_length();
    if (x.size() != t_ * n) throw std::invalid_argument("amplify decode: length mismatch");
    BitString concat(t_ * n);
    for (std::size_t j = 0; j < perm_.size(); ++j)
      if (x.get(perm_[j])) concat.set(j, true);
    uint64_t count = 0;
    for (uint64_t i = 0; i < t_; ++i) {
      BitString a = concat.slice(i * n, n);
      a.xor_with(shifts_[i]);
      if (base_->decode(a) == Decode::One) ++count;
    }
    return count;
  }

  uint64_t block_count() const { return t_; }
  uint64_t threshold() const { return theta_; }
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }
  const ZeroBitScheme& base() const { return *base_; }
  const std::vector<uint32_t>& permutation() const { return perm_; }
  const std::vector<BitString>& shifts() const { return shifts_; }

  nlohmann::json params_json() const override {
    return {{"name", "amplified"},
            {"base", base_->params_json()},
            {"t", t_},
            {"alpha", alpha_},
            {"delta", delta_}};
  }

  /// Key envelope: {"scheme", "n", "t", "theta", "shifts", "perm", "base_key"}.
  nlohmann::json keys_json() const override {
    require_keys();
    nlohmann::json shifts = nlohmann::json::array();
    for (const auto& z : shifts_) shifts.push_back(z.to_hex());
    return {{"scheme", base_->name()},
            {"n", base_->codeword_length()},
            {"t", t_},
            {"theta", theta_},
            {"alpha", alpha_},
            {"delta", delta_},
            {"shifts", std::move(shifts)},
            {"perm", perm_},
            {"base_key", base_->keys_json()}};
  }

  void load_keys(const nlohmann::json& j) override {
    const std::size_t n = base_->codeword_length();
    if (j.at("t").get<uint64_t>() != t_) throw std::invalid_argument("amplified key: t mismatch");
    theta_ = j.at("theta").get<uint64_t>();
    shifts_.clear();
    for (const auto& hex : j.at("shifts"))
      shifts_.push_back(BitString::from_hex(hex.get<std::string>(), n));
    perm_ = j.at("perm").get<std::vector<uint32_t>>();
    if (perm_.size() != t_ * n) throw std::invalid_argument("amplified key: perm size mismatch");
    base_->load_keys(j.at("base_key"));
    rebuild_inverse();
    has_keys_ = true;
  }

 private:
  void rebuild_inverse() {
    inv_perm_.assign(perm_.size(), 0);
    for (std::size_t j = 0; j < perm_.size(); ++j) inv_perm_[perm_[j]] = static_cast<uint32_t>(j);
  }

  std::unique_ptr<ZeroBitScheme> base_;
  uint64_t t_;
  double alpha_, delta_;
  uint64_t theta_;
  std::vector<BitString> shifts_;
  std::vector<uint32_t> perm_;
  std::vector<uint32_t> inv_perm_;
  bool has_keys_ = false;
};

}  // namespace prc
