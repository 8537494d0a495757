#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "prc/bitstring.hpp"
#include "prc/rng.hpp"
#include "prc/scheme.hpp"
#include "prc/siphash.hpp"

namespace prc {

/// Binary-alphabet toy model: next_prob gives the probability that the next
/// token is 1, as a deterministic function of (prompt, output so far).
class ToyModel {
 public:
  virtual ~ToyModel() = default;
  virtual std::string model_name() const = 0;
  virtual double next_prob(const std::string& prompt, const BitString& prefix,
                           std::size_t pos) const = 0;
};

class ConstModel final : public ToyModel {
 public:
  explicit ConstModel(double p) : p_(p) {}
  std::string model_name() const override { return "const(p=" + std::to_string(p_) + ")"; }
  double next_prob(const std::string&, const BitString&, std::size_t) const override { return p_; }

 private:
  double p_;
};

/// p oscillates with position: 0.5 + amp * sin(2 pi pos / period).
class SineModel final : public ToyModel {
 public:
  SineModel(double amp, double period) : amp_(amp), period_(period) {
    if (!(amp >= 0.0 && amp <= 0.5) || !(period > 0))
      throw std::invalid_argument("SineModel: need amp in [0, 1/2], period > 0");
  }
  std::string model_name() const override { return "sine"; }
  double next_prob(const std::string&, const BitString&, std::size_t pos) const override {
    return 0.5 + amp_ * std::sin(2.0 * std::numbers::pi * static_cast<double>(pos) / period_);
  }

 private:
  double amp_, period_;
};

/// Prompt-keyed hash model: p is derived from a hash of the prompt, the
/// recent output window, and the position, mapped into [lo, hi]. Gives
/// reproducible "texts" with tunable entropy.
class HashModel final : public ToyModel {
 public:
  HashModel(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) throw std::invalid_argument("HashModel: bad range");
  }
  std::string model_name() const override { return "hash"; }
  double next_prob(const std::string& prompt, const BitString& prefix, std::size_t pos) const override {
    uint64_t window = 0;
    const std::size_t take = std::min<std::size_t>(pos, 64);
    for (std::size_t k = 0; k < take; ++k)
      window |= static_cast<uint64_t>(prefix.get(pos - 1 - k)) << k;
    std::vector<uint8_t> msg(prompt.begin(), prompt.end());
    msg.resize(prompt.size() + 16);
    std::memcpy(msg.data() + prompt.size(), &window, 8);
    uint64_t p64 = pos;
    std::memcpy(msg.data() + prompt.size() + 8, &p64, 8);
    uint64_t h = siphash24(0x746f6b656e736565ULL, 0x6d6f64656c6b6579ULL, msg.data(), msg.size());
    double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    return lo_ + (hi_ - lo_) * u;
  }

 private:
  double lo_, hi_;
};

/// Parses "const:p=0.5", "sine:amp=0.45,period=64", "hash:lo=0.4,hi=0.6".
inline std::unique_ptr<ToyModel> make_model(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    std::size_t start = 0;
    while (start < rest.size()) {
      auto comma = rest.find(',', start);
      std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("model spec: expected key=value in " + spec);
      kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  auto get = [&](const std::string& k, double dflt) {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
  };
  if (kind == "const") return std::make_unique<ConstModel>(get("p", 0.5));
  if (kind == "sine") return std::make_unique<SineModel>(get("amp", 0.45), get("period", 16.0));
  if (kind == "hash") return std::make_unique<HashModel>(get("lo", 0.4), get("hi", 0.6));
  throw std::invalid_argument("unknown model: " + kind);
}

struct GenerationRecord {
  std::string prompt;
  BitString output;  // z
  BitString seed;    // x; empty for plain generation

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["prompt"] = prompt;
    j["z"] = {{"bits", output.size()}, {"hex", output.to_hex()}};
    if (seed.size() > 0)
      j["x"] = {{"bits", seed.size()}, {"hex", seed.to_hex()}};
    else
      j["x"] = nullptr;
    return j;
  }

  static GenerationRecord from_json(const nlohmann::json& j) {
    GenerationRecord r;
    r.prompt = j.at("prompt").get<std::string>();
    const auto& z = j.at("z");
    r.output = BitString::from_hex(z.at("hex").get<std::string>(), z.at("bits").get<std::size_t>());
    if (!j.at("x").is_null()) {
      const auto& x = j.at("x");
      r.seed = BitString::from_hex(x.at("hex").get<std::string>(), x.at("bits").get<std::size_t>());
    }
    return r;
  }
};

inline double checked_prob(const ToyModel& model, const std::string& prompt, const BitString& prefix,
                           std::size_t pos) {
  double p = model.next_prob(prompt, prefix, pos);
  if (!(p >= 0.0 && p <= 1.0)) throw std::runtime_error("model returned probability outside [0,1]");
  return p;
}

/// Plain generation: z_i ~ Ber(p_i) sequentially.
inline BitString generate_plain(const ToyModel& model, const std::string& prompt, std::size_t n,
                                RngStream& rng) {
  if (n < 1) throw std::invalid_argument("generate_plain: n must be >= 1");
  BitString z(n);
  for (std::size_t i = 0; i < n; ++i) {
    double p = checked_prob(model, prompt, z, i);
    z.set(i, rng.bernoulli(p));
  }
  return z;
}

/// Seeded generation. For p_i <= 1/2: z_i ~ Ber(2 p_i x_i). For p_i > 1/2 the
/// symmetric branch z_i ~ Ber(1 - 2 (1-p_i)(1-x_i)), so a uniform seed bit
/// leaves the marginal at Ber(p_i) while z_i tracks x_i whenever 0 < p_i < 1.
inline BitString generate_seeded(const ToyModel& model, const std::string& prompt, const BitString& x,
                                 RngStream& rng) {
  const std::size_t n = x.size();
  BitString z(n);
  for (std::size_t i = 0; i < n; ++i) {
    double p = checked_prob(model, prompt, z, i);
    bool xi = x.get(i);
    bool zi;
    if (p <= 0.5)
      zi = xi ? rng.bernoulli(2.0 * p) : false;
    else
      zi = xi ? true : rng.bernoulli(2.0 * p - 1.0);
    z.set(i, zi);
  }
  return z;
}

/// Watermarked generation: the seed is a fresh PRC codeword.
inline GenerationRecord generate_watermarked(const ToyModel& model, const std::string& prompt,
                                             const ZeroBitScheme& scheme, RngStream& rng) {
  GenerationRecord rec;
  rec.prompt = prompt;
  rec.seed = scheme.encode(rng);
  rec.output = generate_seeded(model, prompt, rec.seed, rng);
  return rec;
}

/// Detection is decoding of the output under the scheme's secret key.
inline Decode detect(const ZeroBitScheme& scheme, const BitString& z) {
  if (z.size() != scheme.codeword_length())
    throw std::invalid_argument("detect: output length does not match scheme codeword length");
  return scheme.decode(z);
}

}  // namespace prc
