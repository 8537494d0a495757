#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "prc/bitstring.hpp"
#include "prc/rng.hpp"
#include "prc/sampling.hpp"

namespace prc {

/// Binary symmetric channel: each bit flipped independently with probability p.
inline BitString apply_bsc(const BitString& x, double p, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("apply_bsc: p outside [0,1]");
  BitString out = x;
  for (std::size_t w = 0; w < out.word_count(); ++w) out.word(w) ^= rng.bernoulli_word(p);
  out.mask_tail();
  return out;
}

/// d-hypergeometric channel: flips exactly d positions, uniform over size-d
/// subsets (adds a uniform element of S_{d,n}).
inline BitString apply_hypergeometric(const BitString& x, uint64_t d, RngStream& rng) {
  if (d > x.size()) throw std::invalid_argument("apply_hypergeometric: d > length");
  BitString out = x;
  std::vector<uint32_t> idx;
  std::vector<uint64_t> scratch;
  sample_subset(x.size(), d, rng, idx, scratch);
  for (uint32_t i : idx) out.flip(i);
  return out;
}

enum class AdversaryStrategy { RandomFlip, PrefixBurst, ParityTarget };

inline AdversaryStrategy adversary_strategy_from_name(const std::string& name) {
  if (name == "random-flip") return AdversaryStrategy::RandomFlip;
  if (name == "prefix-burst") return AdversaryStrategy::PrefixBurst;
  if (name == "parity-target") return AdversaryStrategy::ParityTarget;
  throw std::invalid_argument("unknown adversary strategy: " + name);
}

inline std::string adversary_strategy_name(AdversaryStrategy s) {
  switch (s) {
    case AdversaryStrategy::RandomFlip: return "random-flip";
    case AdversaryStrategy::PrefixBurst: return "prefix-burst";
    case AdversaryStrategy::ParityTarget: return "parity-target";
  }
  return "?";
}

/// Hard-budgeted p-bounded adversary: never flips more than floor(p*n) bits,
/// which makes the p-bounded property exactly assertable.
///
/// parity-target flips a guessed index set (aux), truncated to the budget; it
/// models an attacker aiming at secret parity positions.
inline BitString apply_bounded_adversary(const BitString& x, double p, AdversaryStrategy strategy,
                                         const std::vector<uint32_t>& aux, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("apply_bounded_adversary: p outside [0,1]");
  uint64_t budget = static_cast<uint64_t>(static_cast<double>(x.size()) * p);
  BitString out = x;
  switch (strategy) {
    case AdversaryStrategy::RandomFlip:
      return apply_hypergeometric(x, budget, rng);
    case AdversaryStrategy::PrefixBurst:
      for (uint64_t i = 0; i < budget; ++i) out.flip(i);
      return out;
    case AdversaryStrategy::ParityTarget: {
      uint64_t used = 0;
      for (uint32_t i : aux) {
        if (used == budget) break;
        if (i >= x.size()) throw std::invalid_argument("parity-target: aux index out of range");
        out.flip(i);
        ++used;
      }
      return out;
    }
  }
  return out;
}

/// Channel description as parsed from CLI/JSON:
///   {"kind":"bsc","p":0.1} | {"kind":"hyp","d":128}
///   | {"kind":"adv","p":0.1,"strategy":"prefix-burst"[,"aux":[...]]}
struct ChannelSpec {
  enum class Kind { Bsc, HypergeometricFlip, BoundedAdversary } kind = Kind::Bsc;
  double p = 0.0;
  uint64_t d = 0;
  AdversaryStrategy strategy = AdversaryStrategy::RandomFlip;
  std::vector<uint32_t> aux;

  static ChannelSpec bsc(double p) {
    ChannelSpec c;
    c.kind = Kind::Bsc;
    c.p = p;
    return c;
  }
  static ChannelSpec hypergeometric(uint64_t d) {
    ChannelSpec c;
    c.kind = Kind::HypergeometricFlip;
    c.d = d;
    return c;
  }
  static ChannelSpec adversary(double p, AdversaryStrategy s, std::vector<uint32_t> aux = {}) {
    ChannelSpec c;
    c.kind = Kind::BoundedAdversary;
    c.p = p;
    c.strategy = s;
    c.aux = std::move(aux);
    return c;
  }
  static ChannelSpec identity() { return bsc(0.0); }

  BitString apply(const BitString& x, RngStream& rng) const {
    switch (kind) {
      case Kind::Bsc: return apply_bsc(x, p, rng);
      case Kind::HypergeometricFlip: return apply_hypergeometric(x, d, rng);
      case Kind::BoundedAdversary: return apply_bounded_adversary(x, p, strategy, aux, rng);
    }
    return x;
  }

  static ChannelSpec from_json(const nlohmann::json& j) {
    ChannelSpec c;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "bsc") {
      c.kind = Kind::Bsc;
      c.p = j.at("p").get<double>();
    } else if (kind == "hyp") {
      c.kind = Kind::HypergeometricFlip;
      c.d = j.at("d").get<uint64_t>();
    } else if (kind == "adv") {
      c.kind = Kind::BoundedAdversary;
      c.p = j.at("p").get<double>();
      c.strategy = adversary_strategy_from_name(j.at("strategy").get<std::string>());
      if (j.contains("aux")) c.aux = j.at("aux").get<std::vector<uint32_t>>();
    } else {
      throw std::invalid_argument("unknown channel kind: " + kind);
    }
    return c;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    switch (kind) {
      case Kind::Bsc:
        j["kind"] = "bsc";
        j["p"] = p;
        break;
      case Kind::HypergeometricFlip:
        j["kind"] = "hyp";
        j["d"] = d;
        break;
      case Kind::BoundedAdversary:
        j["kind"] = "adv";
        j["p"] = p;
        j["strategy"] = adversary_strategy_name(strategy);
        if (!aux.empty()) j["aux"] = aux;
        break;
    }
    return j;
  }

  std::string describe() const { return to_json().dump(); }
};

}  // namespace prc
