#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "prc/bitstring.hpp"
#include "prc/channels.hpp"
#include "prc/rng.hpp"

namespace prc {

/// Decoder verdict of a zero-bit code: the only message is "1".
enum class Decode : uint8_t { Bot = 0, One = 1 };

/// Common interface of the zero-bit schemes.
///
/// A scheme instance carries its parameters from construction and its keys
/// after keygen(); everything is immutable afterwards, so const methods are
/// safe to call concurrently. Encoding draws from the caller's RngStream,
/// decoding is deterministic given the secret key.
class ZeroBitScheme {
 public:
  virtual ~ZeroBitScheme() = default;

  virtual std::string name() const = 0;
  virtual std::unique_ptr<ZeroBitScheme> clone() const = 0;

  virtual void keygen(RngStream& rng) = 0;
  virtual bool has_keys() const = 0;
  virtual std::size_t codeword_length() const = 0;
  virtual BitString encode(RngStream& rng) const = 0;
  virtual Decode decode(const BitString& x) const = 0;

  /// Whether the encoding key can be published (affects where the
  /// amplifier's shifts and permutation live).
  virtual bool is_public_key() const { return true; }

  virtual nlohmann::json params_json() const = 0;
  virtual nlohmann::json keys_json() const = 0;
  virtual void load_keys(const nlohmann::json& j) = 0;

  /// Count of decode(channel(encode())) == One over `trials` independent
  /// trials. Trial i draws from trial_root.substream(i), so the result
  /// depends only on (key, channel, trials, trial_root), never on scheduling.
  /// Schemes may override with an equivalent batched implementation.
  virtual uint64_t robustness_successes(const ChannelSpec& channel, uint64_t trials,
                                        const RngStream& trial_root) const {
    require_keys();
    uint64_t ones = 0;
    for (uint64_t i = 0; i < trials; ++i) {
      RngStream t = trial_root.substream(i);
      RngStream enc_rng = t.substream(0);
      RngStream ch_rng = t.substream(1);
      BitString x = encode(enc_rng);
      BitString y = channel.apply(x, ch_rng);
      if (decode(y) == Decode::One) ++ones;
    }
    return ones;
  }

 protected:
  void require_keys() const {
    if (!has_keys()) throw std::logic_error(name() + ": keys not generated");
  }
};

}  // namespace prc
