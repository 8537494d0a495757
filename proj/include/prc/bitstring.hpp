#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace prc {

/// Fixed-length bit sequence packed into 64-bit words.
///
/// Bit i lives in word i/64 at position i%64. All word-parallel operations
/// (xor, weight, F2 dot product) keep the unused tail bits of the last word
/// zero, so whole-word popcounts are valid without masking.
class BitString {
 public:
  BitString() = default;

  explicit BitString(std::size_t nbits)
      : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  static BitString zeros(std::size_t nbits) { return BitString(nbits); }

  static BitString ones(std::size_t nbits) {
    BitString b(nbits);
    for (auto& w : b.words_) w = ~uint64_t{0};
    b.mask_tail();
    return b;
  }

  std::size_t size() const { return nbits_; }
  std::size_t word_count() const { return words_.size(); }

  bool get(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  void set(std::size_t i, bool v) {
    uint64_t m = uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }

  void flip(std::size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

  uint64_t word(std::size_t w) const { return words_[w]; }
  uint64_t& word(std::size_t w) { return words_[w]; }
  std::span<const uint64_t> words() const { return words_; }

  /// Hamming weight |x|.
  std::size_t weight() const {
    std::size_t s = 0;
    for (uint64_t w : words_) s += std::popcount(w);
    return s;
  }

  void xor_with(const BitString& o) {
    if (o.nbits_ != nbits_) throw std::invalid_argument("BitString: length mismatch in xor");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  }

  void complement() {
    for (auto& w : words_) w = ~w;
    mask_tail();
  }

  /// Inner product over F2: parity of (x & y).
  bool dot(const BitString& o) const {
    if (o.nbits_ != nbits_) throw std::invalid_argument("BitString: length mismatch in dot");
    uint64_t acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & o.words_[i];
    return std::popcount(acc) & 1;
  }

  /// Parity of the bits at the given indices.
  bool parity_at(std::span<const uint32_t> idx) const {
    unsigned p = 0;
    for (uint32_t i : idx) p ^= static_cast<unsigned>(get(i));
    return p & 1;
  }

  /// Copies bits [start, start+len) into a fresh BitString.
  BitString slice(std::size_t start, std::size_t len) const {
    BitString out(len);
    if ((start & 63) == 0) {
      std::size_t w0 = start >> 6;
      for (std::size_t w = 0; w < out.words_.size(); ++w) out.words_[w] = words_[w0 + w];
      out.mask_tail();
    } else {
      for (std::size_t i = 0; i < len; ++i) out.set(i, get(start + i));
    }
    return out;
  }

  void write_slice(std::size_t start, const BitString& src) {
    if ((start & 63) == 0 && (src.nbits_ & 63) == 0) {
      std::size_t w0 = start >> 6;
      for (std::size_t w = 0; w < src.words_.size(); ++w) words_[w0 + w] = src.words_[w];
    } else {
      for (std::size_t i = 0; i < src.nbits_; ++i) set(start + i, src.get(i));
    }
  }

  bool operator==(const BitString& o) const {
    return nbits_ == o.nbits_ && words_ == o.words_;
  }
  bool operator!=(const BitString& o) const { return !(*this == o); }

  /// Serialization: lowercase hex, most-significant bit first within each
  /// byte. Lengths need not be multiples of 8; tail pad bits are zero.
  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::size_t nbytes = (nbits_ + 7) / 8;
    std::string out;
    out.reserve(2 * nbytes);
    for (std::size_t b = 0; b < nbytes; ++b) {
      unsigned byte = 0;
      for (unsigned k = 0; k < 8; ++k) {
        std::size_t i = 8 * b + k;
        unsigned bit = (i < nbits_) ? static_cast<unsigned>(get(i)) : 0u;
        byte |= bit << (7 - k);
      }
      out.push_back(digits[byte >> 4]);
      out.push_back(digits[byte & 15]);
    }
    return out;
  }

  static BitString from_hex(const std::string& hex, std::size_t nbits) {
    if (hex.size() != 2 * ((nbits + 7) / 8))
      throw std::invalid_argument("BitString: hex length does not match bit length");
    BitString out(nbits);
    auto nibble = [](char c) -> unsigned {
      if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
      if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
      if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
      throw std::invalid_argument("BitString: bad hex digit");
    };
    for (std::size_t b = 0; b * 2 < hex.size(); ++b) {
      unsigned byte = (nibble(hex[2 * b]) << 4) | nibble(hex[2 * b + 1]);
      for (unsigned k = 0; k < 8; ++k) {
        std::size_t i = 8 * b + k;
        if (i < nbits) out.set(i, (byte >> (7 - k)) & 1);
      }
    }
    return out;
  }

  /// Debug rendering, bit 0 first.
  std::string to_bits() const {
    std::string s;
    s.reserve(nbits_);
    for (std::size_t i = 0; i < nbits_; ++i) s.push_back(get(i) ? '1' : '0');
    return s;
  }

  static BitString from_bits(const std::string& s) {
    BitString out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1')
        out.set(i, true);
      else if (s[i] != '0')
        throw std::invalid_argument("BitString: bad bit character");
    }
    return out;
  }

  void mask_tail() {
    if (nbits_ & 63) words_.back() &= (uint64_t{1} << (nbits_ & 63)) - 1;
  }

 private:
  std::size_t nbits_ = 0;
  std::vector<uint64_t> words_;
};

inline std::size_t hamming_distance(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  std::size_t s = 0;
  for (std::size_t i = 0; i < a.word_count(); ++i)
    s += std::popcount(a.word(i) ^ b.word(i));
  return s;
}

/// Smallest delta for which `a` is delta-biased: |#zeros - #ones| / n.
inline double bias_delta(const BitString& a) {
  if (a.size() == 0) throw std::invalid_argument("bias_delta: empty string");
  auto ones = static_cast<long long>(a.weight());
  auto n = static_cast<long long>(a.size());
  long long diff = n - 2 * ones;
  return static_cast<double>(diff < 0 ? -diff : diff) / static_cast<double>(n);
}

}  // namespace prc
