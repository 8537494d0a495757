#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "prc/scheme.hpp"
#include "prc/sampling.hpp"
#include "prc/stats.hpp"

namespace prc {

struct Hypergraph3 {
  uint32_t n_vertices = 0;
  std::vector<std::array<uint32_t, 3>> edges;
};

struct Hypergraph5 {
  uint32_t n_vertices = 0;
  std::vector<std::array<uint32_t, 5>> edges;
};

/// Secret: for each planted copy, the (post-shuffle) indices of its edges.
struct HyperloopSecret {
  std::vector<std::vector<uint32_t>> loops;
};

struct HyperloopParams {
  uint32_t n = 4096;
  double delta = 0.1;
  uint64_t m = 0;    // 0 -> floor(n^(1.5-delta))
  uint32_t ell = 0;  // 0 -> 0.36*log2(n) rounded to the nearest even value
  uint32_t t = 1;

  uint64_t resolved_m() const {
    if (m) return m;
    return static_cast<uint64_t>(detail::nudged_floor(std::pow(static_cast<double>(n), 1.5 - delta)));
  }

  uint32_t resolved_ell() const {
    if (ell) return ell;
    auto e = static_cast<uint32_t>(std::lround(0.36 * std::log2(static_cast<double>(n))));
    if (e < 2) e = 2;
    if (e & 1) ++e;
    return e;
  }

  void validate() const {
    uint32_t l = resolved_ell();
    if (l < 2 || (l & 1)) throw std::invalid_argument("hyperloop: ell must be even and >= 2");
    if (t < 1) throw std::invalid_argument("hyperloop: t must be >= 1");
    if (static_cast<uint64_t>(t) * (3 * l / 2) > n)
      throw std::invalid_argument("hyperloop: planting does not fit, t*(3*ell/2) > n");
  }
};

/// The fixed hyperloop L_0 of size ell (ell even): edge i over vertices
/// (w_i, w_{(i+1) mod ell}, c_{floor(i/2)}). Every vertex has degree two:
/// w_i sits in edges i-1 and i, c_j in edges 2j and 2j+1.
inline Hypergraph3 canonical_hyperloop(uint32_t ell) {
  if (ell < 2 || (ell & 1)) throw std::invalid_argument("canonical_hyperloop: ell must be even and >= 2");
  Hypergraph3 g;
  g.n_vertices = 3 * ell / 2;
  g.edges.reserve(ell);
  for (uint32_t i = 0; i < ell; ++i)
    g.edges.push_back({i, (i + 1) % ell, ell + i / 2});
  return g;
}

/// Samples the planted hyperloop 5-hypergraph: m random hyperedges plus t
/// vertex-disjoint copies of L_0 on random vertices, every edge padded with
/// two extra vertices, edge order shuffled. The padding vertices of the first
/// copy's edges are resampled until they are pairwise distinct and avoid that
/// copy's loop vertices, which is what makes the decoder's bias argument
/// exact (the padding products must be independent).
inline std::pair<Hypergraph5, HyperloopSecret> sample_planted_hypergraph(const HyperloopParams& params,
                                                                         RngStream& rng) {
  params.validate();
  const uint32_t n = params.n;
  const uint64_t m = params.resolved_m();
  const uint32_t ell = params.resolved_ell();
  const uint32_t t = params.t;
  const uint32_t loop_verts = 3 * ell / 2;

  Hypergraph5 h;
  h.n_vertices = n;
  const uint64_t total_edges = m + static_cast<uint64_t>(t) * ell;
  h.edges.reserve(total_edges);

  auto pick_distinct3 = [&](std::array<uint32_t, 5>& e) {
    e[0] = static_cast<uint32_t>(rng.next_below(n));
    do {
      e[1] = static_cast<uint32_t>(rng.next_below(n));
    } while (e[1] == e[0]);
    do {
      e[2] = static_cast<uint32_t>(rng.next_below(n));
    } while (e[2] == e[0] || e[2] == e[1]);
  };

  // Q: m random 3-hyperedges, padding filled in below.
  for (uint64_t i = 0; i < m; ++i) {
    std::array<uint32_t, 5> e{};
    pick_distinct3(e);
    h.edges.push_back(e);
  }

  // Plant t disjoint copies of L_0 on fresh random vertices.
  Hypergraph3 l0 = canonical_hyperloop(ell);
  std::vector<uint32_t> verts;
  std::vector<uint64_t> scratch;
  sample_subset(n, static_cast<uint64_t>(t) * loop_verts, rng, verts, scratch);
  for (uint32_t c = 0; c < t; ++c) {
    const uint32_t* map = verts.data() + static_cast<std::size_t>(c) * loop_verts;
    for (const auto& le : l0.edges)
      h.edges.push_back({map[le[0]], map[le[1]], map[le[2]], 0, 0});
  }

  // Pad every edge with two random vertices.
  for (auto& e : h.edges) {
    e[3] = static_cast<uint32_t>(rng.next_below(n));
    e[4] = static_cast<uint32_t>(rng.next_below(n));
  }

  // Condition the first copy: its 2*ell padding vertices pairwise distinct
  // and disjoint from its loop vertices.
  {
    const uint32_t* map = verts.data();
    std::vector<uint64_t> used((n + 63) / 64, 0);
    auto test = [&](uint32_t v) { return (used[v >> 6] >> (v & 63)) & 1; };
    auto mark = [&](uint32_t v) { used[v >> 6] |= uint64_t{1} << (v & 63); };
    bool ok = false;
    while (!ok) {
      std::fill(used.begin(), used.end(), 0);
      for (uint32_t v = 0; v < loop_verts; ++v) mark(map[v]);
      ok = true;
      for (uint32_t i = 0; i < ell && ok; ++i) {
        auto& e = h.edges[m + i];
        e[3] = static_cast<uint32_t>(rng.next_below(n));
        e[4] = static_cast<uint32_t>(rng.next_below(n));
        if (test(e[3])) ok = false;
        mark(e[3]);
        if (ok && (test(e[4]))) ok = false;
        mark(e[4]);
      }
    }
  }

  // Shuffle edge positions; the secret records post-shuffle indices.
  std::vector<uint32_t> perm = sample_permutation(total_edges, rng);
  std::vector<std::array<uint32_t, 5>> shuffled(total_edges);
  for (uint64_t j = 0; j < total_edges; ++j) shuffled[perm[j]] = h.edges[j];
  h.edges = std::move(shuffled);

  HyperloopSecret sk;
  sk.loops.resize(t);
  for (uint32_t c = 0; c < t; ++c) {
    auto& loop = sk.loops[c];
    loop.reserve(ell);
    for (uint32_t i = 0; i < ell; ++i)
      loop.push_back(perm[m + static_cast<uint64_t>(c) * ell + i]);
  }
  return {std::move(h), std::move(sk)};
}

/// Goldreich's PRG with predicate P5(x1..x5) = x1^x2^x3^(x4&x5): output bit i
/// applies P5 to the labels of hyperedge i.
inline BitString goldreich_prg_eval(const Hypergraph5& h, const BitString& x) {
  if (x.size() != h.n_vertices) throw std::invalid_argument("goldreich_prg_eval: input length mismatch");
  BitString out(h.edges.size());
  for (std::size_t i = 0; i < h.edges.size(); ++i) {
    const auto& e = h.edges[i];
    bool b = x.get(e[0]) ^ x.get(e[1]) ^ x.get(e[2]) ^ (x.get(e[3]) & x.get(e[4]));
    out.set(i, b);
  }
  return out;
}

/// Bit-sliced evaluation of 64 PRG inputs at once. vertex_lanes[v] holds
/// vertex v's bit across the 64 lanes; edge_lanes[i] receives output bit i.
inline void goldreich_prg_eval_batch64(const Hypergraph5& h,
                                       const std::vector<uint64_t>& vertex_lanes,
                                       std::vector<uint64_t>& edge_lanes) {
  edge_lanes.resize(h.edges.size());
  const uint64_t* v = vertex_lanes.data();
  for (std::size_t i = 0; i < h.edges.size(); ++i) {
    const auto& e = h.edges[i];
    edge_lanes[i] = v[e[0]] ^ v[e[1]] ^ v[e[2]] ^ (v[e[3]] & v[e[4]]);
  }
}

class HyperloopScheme final : public ZeroBitScheme {
 public:
  explicit HyperloopScheme(HyperloopParams p) : params_(p) { params_.validate(); }

  std::string name() const override { return "hyperloop"; }
  std::unique_ptr<ZeroBitScheme> clone() const override {
    return std::make_unique<HyperloopScheme>(*this);
  }

  void keygen(RngStream& rng) override {
    auto [pk, sk] = sample_planted_hypergraph(params_, rng);
    pk_ = std::move(pk);
    sk_ = std::move(sk);
    has_keys_ = true;
  }
  bool has_keys() const override { return has_keys_; }

  std::size_t codeword_length() const override {
    return params_.resolved_m() + static_cast<uint64_t>(params_.t) * params_.resolved_ell();
  }

  BitString encode(RngStream& rng) const override {
    require_keys();
    BitString u = sample_uniform_bits(params_.n, rng);
    return goldreich_prg_eval(pk_, u);
  }

  Decode decode(const BitString& x) const override {
    require_keys();
    if (x.size() != pk_.edges.size()) throw std::invalid_argument("hyperloop decode: length mismatch");
    return x.parity_at(sk_.loops[0]) ? Decode::Bot : Decode::One;
  }

  /// Confidence variant: counts how many planted loops have even parity.
  uint32_t satisfied_loops(const BitString& x) const {
    require_keys();
    uint32_t c = 0;
    for (const auto& loop : sk_.loops)
      if (!x.parity_at(loop)) ++c;
    return c;
  }

  Decode decode_multi(const BitString& x, uint32_t threshold) const {
    return satisfied_loops(x) >= threshold ? Decode::One : Decode::Bot;
  }

  /// Bit-sliced Monte Carlo for BSC / hypergeometric channels: 64 trials per
  /// batch share one PRG evaluation pass. Falls back to the generic loop for
  /// adversarial channels.
  uint64_t robustness_successes(const ChannelSpec& channel, uint64_t trials,
                                const RngStream& trial_root) const override {
    require_keys();
    if (channel.kind == ChannelSpec::Kind::BoundedAdversary)
      return ZeroBitScheme::robustness_successes(channel, trials, trial_root);

    const std::size_t len = pk_.edges.size();
    const auto& loop = sk_.loops[0];
    std::vector<uint64_t> vertex_lanes(params_.n);
    std::vector<uint64_t> edge_lanes;
    std::vector<uint32_t> idx;
    std::vector<uint64_t> scratch;
    uint64_t ones = 0;
    const uint64_t batches = (trials + 63) / 64;
    for (uint64_t b = 0; b < batches; ++b) {
      RngStream bs = trial_root.substream(b);
      RngStream input_rng = bs.substream(0);
      for (uint32_t v = 0; v < params_.n; ++v) vertex_lanes[v] = input_rng.next_u64();
      goldreich_prg_eval_batch64(pk_, vertex_lanes, edge_lanes);

      const unsigned lanes = static_cast<unsigned>(std::min<uint64_t>(64, trials - b * 64));
      if (channel.kind == ChannelSpec::Kind::Bsc && channel.p > 0.0) {
        RngStream ch = bs.substream(1);
        for (std::size_t j = 0; j < len; ++j) edge_lanes[j] ^= ch.bernoulli_word(channel.p);
      } else if (channel.kind == ChannelSpec::Kind::HypergeometricFlip && channel.d > 0) {
        for (unsigned l = 0; l < lanes; ++l) {
          RngStream ch = bs.substream(1 + l);
          sample_subset(len, channel.d, ch, idx, scratch);
          const uint64_t lane_bit = uint64_t{1} << l;
          for (uint32_t j : idx) edge_lanes[j] ^= lane_bit;
        }
      }

      uint64_t parity = 0;
      for (uint32_t j : loop) parity ^= edge_lanes[j];
      uint64_t mask = (lanes == 64) ? ~uint64_t{0} : ((uint64_t{1} << lanes) - 1);
      ones += std::popcount(~parity & mask);
    }
    return ones;
  }

  const HyperloopParams& params() const { return params_; }
  const Hypergraph5& public_key() const { return pk_; }
  const HyperloopSecret& secret_key() const { return sk_; }

  nlohmann::json params_json() const override {
    return {{"name", "hyperloop"}, {"n", params_.n},   {"delta", params_.delta},
            {"m", params_.resolved_m()},  {"ell", params_.resolved_ell()}, {"t", params_.t}};
  }

  nlohmann::json keys_json() const override {
    require_keys();
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : pk_.edges) edges.push_back({e[0], e[1], e[2], e[3], e[4]});
    return {{"pk", {{"n", pk_.n_vertices}, {"edges", std::move(edges)}}},
            {"sk", {{"loops", sk_.loops}}}};
  }

  void load_keys(const nlohmann::json& j) override {
    const auto& pk = j.at("pk");
    pk_.n_vertices = pk.at("n").get<uint32_t>();
    pk_.edges.clear();
    for (const auto& e : pk.at("edges")) {
      std::array<uint32_t, 5> a{};
      for (int i = 0; i < 5; ++i) a[i] = e.at(i).get<uint32_t>();
      pk_.edges.push_back(a);
    }
    sk_.loops = j.at("sk").at("loops").get<std::vector<std::vector<uint32_t>>>();
    has_keys_ = true;
  }

 private:
  HyperloopParams params_;
  Hypergraph5 pk_;
  HyperloopSecret sk_;
  bool has_keys_ = false;
};

}  // namespace prc
