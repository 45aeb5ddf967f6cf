#pragma once

#include <cmath>
#include <cstdint>

namespace tfrac::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011). A draw is a
// pure function of (key, counter), so any replicate/block is addressable
// without sequencing state.
struct Philox4x32 {
    static constexpr std::uint32_t kW32A = 0x9E3779B9u;
    static constexpr std::uint32_t kW32B = 0xBB67AE85u;
    static constexpr std::uint32_t kM4x32A = 0xD2511F53u;
    static constexpr std::uint32_t kM4x32B = 0xCD9E8D57u;

    struct Block {
        std::uint32_t v[4];
    };

    static inline void round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
        std::uint64_t p0 = static_cast<std::uint64_t>(kM4x32A) * ctr[0];
        std::uint64_t p1 = static_cast<std::uint64_t>(kM4x32B) * ctr[2];
        std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        std::uint32_t out0 = hi1 ^ ctr[1] ^ key[0];
        std::uint32_t out2 = hi0 ^ ctr[3] ^ key[1];
        ctr[0] = out0;
        ctr[1] = lo1;
        ctr[2] = out2;
        ctr[3] = lo0;
    }

    // counter = (block lo32, block hi32, stream lo32, stream hi32)
    static Block generate(std::uint64_t key64, std::uint64_t block, std::uint64_t stream) {
        std::uint32_t ctr[4] = {
            static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
            static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        std::uint32_t key[2] = {static_cast<std::uint32_t>(key64),
                                static_cast<std::uint32_t>(key64 >> 32)};
        for (int r = 0; r < 10; ++r) {
            round(ctr, key);
            key[0] += kW32A;
            key[1] += kW32B;
        }
        return {{ctr[0], ctr[1], ctr[2], ctr[3]}};
    }
};

// SplitMix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t replicate) {
    return mix64(seed ^ mix64(replicate + 0x5851F42D4C957F2Dull));
}

// Standard normals by Box-Muller over the Philox stream; draw i consumes
// block i/2, which keeps the stream alignment independent of call order.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    double at(std::uint64_t i) const {
        std::uint64_t block = i / 2;
        Philox4x32::Block b = Philox4x32::generate(seed_, block, stream_);
        std::uint64_t u1bits = (static_cast<std::uint64_t>(b.v[0]) << 32) | b.v[1];
        std::uint64_t u2bits = (static_cast<std::uint64_t>(b.v[2]) << 32) | b.v[3];
        double u1 = (static_cast<double>(u1bits >> 11) + 0.5) * 0x1.0p-53;  // (0,1)
        double u2 = (static_cast<double>(u2bits >> 11) + 0.5) * 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * M_PI * u2;
        return (i % 2 == 0) ? r * std::cos(angle) : r * std::sin(angle);
    }

    // fill out[0..n) with consecutive draws starting at index `from`
    void fill(double* out, std::uint64_t n, std::uint64_t from = 0) const {
        std::uint64_t i = 0;
        if (from % 2 == 1 && i < n) out[i++] = at(from);
        for (; i + 1 < n; i += 2) {
            std::uint64_t idx = from + i;
            Philox4x32::Block b = Philox4x32::generate(seed_, idx / 2, stream_);
            std::uint64_t u1bits = (static_cast<std::uint64_t>(b.v[0]) << 32) | b.v[1];
            std::uint64_t u2bits = (static_cast<std::uint64_t>(b.v[2]) << 32) | b.v[3];
            double u1 = (static_cast<double>(u1bits >> 11) + 0.5) * 0x1.0p-53;
            double u2 = (static_cast<double>(u2bits >> 11) + 0.5) * 0x1.0p-53;
            double r = std::sqrt(-2.0 * std::log(u1));
            double angle = 2.0 * M_PI * u2;
            out[i] = r * std::cos(angle);
            out[i + 1] = r * std::sin(angle);
        }
        for (; i < n; ++i) out[i] = at(from + i);
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace tfrac::rng
