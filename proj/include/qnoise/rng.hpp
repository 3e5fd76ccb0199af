#pragma once

#include <array>
#include <cstdint>

namespace qnoise {

// Philox4x32-10 (Salmon et al. 2011). Counter-based: every draw is a pure
// function of (key, counter), so streams split without shared state.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;

    explicit Philox4x32(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    Block operator()(Block ctr) const {
        std::array<std::uint32_t, 2> k = key_;
        for (int round = 0; round < 10; ++round) {
            ctr = step(ctr, k);
            k[0] += 0x9E3779B9u;
            k[1] += 0xBB67AE85u;
        }
        return ctr;
    }

private:
    static Block step(const Block& c, const std::array<std::uint32_t, 2>& k) {
        std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
        std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
        auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }

    std::array<std::uint32_t, 2> key_;
};

// Standard normal number `index` of stream (path, tag) under `seed`.
double philox_normal(std::uint64_t seed, std::uint32_t tag, std::uint64_t path, std::uint64_t index);

}  // namespace qnoise
