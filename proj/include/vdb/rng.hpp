#pragma once

#include <cstdint>
#include <random>

namespace vdb {

// 64-bit mixer used for deriving independent sub-seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Sub-seed for stream `stream` of a master seed. Interleaved executions give
// each inner run its own stream so their samples are mutually independent.
inline std::uint64_t derive_subseed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream));
}

// Uniform double in [0, 1) from the engine's raw 64-bit output. Avoids
// std::uniform_real_distribution so the reward stream is reproducible
// independent of the standard library implementation.
class UnitUniform {
public:
    explicit UnitUniform(std::uint64_t seed) : engine_(seed) {}

    double next() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace vdb
