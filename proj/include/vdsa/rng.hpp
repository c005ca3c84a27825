#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace vdsa {

// Named sub-streams derived from the run seed. Keeping the streams separate
// means e.g. MAC backoff draws cannot perturb the shadowing field realization.
enum class RngStream : std::uint64_t {
    WorldPlacement = 1,
    Shadowing = 2,
    Mac = 3,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_u64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(s);
}

/// Deterministic seed for (run seed, stream, entity).
inline std::uint64_t derive_seed(std::uint64_t seed, RngStream stream, std::uint64_t entity = 0) {
    return hash_u64(hash_u64(seed, static_cast<std::uint64_t>(stream)), entity);
}

inline std::mt19937_64 make_engine(std::uint64_t seed, RngStream stream, std::uint64_t entity = 0) {
    return std::mt19937_64(derive_seed(seed, stream, entity));
}

/// Counter-based uniform in [0,1): a pure function of the key, so draws can be
/// addressed by (entity, channel, segment, epoch) without any shared state.
inline double counter_uniform(std::uint64_t key) {
    std::uint64_t s = key;
    return static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
}

/// Counter-based standard normal via Box-Muller on two derived uniforms.
inline double counter_gaussian(std::uint64_t key) {
    std::uint64_t s = key;
    const std::uint64_t a = splitmix64(s);
    const std::uint64_t b = splitmix64(s);
    double u1 = (static_cast<double>(a >> 11) + 0.5) * 0x1.0p-53;
    double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace vdsa
