#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace tipping {

// SplitMix64 finalizer. Used for seed derivation only; the simulation stream
// itself is std::mt19937_64, whose output sequence is fixed by the standard.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// derive_run_seed(master, (c0, c1, ...)):
//   h = mix64(master ^ 0x74697070696e6721)      ("tipping!")
//   for each coordinate c: h = mix64(h ^ mix64(uint64(c) + 0x632be59bd9b4e019 * (k+1)))
//   return mix64(h ^ n_coordinates)
// All arithmetic is on unsigned 64-bit values, so the result does not depend
// on platform byte order.
constexpr std::uint64_t derive_run_seed(std::uint64_t master, std::span<const std::int64_t> coords) noexcept {
    std::uint64_t h = mix64(master ^ 0x74697070696e6721ULL);
    std::uint64_t k = 1;
    for (std::int64_t c : coords) {
        h = mix64(h ^ mix64(static_cast<std::uint64_t>(c) + 0x632be59bd9b4e019ULL * k));
        ++k;
    }
    return mix64(h ^ static_cast<std::uint64_t>(coords.size()));
}

inline std::uint64_t derive_run_seed(std::uint64_t master, std::initializer_list<std::int64_t> coords) noexcept {
    std::vector<std::int64_t> v(coords);
    return derive_run_seed(master, std::span<const std::int64_t>(v));
}

// One stream per run. Uniform reals use the top 53 bits of each 64-bit output,
// so the mapping from engine output to doubles is exact and portable.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : engine_(seed), seed_(seed) {}

    double uniform() {
        ++draws_;
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform index in [0, n). Lemire's multiply-shift with rejection.
    std::size_t index(std::size_t n) {
        ++draws_;
        const std::uint64_t range = n;
        std::uint64_t x = engine_();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * range;
        auto low = static_cast<std::uint64_t>(m);
        if (low < range) {
            const std::uint64_t threshold = (0 - range) % range;
            while (low < threshold) {
                x = engine_();
                ++draws_;
                m = static_cast<unsigned __int128>(x) * range;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::size_t>(m >> 64);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t draw_count() const noexcept { return draws_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::uint64_t draws_ = 0;
};

}  // namespace tipping
