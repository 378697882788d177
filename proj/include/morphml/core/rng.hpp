#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace morphml {

namespace detail {

// SplitMix64 finalizer. Bijective 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace detail

// Counter-based generator. A stream is identified by (seed, name); draws are
// pure functions of (key, counter), so independently named streams can run in
// parallel and still reproduce bit-identically.
class Rng {
public:
    Rng(std::uint64_t seed, std::string_view stream)
        : key_(detail::mix64(seed ^ detail::fnv1a(stream))) {}

    // Derive a child stream, e.g. one per tree of a forest.
    Rng split(std::string_view name) const {
        Rng r = *this;
        r.key_ = detail::mix64(key_ ^ detail::fnv1a(name));
        r.counter_ = 0;
        return r;
    }
    Rng split(std::uint64_t index) const {
        Rng r = *this;
        r.key_ = detail::mix64(key_ ^ detail::mix64(index));
        r.counter_ = 0;
        return r;
    }

    std::uint64_t next_u64() { return detail::mix64(key_ ^ ++counter_); }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // Standard normal via Box-Muller (no cached spare, keeps draws counter-pure).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace morphml
