#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fraclab/numeric.hpp"

namespace fraclab::mc {

// ---------------------------------------------------------------------------
// Deterministic seeding.
//
// All randomness in the library derives from one top-level seed. Sub-streams
// are obtained by hashing a component path string into the seed
// (split_seed), and chunk streams by mixing the chunk index (chunk_seed).
// Results are therefore reproducible bit-exactly for a fixed seed,
// independent of the number of worker threads.
// ---------------------------------------------------------------------------

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t split_seed(std::uint64_t seed, std::string_view path) {
    return splitmix64(seed ^ fnv1a64(path));
}

inline std::uint64_t chunk_seed(std::uint64_t stream_seed, std::int64_t chunk_index) {
    return splitmix64(stream_seed + kGolden * static_cast<std::uint64_t>(chunk_index + 1));
}

// Random stream: mt19937_64 with explicit double/vector helpers so that the
// produced values are pinned by this code, not by library distributions.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1]
    double u01_pos() { return 1.0 - u01(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = u01_pos();
        const double v = u01();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // uniform direction on the unit sphere S^{n-1}
    void unit_vector(std::span<double> out) {
        const std::size_t n = out.size();
        if (n == 2) {
            const double a = 6.283185307179586476925286766559 * u01();
            out[0] = std::cos(a);
            out[1] = std::sin(a);
            return;
        }
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                out[i] = normal();
                norm2 += out[i] * out[i];
            }
        } while (norm2 < 1e-300);
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < n; ++i) out[i] *= inv;
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// ---------------------------------------------------------------------------
// Monte Carlo configuration and estimates.
// ---------------------------------------------------------------------------

struct McConfig {
    std::int64_t n_pairs = 1'000'000; // outer sample count
    std::uint64_t seed = 0;
    double r_min_rel = 1e-6; // radial cutoff relative to the local scale
    std::int64_t chunk = 65'536; // reduction granularity
    int workers = 0; // 0 = automatic; the result does not depend on it

    void validate() const {
        if (n_pairs < 1) throw std::invalid_argument("McConfig: n_pairs must be >= 1");
        if (!(r_min_rel > 0.0 && r_min_rel < 1.0))
            throw std::invalid_argument("McConfig: r_min_rel must be in (0,1)");
        if (chunk < 1) throw std::invalid_argument("McConfig: chunk must be >= 1");
    }
};

struct EstimateFlags {
    bool divergent = false;
    double clamped_fraction = 0.0; // fraction of pairs with delta clamped at the r_min scale
    double core_bound = 0.0; // analytic bound on the excised radial core (0 when unknown)
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_effective = 0;
    EstimateFlags flags;
};

// ---------------------------------------------------------------------------
// Chunked deterministic parallel reduction.
//
// The sample index range [0, n) is split into chunks of size cfg.chunk. Each
// chunk is processed by exactly one worker with its own RNG stream derived
// from (stream_seed, chunk index), and partial sums are combined on the
// calling thread in chunk order. The reduction is bit-identical for any
// worker count.
// ---------------------------------------------------------------------------

struct ChunkAccum {
    double sum = 0.0;
    double sumsq = 0.0;
    std::int64_t n = 0;
    std::int64_t clamped = 0;
    double aux = 0.0; // extra accumulator (e.g. core-bound terms)

    void add(double w) {
        sum += w;
        sumsq += w * w;
        ++n;
    }
};

struct MeanStats {
    double mean = 0.0;
    double se = 0.0; // standard error of the mean
    std::int64_t n = 0;
    bool divergent = false;
    double clamped_fraction = 0.0;
    double aux_mean = 0.0;
};

namespace detail {
void run_chunks_impl(std::int64_t n, std::int64_t chunk, int workers, std::uint64_t stream_seed,
                     const std::function<void(std::int64_t, std::int64_t, RngStream&, ChunkAccum&)>& body,
                     std::vector<ChunkAccum>& out);
} // namespace detail

// body(chunk_index, count, rng, accum) must accumulate exactly `count` samples.
MeanStats chunked_mean(std::int64_t n, const McConfig& cfg, std::uint64_t stream_seed,
                       const std::function<void(std::int64_t, std::int64_t, RngStream&, ChunkAccum&)>& body);

} // namespace fraclab::mc
