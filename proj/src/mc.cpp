#include "fraclab/mc.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace fraclab::mc {

namespace detail {

void run_chunks_impl(std::int64_t n, std::int64_t chunk, int workers, std::uint64_t stream_seed,
                     const std::function<void(std::int64_t, std::int64_t, RngStream&, ChunkAccum&)>& body,
                     std::vector<ChunkAccum>& out) {
    const std::int64_t n_chunks = (n + chunk - 1) / chunk;
    out.assign(static_cast<std::size_t>(n_chunks), ChunkAccum{});

    int nw = workers;
    if (nw <= 0) {
        nw = static_cast<int>(std::thread::hardware_concurrency());
        if (nw <= 0) nw = 1;
    }
    nw = static_cast<int>(std::min<std::int64_t>(nw, n_chunks));

    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;

    auto worker = [&]() {
        try {
            for (;;) {
                const std::int64_t ci = next.fetch_add(1);
                if (ci >= n_chunks) break;
                const std::int64_t count = std::min<std::int64_t>(chunk, n - ci * chunk);
                RngStream rng(chunk_seed(stream_seed, ci));
                body(ci, count, rng, out[static_cast<std::size_t>(ci)]);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
        }
    };

    if (nw == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nw));
        for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

} // namespace detail

MeanStats chunked_mean(std::int64_t n, const McConfig& cfg, std::uint64_t stream_seed,
                       const std::function<void(std::int64_t, std::int64_t, RngStream&, ChunkAccum&)>& body) {
    cfg.validate();
    std::vector<ChunkAccum> acc;
    detail::run_chunks_impl(n, cfg.chunk, cfg.workers, stream_seed, body, acc);

    // Fixed-order reduction; also record the cumulative mean at 8 evenly
    // spaced checkpoints for the divergence detector.
    const std::size_t n_chunks = acc.size();
    double sum = 0.0, sumsq = 0.0, aux = 0.0;
    std::int64_t count = 0, clamped = 0;
    std::vector<double> checkpoints;
    checkpoints.reserve(8);
    std::size_t next_cp = 0;
    for (std::size_t i = 0; i < n_chunks; ++i) {
        sum += acc[i].sum;
        sumsq += acc[i].sumsq;
        aux += acc[i].aux;
        count += acc[i].n;
        clamped += acc[i].clamped;
        while (next_cp < 8 && i + 1 >= (next_cp + 1) * n_chunks / 8) {
            checkpoints.push_back(count > 0 ? sum / static_cast<double>(count) : 0.0);
            ++next_cp;
        }
    }

    MeanStats stats;
    stats.n = count;
    if (count > 0) {
        stats.mean = sum / static_cast<double>(count);
        if (count > 1) {
            const double var =
                std::max(0.0, (sumsq - sum * stats.mean) / static_cast<double>(count - 1));
            stats.se = std::sqrt(var / static_cast<double>(count));
        }
        stats.clamped_fraction = static_cast<double>(clamped) / static_cast<double>(count);
        stats.aux_mean = aux / static_cast<double>(count);
    }

    // Crude deterministic detector: the running mean across 8 successive
    // equal-size blocks increases monotonically by more than a factor 1.5.
    if (checkpoints.size() == 8 && checkpoints.front() > 0.0) {
        bool monotone = true;
        for (std::size_t i = 1; i < 8; ++i)
            if (!(checkpoints[i] > checkpoints[i - 1])) { monotone = false; break; }
        if (monotone && checkpoints.back() > 1.5 * checkpoints.front()) stats.divergent = true;
    }
    return stats;
}

} // namespace fraclab::mc
