#include "expou/mc.hpp"

#include "expou/kernels.hpp"
#include "expou/rng.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace expou {

namespace {

// Paths are processed in fixed-size blocks claimed off an atomic counter.
// Block boundaries depend only on n_paths, and every write lands in the
// block's own slots, so the ensemble is identical for any worker count.
constexpr std::size_t kBlock = 4096;

std::vector<std::uint64_t> checkpoint_steps(const SimConfig& cfg,
                                            const std::vector<double>& times) {
    std::vector<std::uint64_t> steps;
    if (times.empty()) {
        steps.push_back(cfg.n_steps);
        return steps;
    }
    steps.reserve(times.size());
    double prev = 0.0;
    for (double t : times) {
        double ratio = t / cfg.dt;
        double rounded = std::nearbyint(ratio);
        if (std::abs(ratio - rounded) > 1e-6 || rounded < 1.0)
            throw std::invalid_argument(
                "checkpoint off the step grid: t = " + std::to_string(t));
        if (t <= prev)
            throw std::invalid_argument("checkpoints must be strictly increasing");
        prev = t;
        auto s = static_cast<std::uint64_t>(rounded);
        if (s > cfg.n_steps)
            throw std::invalid_argument("checkpoint beyond simulated horizon");
        steps.push_back(s);
    }
    return steps;
}

}  // namespace

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* e = std::getenv("EXPOU_THREADS")) {
        int n = std::atoi(e);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

PathEnsemble simulate(const ModelParams& p, const SimConfig& cfg,
                      const std::vector<double>& checkpoints) {
    if (!(cfg.dt > 0) || !std::isfinite(cfg.dt))
        throw std::invalid_argument("dt must be positive and finite");
    if (cfg.n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    if (cfg.n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");

    const std::vector<std::uint64_t> cp_steps = checkpoint_steps(cfg, checkpoints);
    const std::size_t n_cp = cp_steps.size();
    const std::size_t n = cfg.n_paths;

    PathEnsemble ens;
    ens.n_paths = n;
    ens.params = p;
    ens.cfg = cfg;
    ens.checkpoint_times.resize(n_cp);
    for (std::size_t c = 0; c < n_cp; ++c)
        ens.checkpoint_times[c] = static_cast<double>(cp_steps[c]) * cfg.dt;
    ens.x.assign(n_cp * n, 0.0);
    if (cfg.record_hidden) ens.hidden.assign(n_cp * n, 0.0);

    const auto& ops = kern::kernel_ops();
    const double sq_beta = std::sqrt(p.beta);
    const bool linear = cfg.dynamics == Dynamics::Linear;

    kern::ExpCtx ectx{p.m, cfg.dt, std::sqrt(cfg.dt), p.alpha, p.gamma,
                      p.k, p.rho, std::sqrt(1.0 - p.rho * p.rho)};
    kern::LinCtx lctx{p.mbar, cfg.dt, std::sqrt(cfg.dt), p.alpha,
                      p.k, p.rho, std::sqrt(1.0 - p.rho * p.rho)};

    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    std::atomic<std::size_t> next_block{0};

    auto worker = [&]() {
        std::vector<double> bx(kBlock), bh(kBlock), eps(kBlock);
        for (;;) {
            const std::size_t b = next_block.fetch_add(1);
            if (b >= n_blocks) break;
            const std::size_t lo = b * kBlock;
            const std::size_t len = std::min(kBlock, n - lo);

            const double h0 = linear ? p.y0 - p.gamma + 1.0 : p.y0;
            for (std::size_t i = 0; i < len; ++i) {
                bx[i] = 0.0;
                bh[i] = h0;
            }
            if (cfg.initial == InitialState::Stationary && p.k > 0) {
                ops.init_normals(cfg.seed, lo, len, eps.data());
                const double center = linear ? 1.0 : p.gamma;
                for (std::size_t i = 0; i < len; ++i)
                    bh[i] = center + sq_beta * eps[i];
            }

            std::uint64_t done = 0;
            for (std::size_t c = 0; c < n_cp; ++c) {
                const std::uint64_t upto = cp_steps[c];
                if (upto > done) {
                    if (linear)
                        ops.em_lin(lctx, cfg.seed, lo, done, upto - done, len,
                                   bx.data(), bh.data());
                    else
                        ops.em_exp(ectx, cfg.seed, lo, done, upto - done, len,
                                   bx.data(), bh.data());
                    done = upto;
                }
                double* xr = ens.x.data() + c * n + lo;
                for (std::size_t i = 0; i < len; ++i) xr[i] = bx[i];
                if (cfg.record_hidden) {
                    double* hr = ens.hidden.data() + c * n + lo;
                    for (std::size_t i = 0; i < len; ++i) hr[i] = bh[i];
                }
            }
        }
    };

    const int n_threads = resolve_thread_count(cfg.n_threads);
    if (n_threads <= 1 || n_blocks <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int use = static_cast<int>(
            std::min<std::size_t>(n_blocks, static_cast<std::size_t>(n_threads)));
        pool.reserve(use);
        for (int t = 0; t < use; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (double v : ens.x)
        if (!std::isfinite(v))
            throw std::runtime_error("non-finite path value; reduce dt");
    return ens;
}

}  // namespace expou
