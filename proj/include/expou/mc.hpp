#pragma once

#include "expou/model.hpp"

#include <cstdint>
#include <vector>

namespace expou {

enum class Dynamics { Exponential, Linear };

// Initial hidden-state convention. Fixed starts every path at Y(t0) = y0
// (Z(t0) = y0 - gamma + 1 for the linear dynamics). Stationary draws the
// start per path from the stationary law N(gamma, beta) (N(1, beta) for Z),
// which the calibration objective uses to match stationary market data.
enum class InitialState { Fixed, Stationary };

struct SimConfig {
    double dt = 1e-3;
    std::uint64_t n_steps = 1000;
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
    Dynamics dynamics = Dynamics::Exponential;
    bool record_hidden = false;
    InitialState initial = InitialState::Fixed;
    int n_threads = 0;  // 0: EXPOU_THREADS env var, else hardware count
};

// Checkpointed ensemble of centered log-returns. Row c holds all paths at
// checkpoint_times[c]; the hidden process (Y or Z) is recorded on request.
struct PathEnsemble {
    std::vector<double> checkpoint_times;
    std::vector<double> x;       // checkpoints x n_paths, row-major
    std::vector<double> hidden;  // same layout when recorded, else empty
    std::size_t n_paths = 0;
    ModelParams params{};
    SimConfig cfg{};

    std::size_t n_checkpoints() const { return checkpoint_times.size(); }
    const double* x_at(std::size_t c) const { return x.data() + c * n_paths; }
    const double* hidden_at(std::size_t c) const {
        return hidden.data() + c * n_paths;
    }
    // Terminal cross-section (last checkpoint).
    const double* x_final() const { return x_at(n_checkpoints() - 1); }
};

// Euler-Maruyama simulation from t0 = 0. Checkpoints must lie on the step
// grid i*dt (i in [1, n_steps]); an empty list means the terminal time only.
// Results depend on (params, cfg, checkpoints) alone, never on thread count
// or scheduling.
PathEnsemble simulate(const ModelParams& params, const SimConfig& cfg,
                      const std::vector<double>& checkpoints = {});

int resolve_thread_count(int requested);

}  // namespace expou
