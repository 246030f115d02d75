#pragma once

#include <functional>
#include <vector>

namespace expou {

struct BrentResult {
    double x = 0, fx = 0;
    int iters = 0;
};

// Derivative-free 1-D minimization on [a, b] (golden section with parabolic
// steps). tol is an absolute x tolerance.
BrentResult brent_min(const std::function<double(double)>& f, double a,
                      double b, double tol = 1e-8, int max_iter = 200);

struct PowellResult {
    std::vector<double> x;
    double fx = 0;
    int n_evals = 0;
    int sweeps = 0;
    bool converged = false;
};

// Powell's direction-set method with Brent line searches. step0 sets the
// initial bracketing scale per coordinate. line_tol is the Brent x
// tolerance; fatol is an absolute per-sweep improvement floor, the stopping
// rule of choice when the objective carries Monte Carlo noise.
PowellResult powell_min(const std::function<double(std::vector<double>)>& f,
                        std::vector<double> x0, std::vector<double> step0,
                        double ftol = 1e-10, int max_sweeps = 60,
                        double line_tol = 1e-4, double fatol = 0);

}  // namespace expou
