#include "expou/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expou {

namespace {

constexpr double kGold = 0.3819660112501051;  // 2 - golden ratio

struct Bracket {
    double a, b, c;  // f(b) < f(a), f(b) < f(c)
    double fb;
};

// Expands downhill from 0 with the given step until the minimum is bracketed.
Bracket bracket_min(const std::function<double(double)>& f, double step) {
    double a = 0, b = step;
    double fa = f(a), fb = f(b);
    if (fb > fa) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = b + 1.618033988749895 * (b - a);
    double fc = f(c);
    int guard = 0;
    while (fc < fb) {
        a = b;
        fa = fb;
        b = c;
        fb = fc;
        c = b + 1.618033988749895 * (b - a);
        fc = f(c);
        if (++guard > 100) break;  // monotone direction: give up gracefully
    }
    if (a > c) std::swap(a, c);
    return {a, std::clamp(b, a, c), c, fb};
}

}  // namespace

BrentResult brent_min(const std::function<double(double)>& f, double a,
                      double b, double tol, int max_iter) {
    if (!(a < b)) throw std::invalid_argument("brent_min: need a < b");
    double x = a + kGold * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0, e = 0;

    int it = 0;
    for (; it < max_iter; ++it) {
        double m = 0.5 * (a + b);
        double tol1 = tol + 1e-12 * std::abs(x);
        if (std::abs(x - m) <= 2 * tol1 - 0.5 * (b - a)) break;

        bool parabolic = false;
        if (std::abs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2 * (q - r);
            if (q > 0) p = -p;
            q = std::abs(q);
            double e_old = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                double u = x + d;
                if (u - a < 2 * tol1 || b - u < 2 * tol1)
                    d = (m > x) ? tol1 : -tol1;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = kGold * e;
        }
        double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0) ? tol1 : -tol1);
        double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx, it};
}

PowellResult powell_min(const std::function<double(std::vector<double>)>& f,
                        std::vector<double> x0, std::vector<double> step0,
                        double ftol, int max_sweeps, double line_tol,
                        double fatol) {
    const std::size_t n = x0.size();
    if (n == 0 || step0.size() != n)
        throw std::invalid_argument("powell_min: dimension mismatch");

    PowellResult res;
    res.x = std::move(x0);
    int evals = 0;
    auto eval = [&](const std::vector<double>& p) {
        ++evals;
        return f(p);
    };
    res.fx = eval(res.x);

    std::vector<std::vector<double>> dirs(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) dirs[i][i] = step0[i];

    auto line_min = [&](const std::vector<double>& dir) {
        auto g = [&](double t) {
            std::vector<double> p = res.x;
            for (std::size_t i = 0; i < n; ++i) p[i] += t * dir[i];
            return eval(p);
        };
        Bracket br = bracket_min(g, 1.0);
        double span = br.c - br.a;
        BrentResult lr =
            span > 0 ? brent_min(g, br.a, br.c, line_tol, 60)
                     : BrentResult{br.b, br.fb, 0};
        if (lr.fx < res.fx) {
            for (std::size_t i = 0; i < n; ++i) res.x[i] += lr.x * dir[i];
            res.fx = lr.fx;
        }
        return lr.x;
    };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double f_start = res.fx;
        std::vector<double> x_start = res.x;
        double biggest_drop = 0;
        std::size_t biggest_i = 0;

        for (std::size_t i = 0; i < n; ++i) {
            double before = res.fx;
            line_min(dirs[i]);
            if (before - res.fx > biggest_drop) {
                biggest_drop = before - res.fx;
                biggest_i = i;
            }
        }
        res.sweeps = sweep + 1;

        if (2 * (f_start - res.fx) <=
                ftol * (std::abs(f_start) + std::abs(res.fx)) + 1e-300 ||
            f_start - res.fx <= fatol) {
            res.converged = true;
            break;
        }

        // Powell direction replacement: try the sweep displacement as a new
        // direction if the extrapolated point keeps descending.
        std::vector<double> disp(n);
        std::vector<double> extrap(n);
        for (std::size_t i = 0; i < n; ++i) {
            disp[i] = res.x[i] - x_start[i];
            extrap[i] = res.x[i] + disp[i];
        }
        double f_extrap = eval(extrap);
        if (f_extrap < f_start) {
            double t = 2 * (f_start - 2 * res.fx + f_extrap) *
                           (f_start - res.fx - biggest_drop) *
                           (f_start - res.fx - biggest_drop) -
                       biggest_drop * (f_start - f_extrap) *
                           (f_start - f_extrap);
            if (t < 0) {
                line_min(disp);
                dirs[biggest_i] = dirs[n - 1];
                dirs[n - 1] = disp;
            }
        }
    }
    res.n_evals = evals;
    return res;
}

}  // namespace expou
