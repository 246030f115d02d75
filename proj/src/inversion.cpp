#include "expou/inversion.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "expou/stats.hpp"

namespace expou {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_grid(const FrequencyGrid& grid) {
    if (!(grid.phi_max > 0))
        throw std::invalid_argument("FrequencyGrid: phi_max must be positive");
    std::size_t n = grid.n_points;
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument(
            "FrequencyGrid: n_points must be a power of two >= 2");
}

std::vector<std::complex<double>> sample_cf(const CharFn& cf,
                                            const FrequencyGrid& grid) {
    const std::size_t n = grid.n_points;
    const double dphi = grid.dphi();
    std::vector<std::complex<double>> f(n);
    for (std::size_t k = 0; k < n; ++k)
        f[k] = cf(static_cast<double>(k) * dphi);
    f[0] *= 0.5;  // trapezoid half weight at the origin
    return f;
}

}  // namespace

double FrequencyGrid::nyquist_x() const { return kPi / dphi(); }

DensityGrid invert_fft(const CharFn& cf, const FrequencyGrid& grid) {
    validate_grid(grid);
    const std::size_t n = grid.n_points;
    const double dphi = grid.dphi();
    const double dx = 2 * kPi / (static_cast<double>(n) * dphi);

    auto f = sample_cf(cf, grid);

    std::vector<std::complex<double>> out(n);
    fftw_plan plan = fftw_plan_dft_1d(
        static_cast<int>(n), reinterpret_cast<fftw_complex*>(f.data()),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
        FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    // Lattice point j carries x = j dx for j <= n/2 and x = (j - n) dx
    // beyond; emit in ascending x order.
    DensityGrid g;
    g.dx = dx;
    g.x.resize(n);
    g.density.resize(n);
    const double scale = dphi / kPi;
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t src = (j + half + 1) % n;  // ascending: j=0 -> x=-(n/2-1)dx
        double xj = (static_cast<double>(src) -
                     (src > half ? static_cast<double>(n) : 0.0)) *
                    dx;
        g.x[j] = xj;
        g.density[j] = scale * out[src].real();
    }
    g.mass = dx * pairwise_sum(g.density);
    return g;
}

DensityGrid invert_trapezoid(const CharFn& cf, const FrequencyGrid& grid,
                             const std::vector<double>& x_values) {
    validate_grid(grid);
    if (x_values.empty())
        throw std::invalid_argument("invert_trapezoid: no abscissae given");
    const double nyq = grid.nyquist_x();
    for (double x : x_values)
        if (std::abs(x) > nyq)
            throw std::invalid_argument(
                "invert_trapezoid: |x| exceeds the Nyquist range pi/dphi; "
                "enlarge n_points or reduce phi_max");

    const std::size_t n = grid.n_points;
    const double dphi = grid.dphi();
    auto f = sample_cf(cf, grid);

    DensityGrid g;
    g.x = x_values;
    g.density.resize(x_values.size());
    std::vector<double> terms(n);
    for (std::size_t m = 0; m < x_values.size(); ++m) {
        const double x = x_values[m];
        for (std::size_t k = 0; k < n; ++k) {
            double a = static_cast<double>(k) * dphi * x;
            terms[k] = f[k].real() * std::cos(a) + f[k].imag() * std::sin(a);
        }
        g.density[m] = dphi / kPi * pairwise_sum(terms);
    }
    return g;
}

DensityGrid invert_half_axis(const CharFn& cf, const FrequencyGrid& grid,
                             const std::vector<double>& x_values) {
    if (x_values.empty()) return invert_fft(cf, grid);
    return invert_trapezoid(cf, grid, x_values);
}

DensityGrid tail_trim(const DensityGrid& g, double threshold) {
    if (g.density.empty() || !(threshold >= 0))
        throw std::invalid_argument("tail_trim: bad input");
    double peak = *std::max_element(g.density.begin(), g.density.end());
    double cut = threshold * peak;
    std::size_t lo = 0, hi = g.density.size();
    while (lo < hi && g.density[lo] < cut) ++lo;
    while (hi > lo && g.density[hi - 1] < cut) --hi;
    DensityGrid out;
    out.dx = g.dx;
    out.mass = g.mass;
    out.x.assign(g.x.begin() + lo, g.x.begin() + hi);
    out.density.assign(g.density.begin() + lo, g.density.begin() + hi);
    return out;
}

}  // namespace expou
