#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace expou {

using CharFn = std::function<std::complex<double>(double)>;

// Uniform half-axis frequency grid phi_k = k * phi_max / n_points for
// k = 0 .. n_points - 1. n_points must be a power of two.
struct FrequencyGrid {
    double phi_max = 1000.0;
    std::size_t n_points = 1u << 18;

    double dphi() const { return phi_max / static_cast<double>(n_points); }
    // Largest |x| the grid can resolve without aliasing.
    double nyquist_x() const;
};

struct DensityGrid {
    std::vector<double> x;        // ascending
    std::vector<double> density;
    double dx = 0;    // lattice spacing (FFT route), 0 otherwise
    double mass = 0;  // sum(density) * dx on the lattice, 0 otherwise
};

// Half-axis Fourier inversion p(x) = (1/pi) Re int_0^inf e^{-i phi x} f(phi)
// dphi by trapezoid quadrature with a half weight at phi = 0. The FFT route
// evaluates the whole natural x lattice at once; the direct route evaluates
// explicitly requested abscissae by plain weighted sums. The two must agree
// to roundoff on shared points and are cross-checked in the tests.
DensityGrid invert_fft(const CharFn& cf, const FrequencyGrid& grid);

DensityGrid invert_trapezoid(const CharFn& cf, const FrequencyGrid& grid,
                             const std::vector<double>& x_values);

// Dispatches: empty x_values means the full FFT lattice, otherwise the
// direct route at the given points (each must lie within the Nyquist range).
DensityGrid invert_half_axis(const CharFn& cf, const FrequencyGrid& grid,
                             const std::vector<double>& x_values = {});

// Drops leading/trailing grid points whose density falls below
// threshold * max(density).
DensityGrid tail_trim(const DensityGrid& g, double threshold);

}  // namespace expou
