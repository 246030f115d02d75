#include "expou/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "expou/mc.hpp"
#include "expou/optim.hpp"
#include "expou/stats.hpp"

namespace expou {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kMinSeries = 500;
constexpr std::size_t kNonOverlapMin = 200;
constexpr std::size_t kMinSample = 100;

// Days since the civil epoch 1970-01-01 (proleptic Gregorian).
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    long era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

// A date becomes a time coordinate in years: ISO dates via the civil-day
// count, plain numbers as given.
double date_to_years(const std::string& s, bool& is_iso) {
    int y, m, d;
    char c1, c2;
    std::istringstream iso(s);
    if (iso >> y >> c1 >> m >> c2 >> d && c1 == '-' && c2 == '-') {
        is_iso = true;
        return static_cast<double>(days_from_civil(y, m, d)) / 365.25;
    }
    is_iso = false;
    return std::stod(s);
}

std::vector<double> log_returns_demeaned(const PriceSeries& s) {
    std::vector<double> d(s.n() - 1);
    for (std::size_t i = 0; i + 1 < s.n(); ++i)
        d[i] = std::log(s.closes[i + 1] / s.closes[i]);
    double mean = pairwise_sum(d) / static_cast<double>(d.size());
    for (double& v : d) v -= mean;
    return d;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    double pos = q * (sorted.size() - 1);
    std::size_t i0 = static_cast<std::size_t>(pos);
    std::size_t i1 = std::min(i0 + 1, sorted.size() - 1);
    double f = pos - static_cast<double>(i0);
    return sorted[i0] * (1 - f) + sorted[i1] * f;
}

double lognormal_pdf(double x, double log_sigma0, double s) {
    double z = (std::log(x) - log_sigma0) / s;
    return std::exp(-0.5 * z * z) / (x * s * std::sqrt(2 * kPi));
}

void validate_series(const PriceSeries& s, const char* who) {
    if (s.n() < kMinSeries)
        throw std::invalid_argument(std::string(who) +
                                    ": need at least 500 closes");
    if (!(s.dt > 0))
        throw std::invalid_argument(std::string(who) + ": dt must be positive");
    for (double c : s.closes)
        if (!(c > 0) || !std::isfinite(c))
            throw std::invalid_argument(std::string(who) +
                                        ": closes must be positive and finite");
}

}  // namespace

PriceSeries load_price_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_price_csv: cannot open " + path);

    PriceSeries s;
    std::string line;
    bool first_data = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("load_price_csv: missing comma in: " +
                                     line);
        std::string date = line.substr(0, comma);
        std::string val = line.substr(comma + 1);
        if (!val.empty() && val.back() == '\r') val.pop_back();
        try {
            double close = std::stod(val);
            s.dates.push_back(date);
            s.closes.push_back(close);
        } catch (const std::exception&) {
            if (first_data) continue;  // header row
            throw std::runtime_error("load_price_csv: bad close in: " + line);
        }
        first_data = false;
    }
    if (s.n() < 2)
        throw std::runtime_error("load_price_csv: fewer than 2 rows");

    bool iso_a = false, iso_b = false;
    double t0 = date_to_years(s.dates.front(), iso_a);
    double t1 = date_to_years(s.dates.back(), iso_b);
    if (iso_a != iso_b)
        throw std::runtime_error("load_price_csv: mixed date formats");
    s.dt = (t1 - t0) / static_cast<double>(s.n() - 1);
    if (!(s.dt > 0))
        throw std::runtime_error("load_price_csv: dates must increase");
    return s;
}

PriceSeries series_from_closes(std::vector<double> closes, double dt) {
    PriceSeries s;
    s.closes = std::move(closes);
    s.dt = dt;
    s.dates.resize(s.closes.size());
    for (std::size_t i = 0; i < s.dates.size(); ++i)
        s.dates[i] = std::to_string(static_cast<double>(i) * dt);
    return s;
}

MuEstimate estimate_mu(const PriceSeries& series) {
    validate_series(series, "estimate_mu");
    std::vector<double> r(series.n() - 1);
    for (std::size_t i = 0; i + 1 < series.n(); ++i)
        r[i] = series.closes[i + 1] / series.closes[i] - 1.0;
    MomentSummary mom = summarize_moments(r);
    double n = static_cast<double>(r.size());
    MuEstimate est;
    est.mu = mom.mu / series.dt;
    est.ci_half_width = 1.96 * std::sqrt(mom.m2 / (n - 1)) / series.dt;
    return est;
}

std::vector<double> extract_vol_proxy(const PriceSeries& series, int window) {
    validate_series(series, "extract_vol_proxy");
    std::size_t n_ret = series.n() - 1;
    if (window < 5 || window % 2 == 0)
        throw std::invalid_argument(
            "extract_vol_proxy: window must be odd and >= 5");
    if (static_cast<std::size_t>(window) > n_ret)
        throw std::invalid_argument(
            "extract_vol_proxy: window longer than the return series");

    std::vector<double> d = log_returns_demeaned(series);
    std::vector<double> prefix(n_ret + 1, 0.0);
    for (std::size_t i = 0; i < n_ret; ++i)
        prefix[i + 1] = prefix[i] + d[i] * d[i];

    std::size_t w = static_cast<std::size_t>(window);
    std::vector<double> proxy(n_ret - w + 1);
    for (std::size_t j = 0; j < proxy.size(); ++j)
        proxy[j] = std::sqrt((prefix[j + w] - prefix[j]) /
                             static_cast<double>(w));
    return proxy;
}

LognormalFit fit_lognormal(const std::vector<double>& proxy,
                           std::optional<FitRange> fit_range) {
    if (proxy.size() < kMinSample)
        throw std::invalid_argument("fit_lognormal: proxy too short");
    for (double v : proxy)
        if (!(v > 0))
            throw std::invalid_argument(
                "fit_lognormal: proxy values must be positive");

    std::vector<double> sorted(proxy);
    std::sort(sorted.begin(), sorted.end());
    FitRange range = fit_range.value_or(
        FitRange{quantile_sorted(sorted, 0.05), quantile_sorted(sorted, 0.95)});
    if (!(range.lo > 0 && range.hi > range.lo))
        throw std::invalid_argument("fit_lognormal: bad fit range");

    Histogram hist = build_histogram(proxy);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < hist.densities.size(); ++i) {
        double c = 0.5 * (hist.bin_edges[i] + hist.bin_edges[i + 1]);
        if (c >= range.lo && c <= range.hi && hist.counts[i] > 0) {
            xs.push_back(c);
            ys.push_back(hist.densities[i]);
        }
    }
    if (xs.size() < 5)
        throw std::invalid_argument(
            "fit_lognormal: fewer than 5 histogram bins in the fit range");

    // Start from the log-moments of the in-range proxy values.
    std::vector<double> lv;
    for (double v : proxy)
        if (v >= range.lo && v <= range.hi) lv.push_back(std::log(v));
    MomentSummary lm = summarize_moments(lv);
    double s_guess = std::sqrt(std::max(lm.m2, 1e-8));

    auto sse_of = [&](double ls0, double s) {
        double acc = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double r = lognormal_pdf(xs[i], ls0, s) - ys[i];
            acc += r * r;
        }
        return acc;
    };
    auto objective = [&](std::vector<double> p) {
        return sse_of(p[0], std::exp(p[1]));
    };
    PowellResult opt =
        powell_min(objective, {lm.mu, std::log(s_guess)},
                   {0.1, 0.1}, 1e-14, 120);

    LognormalFit fit;
    fit.log_sigma0 = opt.x[0];
    fit.s = std::exp(opt.x[1]);
    fit.sse = opt.fx;
    fit.n_bins_used = static_cast<int>(xs.size());
    fit.range = range;

    // Gauss-Newton covariance of the least-squares problem for rough
    // parameter errors.
    double j11 = 0, j12 = 0, j22 = 0;
    double eps0 = 1e-6, eps1 = 1e-6;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f0 = lognormal_pdf(xs[i], fit.log_sigma0, fit.s);
        double d0 =
            (lognormal_pdf(xs[i], fit.log_sigma0 + eps0, fit.s) - f0) / eps0;
        double d1 =
            (lognormal_pdf(xs[i], fit.log_sigma0, fit.s + eps1) - f0) / eps1;
        j11 += d0 * d0;
        j12 += d0 * d1;
        j22 += d1 * d1;
    }
    double dof = std::max<double>(1.0, static_cast<double>(xs.size()) - 2);
    double sigma2 = fit.sse / dof;
    double det = j11 * j22 - j12 * j12;
    if (det > 0) {
        fit.log_sigma0_se = std::sqrt(sigma2 * j22 / det);
        fit.s_se = std::sqrt(sigma2 * j11 / det);
    }
    return fit;
}

DataCumulants data_cumulant_curves(const PriceSeries& series,
                                   int max_horizon) {
    validate_series(series, "data_cumulant_curves");
    if (max_horizon < 1)
        throw std::invalid_argument("data_cumulant_curves: max_horizon < 1");

    std::vector<double> d = log_returns_demeaned(series);
    std::size_t n_ret = d.size();
    std::vector<double> prefix(n_ret + 1, 0.0);
    for (std::size_t i = 0; i < n_ret; ++i) prefix[i + 1] = prefix[i] + d[i];

    DataCumulants out;
    for (int i = 1; i <= max_horizon; ++i) {
        std::size_t ii = static_cast<std::size_t>(i);
        if (ii >= n_ret) break;
        std::size_t n_non = n_ret / ii;
        bool overlap = n_non < kNonOverlapMin;

        std::vector<double> x;
        if (!overlap) {
            x.resize(n_non);
            for (std::size_t j = 0; j < n_non; ++j)
                x[j] = prefix[(j + 1) * ii] - prefix[j * ii];
        } else {
            x.resize(n_ret - ii + 1);
            for (std::size_t j = 0; j < x.size(); ++j)
                x[j] = prefix[j + ii] - prefix[j];
        }
        if (x.size() < kMinSample) continue;

        CumulantSet c = estimate_cumulants_delta(x, 1.0);
        // Overlapping i-step returns share increments; the iid error bars
        // are too small by roughly sqrt(2 i / 3).
        double infl = overlap ? std::sqrt(2.0 * i / 3.0) : 1.0;
        out.horizons.push_back(i);
        out.skew.push_back(c.skew);
        out.skew_err.push_back(c.half_width.skew * infl);
        out.kurt.push_back(c.kurt);
        out.kurt_err.push_back(c.half_width.kurt * infl);
        out.overlapping.push_back(overlap ? 1 : 0);
    }
    if (out.horizons.empty())
        throw std::invalid_argument(
            "data_cumulant_curves: no usable horizons (series too short)");
    return out;
}

double chi2_objective(double alpha, double rho, const FixedInputs& fixed,
                      const DataCumulants& data, const ChiSqConfig& mc) {
    if (!(fixed.m_bar > 0 && fixed.beta > 0 && fixed.dt > 0))
        throw std::invalid_argument("chi2_objective: bad fixed inputs");
    if (data.horizons.empty())
        throw std::invalid_argument("chi2_objective: empty data curves");

    int substeps = mc.substeps > 0
                       ? mc.substeps
                       : std::max(1, static_cast<int>(
                                         std::ceil(alpha * fixed.dt / 0.01)));

    RawParams raw;
    raw.s0 = 1.0;
    raw.mu = 0.0;
    raw.m = fixed.m_bar;
    raw.y0 = 0.0;
    raw.alpha = alpha;
    raw.gamma = 0.0;
    raw.k = std::sqrt(2.0 * alpha * fixed.beta);
    raw.rho = rho;
    ModelParams params = validate(raw);

    int max_h = data.horizons.back();
    SimConfig cfg;
    cfg.dt = fixed.dt / substeps;
    cfg.n_steps = static_cast<std::uint64_t>(max_h) * substeps;
    cfg.n_paths = mc.n_paths;
    cfg.seed = mc.seed;
    cfg.dynamics = Dynamics::Exponential;
    cfg.initial = InitialState::Stationary;

    std::vector<double> checkpoints(data.horizons.size());
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        checkpoints[i] = static_cast<double>(data.horizons[i]) * fixed.dt;

    PathEnsemble ens = simulate(params, cfg, checkpoints);

    double chi2 = 0;
    for (std::size_t i = 0; i < data.horizons.size(); ++i) {
        CumulantSet c = estimate_cumulants_delta(
            std::span<const double>(ens.x_at(i), ens.n_paths), 1.0);
        double ds = c.skew - data.skew[i];
        double dk = c.kurt - data.kurt[i];
        double vs = c.half_width.skew * c.half_width.skew +
                    data.skew_err[i] * data.skew_err[i];
        double vk = c.half_width.kurt * c.half_width.kurt +
                    data.kurt_err[i] * data.kurt_err[i];
        chi2 += ds * ds / std::max(vs, 1e-300) + dk * dk / std::max(vk, 1e-300);
    }
    return chi2;
}

AlphaRhoResult optimize_alpha_rho(const FixedInputs& fixed,
                                  const DataCumulants& data,
                                  const ChiSqConfig& mc,
                                  const OptBounds& bounds,
                                  const OptStart& start) {
    if (!(bounds.alpha_lo > 0 && bounds.alpha_hi > bounds.alpha_lo &&
          bounds.rho_lo < bounds.rho_hi && bounds.rho_lo > -1 &&
          bounds.rho_hi < 1))
        throw std::invalid_argument("optimize_alpha_rho: bad bounds");

    // One substep count for the whole search keeps the common random numbers
    // aligned across evaluations; size it for the stiffest alpha in the box.
    ChiSqConfig mc_fixed = mc;
    if (mc_fixed.substeps <= 0)
        mc_fixed.substeps = std::max(
            1, static_cast<int>(std::ceil(bounds.alpha_hi * fixed.dt / 0.01)));

    const double ulo = std::log(bounds.alpha_lo);
    const double uhi = std::log(bounds.alpha_hi);
    const double vlo = std::atanh(bounds.rho_lo);
    const double vhi = std::atanh(bounds.rho_hi);

    auto objective = [&](std::vector<double> p) {
        double uc = std::clamp(p[0], ulo, uhi);
        double vc = std::clamp(p[1], vlo, vhi);
        double pen = 1e4 * ((p[0] - uc) * (p[0] - uc) +
                            (p[1] - vc) * (p[1] - vc));
        return chi2_objective(std::exp(uc), std::tanh(vc), fixed, data,
                              mc_fixed) +
               pen;
    };

    // The objective carries Monte Carlo noise of order unity, so stop on an
    // absolute per-sweep gain rather than a relative one.
    double u0 = std::clamp(std::log(start.alpha), ulo, uhi);
    double v0 = std::clamp(std::atanh(start.rho), vlo, vhi);
    PowellResult opt = powell_min(objective, {u0, v0}, {0.3, 0.2}, 1e-8, 12,
                                  0.02, 0.5);

    AlphaRhoResult res;
    res.alpha = std::exp(std::clamp(opt.x[0], ulo, uhi));
    res.rho = std::tanh(std::clamp(opt.x[1], vlo, vhi));
    res.chi2 = chi2_objective(res.alpha, res.rho, fixed, data, mc_fixed);
    res.n_evals = opt.n_evals + 1;
    res.converged = opt.converged;
    return res;
}

CalibrationResult calibrate(const PriceSeries& series,
                            const CalibrationConfig& cfg) {
    validate_series(series, "calibrate");

    MuEstimate mu = estimate_mu(series);
    std::vector<double> proxy = extract_vol_proxy(series, cfg.window);
    LognormalFit fit = fit_lognormal(proxy, cfg.fit_range);

    FixedInputs fixed;
    fixed.dt = series.dt;
    fixed.m_bar = std::exp(fit.log_sigma0) / std::sqrt(series.dt);
    fixed.beta = fit.s * fit.s;

    DataCumulants data = data_cumulant_curves(series, cfg.max_horizon);
    AlphaRhoResult opt =
        optimize_alpha_rho(fixed, data, cfg.mc, cfg.bounds, cfg.start);

    CalibrationResult res;
    res.mu = mu.mu;
    res.m_bar = fixed.m_bar;
    res.beta = fixed.beta;
    res.alpha = opt.alpha;
    res.rho = opt.rho;
    res.diagnostics.dt = series.dt;
    res.diagnostics.mu_ci = mu.ci_half_width;
    res.diagnostics.vol_fit = fit;
    res.diagnostics.chi2 = opt.chi2;
    res.diagnostics.n_horizons = static_cast<int>(data.horizons.size());
    res.diagnostics.n_evals = opt.n_evals;
    res.diagnostics.substeps =
        cfg.mc.substeps > 0
            ? cfg.mc.substeps
            : std::max(1, static_cast<int>(std::ceil(cfg.bounds.alpha_hi *
                                                     series.dt / 0.01)));
    res.diagnostics.converged = opt.converged;
    return res;
}

}  // namespace expou
