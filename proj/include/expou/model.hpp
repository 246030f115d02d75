#pragma once

#include <stdexcept>
#include <string>

namespace expou {

// Raw parameter record as read from a params file; validate() turns it into
// ModelParams with the derived quantities populated.
struct RawParams {
    double s0 = 100.0;  // initial price
    double mu = 0.0;    // drift, 1/yr
    double m = 0.1;     // volatility normal level, 1/sqrt(yr)
    double y0 = 0.0;    // initial log-volatility
    double alpha = 1.0; // mean-reversion rate, 1/yr
    double gamma = 0.0; // stationary mean of Y
    double k = 0.0;     // vol-of-vol, 1/sqrt(yr)
    double rho = 0.0;   // Wiener correlation
};

struct ModelParams {
    double s0, mu, m, y0, alpha, gamma, k, rho;
    // derived
    double beta;  // k^2 / (2 alpha), stationary variance of Y
    double lam;   // k / m
    double mbar;  // m e^gamma, effective normal volatility level
};

struct Horizon {
    double t0 = 0.0;
    double t = 0.0;
    double zeta = 0.0;  // alpha (t - t0)

    static Horizon of(const ModelParams& p, double t, double t0 = 0.0);
    double span() const { return t - t0; }
};

class validation_error : public std::runtime_error {
public:
    validation_error(std::string field, const std::string& what)
        : std::runtime_error(what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }
private:
    std::string field_;
};

// Checks the parameter constraints and fills in beta, lambda, mbar.
// Throws validation_error naming the offending field.
ModelParams validate(const RawParams& raw);

// E[Y(t) | Y(t0) = y0] = (y0 - gamma) e^{-alpha (t-t0)} + gamma.
double ou_mean(const ModelParams& p, const Horizon& h);

// Var[Y(t) | Y(t0) = y0] = beta (1 - e^{-2 alpha (t-t0)}).
// The bracket sign follows the corrected form; see the note in ou_variance's
// implementation.
double ou_variance(const ModelParams& p, const Horizon& h);

}
