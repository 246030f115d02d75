#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "expou/calibration.hpp"
#include "expou/edgeworth.hpp"
#include "expou/inversion.hpp"
#include "expou/io.hpp"
#include "expou/kernels.hpp"
#include "expou/linear_cf.hpp"
#include "expou/mc.hpp"
#include "expou/model.hpp"
#include "expou/stats.hpp"
#include "expou/version.hpp"

namespace {

using namespace expou;
using nlohmann::ordered_json;

struct Timer {
    std::chrono::steady_clock::time_point t0 =
        std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

struct OutputTarget {
    std::string path = "-";

    void write(const std::string& text) const {
        if (path == "-") {
            std::cout << text;
            return;
        }
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open output file " + path);
        f << text;
    }
};

// Parameter flags shared by the model-based commands.
struct ParamOpts {
    std::string file;
    RawParams raw;

    void attach(CLI::App* cmd) {
        cmd->add_option("--params", file, "JSON parameter file");
        cmd->add_option("--s0", raw.s0, "initial price");
        cmd->add_option("--mu", raw.mu, "drift");
        cmd->add_option("--m", raw.m, "volatility scale");
        cmd->add_option("--y0", raw.y0, "initial log-vol deviation");
        cmd->add_option("--alpha", raw.alpha, "mean-reversion rate");
        cmd->add_option("--gamma", raw.gamma, "log-vol mean level");
        cmd->add_option("--k", raw.k, "vol-of-vol");
        cmd->add_option("--rho", raw.rho, "shock correlation");
    }

    ModelParams resolve(CLI::App* cmd) const {
        RawParams r = file.empty() ? RawParams{} : params_from_json_file(file);
        // Explicit flags override the file.
        auto seen = [&](const char* name) { return cmd->count(name) > 0; };
        if (file.empty() || seen("--s0")) r.s0 = raw.s0;
        if (file.empty() || seen("--mu")) r.mu = raw.mu;
        if (file.empty() || seen("--m")) r.m = raw.m;
        if (file.empty() || seen("--y0")) r.y0 = raw.y0;
        if (file.empty() || seen("--alpha")) r.alpha = raw.alpha;
        if (file.empty() || seen("--gamma")) r.gamma = raw.gamma;
        if (file.empty() || seen("--k")) r.k = raw.k;
        if (file.empty() || seen("--rho")) r.rho = raw.rho;
        return validate(r);
    }
};

MetaList base_meta(const std::string& command) {
    return {{"tool", "expou"}, {"version", version}, {"command", command}};
}

void finish_meta(MetaList& meta, const Timer& timer) {
    meta.emplace_back("wall_time_s", fmt_g17(timer.seconds()));
}

std::string csv_text(const MetaList& meta,
                     const std::vector<std::string>& columns,
                     const std::vector<const std::vector<double>*>& data) {
    std::ostringstream os;
    write_csv(os, meta, columns, data);
    return os.str();
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

// Reads one numeric column from a CSV written by this tool (or any CSV with
// a header row; '#' lines are skipped).
std::vector<double> read_csv_column(const std::string& path,
                                    const std::string& column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::vector<std::string> header;
    std::vector<double> out;
    long idx = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::stringstream ss(line);
        std::string tok;
        if (idx < 0) {
            long j = 0;
            while (std::getline(ss, tok, ',')) {
                if (tok == column) idx = j;
                ++j;
            }
            if (idx < 0)
                throw std::runtime_error("column '" + column + "' not in " +
                                         path);
            continue;
        }
        long j = 0;
        while (std::getline(ss, tok, ',')) {
            if (j == idx) out.push_back(std::stod(tok));
            ++j;
        }
    }
    if (out.empty())
        throw std::runtime_error("no data rows in " + path);
    return out;
}

ordered_json cumulant_json(const CumulantSet& c) {
    ordered_json j;
    j["n"] = c.n;
    j["k1"] = c.k1;
    j["k2"] = c.k2;
    j["k3"] = c.k3;
    j["k4"] = c.k4;
    j["skew"] = c.skew;
    j["kurt"] = c.kurt;
    j["half_width"] = {{"k1", c.half_width.k1},
                       {"k2", c.half_width.k2},
                       {"skew", c.half_width.skew},
                       {"kurt", c.half_width.kurt}};
    j["ci_method"] = c.ci_method;
    return j;
}

int run_app(int argc, char** argv) {
    CLI::App app{"exponential Ornstein-Uhlenbeck stochastic volatility "
                 "toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    OutputTarget out;
    int threads = 0;
    std::string kernel = "auto";
    app.add_option("-o,--out", out.path, "output path ('-' for stdout)")
        ->capture_default_str();
    app.add_option("--threads", threads,
                   "worker threads (0: EXPOU_THREADS or hardware)");
    app.add_option("--kernel", kernel, "simulation kernel")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    // ---------------- simulate ----------------
    auto* sim = app.add_subcommand("simulate", "Euler-Maruyama paths");
    ParamOpts sim_params;
    sim_params.attach(sim);
    double sim_dt = 1e-3;
    std::uint64_t sim_steps = 1000;
    std::size_t sim_paths = 1000;
    std::uint64_t sim_seed = 0;
    std::string sim_dyn = "exp";
    std::string sim_cps;
    bool sim_hidden = false, sim_stationary = false;
    sim->add_option("--dt", sim_dt, "step size in years")
        ->capture_default_str();
    sim->add_option("--steps", sim_steps, "number of steps")
        ->capture_default_str();
    sim->add_option("--paths", sim_paths, "number of paths")
        ->capture_default_str();
    sim->add_option("--seed", sim_seed, "stream seed")->capture_default_str();
    sim->add_option("--dynamics", sim_dyn, "exp | linear")
        ->check(CLI::IsMember({"exp", "linear"}));
    sim->add_option("--checkpoints", sim_cps,
                    "comma-separated times (default: terminal only)");
    sim->add_flag("--record-hidden", sim_hidden, "also emit Y (or Z)");
    sim->add_flag("--stationary", sim_stationary,
                  "draw the initial hidden state from the stationary law");

    // ---------------- stats ----------------
    auto* st = app.add_subcommand("stats", "cumulants of a sample column");
    std::string st_input, st_column = "x";
    double st_conf = 0.95;
    st->add_option("--input", st_input, "CSV file")->required();
    st->add_option("--column", st_column, "column name")
        ->capture_default_str();
    st->add_option("--confidence", st_conf, "CI level")
        ->capture_default_str();

    // ---------------- cumulants ----------------
    auto* cu = app.add_subcommand("cumulants",
                                  "closed-form cumulants over a horizon");
    ParamOpts cu_params;
    cu_params.attach(cu);
    double cu_t = 1.0;
    cu->add_option("--t", cu_t, "horizon in years")->capture_default_str();

    // ---------------- edgeworth ----------------
    auto* ed = app.add_subcommand("edgeworth", "Edgeworth density curve");
    ParamOpts ed_params;
    ed_params.attach(ed);
    double ed_t = 1.0, ed_nsig = 6.0;
    int ed_n = 1001;
    ed->add_option("--t", ed_t, "horizon in years")->capture_default_str();
    ed->add_option("--n-sigma", ed_nsig, "half-range in standard deviations")
        ->capture_default_str();
    ed->add_option("--n", ed_n, "number of grid points")
        ->capture_default_str();

    // ---------------- cf ----------------
    auto* cf = app.add_subcommand("cf",
                                  "linear-model characteristic function");
    ParamOpts cf_params;
    cf_params.attach(cf);
    double cf_t = 1.0, cf_phi_max = 100.0;
    int cf_n = 1001;
    std::optional<double> cf_z0;
    bool cf_check = false;
    cf->add_option("--t", cf_t, "horizon in years")->capture_default_str();
    cf->add_option("--phi-max", cf_phi_max, "largest frequency")
        ->capture_default_str();
    cf->add_option("--n", cf_n, "number of frequencies")
        ->capture_default_str();
    cf->add_option("--z0", cf_z0, "override the initial volatility factor");
    cf->add_flag("--check", cf_check,
                 "run the Riccati residual and branch scans");

    // ---------------- density ----------------
    auto* de = app.add_subcommand("density",
                                  "return density by CF inversion");
    ParamOpts de_params;
    de_params.attach(de);
    double de_t = 1.0, de_phi_max = 1000.0, de_trim = 0.0;
    std::size_t de_n = 1u << 18;
    std::string de_x;
    std::optional<double> de_z0;
    de->add_option("--t", de_t, "horizon in years")->capture_default_str();
    de->add_option("--phi-max", de_phi_max, "frequency cutoff")
        ->capture_default_str();
    de->add_option("--n", de_n, "frequency count (power of two)")
        ->capture_default_str();
    de->add_option("--x", de_x,
                   "comma-separated abscissae (direct quadrature route)");
    de->add_option("--trim", de_trim,
                   "drop tails below this fraction of the peak")
        ->capture_default_str();
    de->add_option("--z0", de_z0, "override the initial volatility factor");

    // ---------------- calibrate ----------------
    auto* ca = app.add_subcommand("calibrate", "fit the model to closes");
    std::string ca_prices;
    CalibrationConfig ca_cfg;
    double ca_fit_lo = 0, ca_fit_hi = 0;
    ca->add_option("--prices", ca_prices, "CSV of date,close")->required();
    ca->add_option("--window", ca_cfg.window, "vol proxy window (odd)")
        ->capture_default_str();
    ca->add_option("--max-horizon", ca_cfg.max_horizon,
                   "longest horizon in days")
        ->capture_default_str();
    ca->add_option("--fit-lo", ca_fit_lo, "lognormal fit range low edge");
    ca->add_option("--fit-hi", ca_fit_hi, "lognormal fit range high edge");
    ca->add_option("--mc-paths", ca_cfg.mc.n_paths, "objective MC paths")
        ->capture_default_str();
    ca->add_option("--mc-seed", ca_cfg.mc.seed, "objective MC seed")
        ->capture_default_str();
    ca->add_option("--substeps", ca_cfg.mc.substeps,
                   "objective MC substeps per day (0: automatic)")
        ->capture_default_str();
    ca->add_option("--alpha-lo", ca_cfg.bounds.alpha_lo, "alpha lower bound")
        ->capture_default_str();
    ca->add_option("--alpha-hi", ca_cfg.bounds.alpha_hi, "alpha upper bound")
        ->capture_default_str();
    ca->add_option("--rho-lo", ca_cfg.bounds.rho_lo, "rho lower bound")
        ->capture_default_str();
    ca->add_option("--rho-hi", ca_cfg.bounds.rho_hi, "rho upper bound")
        ->capture_default_str();
    ca->add_option("--alpha0", ca_cfg.start.alpha, "alpha start")
        ->capture_default_str();
    ca->add_option("--rho0", ca_cfg.start.rho, "rho start")
        ->capture_default_str();

    // ---------------- reproduce ----------------
    auto* re = app.add_subcommand("reproduce",
                                  "regenerate the reference outputs");
    re->require_subcommand(1);
    auto* re_t1 = re->add_subcommand("table1",
                                     "terminal cumulants versus beta");
    auto* re_t2 = re->add_subcommand(
        "table2", "exponential versus linear dynamics by horizon");
    auto* re_t3 = re->add_subcommand("table3", "index calibration");
    auto* re_fd = re->add_subcommand("fig-density",
                                     "density: inversion vs series forms");
    std::size_t re_paths = 100000;
    double re_dt = 1e-3;
    std::uint64_t re_seed = 7101;
    re_t1->add_option("--paths", re_paths, "MC paths")->capture_default_str();
    re_t1->add_option("--dt", re_dt, "MC step")->capture_default_str();
    re_t1->add_option("--seed", re_seed, "MC seed")->capture_default_str();
    std::size_t re2_paths = 100000;
    double re2_dt = 1e-3;
    std::uint64_t re2_seed = 7102;
    re_t2->add_option("--paths", re2_paths, "MC paths")
        ->capture_default_str();
    re_t2->add_option("--dt", re2_dt, "MC step")->capture_default_str();
    re_t2->add_option("--seed", re2_seed, "MC seed")->capture_default_str();
    std::string re3_prices;
    int re3_window = 21;
    double re3_fit_lo = 0, re3_fit_hi = 0;
    re_t3->add_option("--prices", re3_prices, "CSV of date,close")
        ->required();
    re_t3->add_option("--window", re3_window, "vol proxy window")
        ->capture_default_str();
    re_t3->add_option("--fit-lo", re3_fit_lo, "lognormal fit low edge");
    re_t3->add_option("--fit-hi", re3_fit_hi, "lognormal fit high edge");
    double refd_beta = 0.01, refd_rho = -0.9, refd_t = 1.0;
    std::size_t refd_n = 1u << 18;
    re_fd->add_option("--beta", refd_beta, "vol-of-vol strength")
        ->capture_default_str();
    re_fd->add_option("--rho", refd_rho, "correlation")
        ->capture_default_str();
    re_fd->add_option("--t", refd_t, "horizon")->capture_default_str();
    re_fd->add_option("--n", refd_n, "frequency count")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (kernel == "scalar")
        kern::set_kernel_override(kern::KernelKind::Scalar);
    else if (kernel == "avx2")
        kern::set_kernel_override(kern::KernelKind::Avx2);

    Timer timer;

    if (*sim) {
        ModelParams p = sim_params.resolve(sim);
        SimConfig cfg;
        cfg.dt = sim_dt;
        cfg.n_steps = sim_steps;
        cfg.n_paths = sim_paths;
        cfg.seed = sim_seed;
        cfg.dynamics =
            sim_dyn == "linear" ? Dynamics::Linear : Dynamics::Exponential;
        cfg.record_hidden = sim_hidden;
        cfg.initial = sim_stationary ? InitialState::Stationary
                                     : InitialState::Fixed;
        cfg.n_threads = threads;
        std::vector<double> cps =
            sim_cps.empty() ? std::vector<double>{} : parse_list(sim_cps);
        PathEnsemble ens = simulate(p, cfg, cps);

        std::vector<double> col_t, col_path, col_x, col_h;
        for (std::size_t c = 0; c < ens.n_checkpoints(); ++c)
            for (std::size_t i = 0; i < ens.n_paths; ++i) {
                col_t.push_back(ens.checkpoint_times[c]);
                col_path.push_back(static_cast<double>(i));
                col_x.push_back(ens.x_at(c)[i]);
                if (sim_hidden) col_h.push_back(ens.hidden_at(c)[i]);
            }
        MetaList meta = base_meta("simulate");
        meta.emplace_back("params", params_to_json(p));
        meta.emplace_back("dt", fmt_g17(sim_dt));
        meta.emplace_back("n_steps", std::to_string(sim_steps));
        meta.emplace_back("n_paths", std::to_string(sim_paths));
        meta.emplace_back("seed", std::to_string(sim_seed));
        meta.emplace_back("dynamics", sim_dyn);
        meta.emplace_back("initial",
                          sim_stationary ? "stationary" : "fixed");
        meta.emplace_back("kernel", kern::kernel_ops().name);
        finish_meta(meta, timer);
        std::vector<std::string> cols{"time", "path", "x"};
        std::vector<const std::vector<double>*> data{&col_t, &col_path,
                                                     &col_x};
        if (sim_hidden) {
            cols.emplace_back("hidden");
            data.push_back(&col_h);
        }
        out.write(csv_text(meta, cols, data));
        return 0;
    }

    if (*st) {
        std::vector<double> sample = read_csv_column(st_input, st_column);
        CumulantSet c = estimate_cumulants(sample, st_conf);
        ordered_json j;
        j["tool"] = "expou";
        j["version"] = version;
        j["command"] = "stats";
        j["input"] = st_input;
        j["column"] = st_column;
        j["confidence"] = st_conf;
        j["cumulants"] = cumulant_json(c);
        j["wall_time_s"] = timer.seconds();
        out.write(j.dump(2) + "\n");
        return 0;
    }

    if (*cu) {
        ModelParams p = cu_params.resolve(cu);
        Horizon h = Horizon::of(p, cu_t);
        TheoreticalCumulants c = cumulants_closed_form(p, h);
        ordered_json j;
        j["tool"] = "expou";
        j["version"] = version;
        j["command"] = "cumulants";
        j["params"] = ordered_json::parse(params_to_json(p));
        j["t"] = cu_t;
        j["zeta"] = h.zeta;
        j["k1"] = c.k1;
        j["k2"] = c.k2;
        j["k3"] = c.k3;
        j["k4"] = c.k4;
        j["skew"] = c.skew;
        j["kurt"] = c.kurt;
        j["degenerate"] = c.degenerate;
        j["wall_time_s"] = timer.seconds();
        out.write(j.dump(2) + "\n");
        return 0;
    }

    if (*ed) {
        ModelParams p = ed_params.resolve(ed);
        Horizon h = Horizon::of(p, ed_t);
        TheoreticalCumulants c = cumulants_closed_form(p, h);
        double s = std::sqrt(c.k2);
        std::vector<double> xs(ed_n), ps(ed_n);
        for (int i = 0; i < ed_n; ++i) {
            xs[i] = c.k1 + s * ed_nsig * (2.0 * i / (ed_n - 1) - 1.0);
            ps[i] = edgeworth_density(xs[i], c);
        }
        MetaList meta = base_meta("edgeworth");
        meta.emplace_back("params", params_to_json(p));
        meta.emplace_back("t", fmt_g17(ed_t));
        meta.emplace_back("skew", fmt_g17(c.skew));
        meta.emplace_back("kurt", fmt_g17(c.kurt));
        meta.emplace_back("negative_in_3_sigma",
                          edgeworth_has_negative(c) ? "true" : "false");
        finish_meta(meta, timer);
        out.write(csv_text(meta, {"x", "density"}, {&xs, &ps}));
        return 0;
    }

    if (*cf) {
        ModelParams p = cf_params.resolve(cf);
        Horizon h = Horizon::of(p, cf_t);
        std::vector<double> phis(cf_n), re_f(cf_n), im_f(cf_n), re_e(cf_n),
            im_e(cf_n);
        for (int i = 0; i < cf_n; ++i) {
            phis[i] = cf_phi_max * i / (cf_n - 1);
            CFValue v = cf_linear(phis[i], p, h, 0.0, cf_z0);
            re_f[i] = v.f.real();
            im_f[i] = v.f.imag();
            re_e[i] = v.exponent.real();
            im_e[i] = v.exponent.imag();
        }
        MetaList meta = base_meta("cf");
        meta.emplace_back("params", params_to_json(p));
        meta.emplace_back("t", fmt_g17(cf_t));
        meta.emplace_back("z0",
                          fmt_g17(cf_z0.value_or(p.y0 - p.gamma + 1.0)));
        if (cf_check) {
            RiccatiReport rr = riccati_residual_check(p, h);
            BranchScanReport br =
                branch_smoothness_scan(p, h, cf_phi_max, 4096);
            meta.emplace_back("riccati_fd_residual",
                              fmt_g17(rr.fd_residual));
            meta.emplace_back("riccati_ode_mismatch",
                              fmt_g17(rr.ode_mismatch));
            meta.emplace_back("branch_discontinuities",
                              std::to_string(br.discontinuities));
        }
        finish_meta(meta, timer);
        out.write(csv_text(meta, {"phi", "re_f", "im_f", "re_exp", "im_exp"},
                           {&phis, &re_f, &im_f, &re_e, &im_e}));
        return 0;
    }

    if (*de) {
        ModelParams p = de_params.resolve(de);
        Horizon h = Horizon::of(p, de_t);
        CharFn fn = [&](double phi) {
            return cf_linear(phi, p, h, 0.0, de_z0).f;
        };
        FrequencyGrid grid{de_phi_max, de_n};
        MetaList meta = base_meta("density");
        meta.emplace_back("params", params_to_json(p));
        meta.emplace_back("t", fmt_g17(de_t));
        meta.emplace_back("phi_max", fmt_g17(de_phi_max));
        meta.emplace_back("n_points", std::to_string(de_n));
        DensityGrid g;
        if (de_x.empty()) {
            g = invert_fft(fn, grid);
            if (de_trim > 0) g = tail_trim(g, de_trim);
            meta.emplace_back("route", "fft");
            meta.emplace_back("mass", fmt_g17(g.mass));
            meta.emplace_back("dx", fmt_g17(g.dx));
        } else {
            g = invert_trapezoid(fn, grid, parse_list(de_x));
            meta.emplace_back("route", "trapezoid");
        }
        finish_meta(meta, timer);
        out.write(csv_text(meta, {"x", "density"}, {&g.x, &g.density}));
        return 0;
    }

    auto calibration_json = [&](const CalibrationResult& r,
                                const std::string& command) {
        ordered_json j;
        j["tool"] = "expou";
        j["version"] = version;
        j["command"] = command;
        j["mu"] = r.mu;
        j["m_bar"] = r.m_bar;
        j["beta"] = r.beta;
        j["alpha"] = r.alpha;
        j["rho"] = r.rho;
        j["y0"] = r.y0;
        j["gamma"] = r.gamma;
        j["diagnostics"] = {
            {"dt", r.diagnostics.dt},
            {"mu_ci", r.diagnostics.mu_ci},
            {"log_sigma0", r.diagnostics.vol_fit.log_sigma0},
            {"log_sigma0_se", r.diagnostics.vol_fit.log_sigma0_se},
            {"s", r.diagnostics.vol_fit.s},
            {"s_se", r.diagnostics.vol_fit.s_se},
            {"fit_lo", r.diagnostics.vol_fit.range.lo},
            {"fit_hi", r.diagnostics.vol_fit.range.hi},
            {"fit_bins", r.diagnostics.vol_fit.n_bins_used},
            {"chi2", r.diagnostics.chi2},
            {"n_horizons", r.diagnostics.n_horizons},
            {"n_evals", r.diagnostics.n_evals},
            {"substeps", r.diagnostics.substeps},
            {"converged", r.diagnostics.converged}};
        j["wall_time_s"] = timer.seconds();
        return j;
    };

    if (*ca) {
        if (ca->count("--fit-lo") != ca->count("--fit-hi"))
            throw CLI::ValidationError(
                "--fit-lo and --fit-hi must be given together");
        if (ca->count("--fit-lo"))
            ca_cfg.fit_range = FitRange{ca_fit_lo, ca_fit_hi};
        PriceSeries s = load_price_csv(ca_prices);
        CalibrationResult r = calibrate(s, ca_cfg);
        out.write(calibration_json(r, "calibrate").dump(2) + "\n");
        return 0;
    }

    if (*re_t1) {
        const double betas[] = {0.005, 0.01, 0.02, 0.05, 0.10, 0.25, 0.50};
        std::vector<double> cb, ck1, ck1e, ck2, ck2e, cs, cse, cku, ckue,
            cs_cf, cku_cf;
        for (double beta : betas) {
            RawParams rp;
            rp.s0 = 100;
            rp.m = 0.1;
            rp.alpha = 10.0;
            rp.k = std::sqrt(2 * 10.0 * beta);
            rp.rho = -0.9;
            ModelParams p = validate(rp);
            SimConfig cfg;
            cfg.dt = re_dt;
            cfg.n_steps =
                static_cast<std::uint64_t>(std::llround(1.0 / re_dt));
            cfg.n_paths = re_paths;
            cfg.seed = re_seed;
            cfg.n_threads = threads;
            PathEnsemble ens = simulate(p, cfg);
            CumulantSet c = estimate_cumulants(
                std::span<const double>(ens.x_final(), ens.n_paths));
            TheoreticalCumulants tc =
                cumulants_closed_form(p, Horizon::of(p, 1.0));
            cb.push_back(beta);
            ck1.push_back(c.k1);
            ck1e.push_back(c.half_width.k1);
            ck2.push_back(c.k2);
            ck2e.push_back(c.half_width.k2);
            cs.push_back(c.skew);
            cse.push_back(c.half_width.skew);
            cku.push_back(c.kurt);
            ckue.push_back(c.half_width.kurt);
            cs_cf.push_back(tc.skew);
            cku_cf.push_back(tc.kurt);
        }
        MetaList meta = base_meta("reproduce table1");
        meta.emplace_back("m", "0.1");
        meta.emplace_back("alpha", "10");
        meta.emplace_back("rho", "-0.9");
        meta.emplace_back("t", "1");
        meta.emplace_back("dt", fmt_g17(re_dt));
        meta.emplace_back("n_paths", std::to_string(re_paths));
        meta.emplace_back("seed", std::to_string(re_seed));
        finish_meta(meta, timer);
        out.write(csv_text(
            meta,
            {"beta", "k1_mc", "k1_err", "k2_mc", "k2_err", "skew_mc",
             "skew_err", "kurt_mc", "kurt_err", "skew_cf", "kurt_cf"},
            {&cb, &ck1, &ck1e, &ck2, &ck2e, &cs, &cse, &cku, &ckue, &cs_cf,
             &cku_cf}));
        return 0;
    }

    if (*re_t2) {
        const double betas[] = {0.01, 0.02};
        const double ts[] = {0.01, 0.1, 0.2, 0.5, 1.0};
        std::vector<double> cb, ct;
        std::vector<double> ex[8], li[8];  // k1,k1e,k2,k2e,s,se,ku,kue
        for (double beta : betas) {
            RawParams rp;
            rp.s0 = 100;
            rp.m = 0.1;
            rp.alpha = 10.0;
            rp.k = std::sqrt(2 * 10.0 * beta);
            rp.rho = -0.9;
            ModelParams p = validate(rp);
            std::vector<double> cps(ts, ts + 5);
            for (int dyn = 0; dyn < 2; ++dyn) {
                SimConfig cfg;
                cfg.dt = re2_dt;
                cfg.n_steps =
                    static_cast<std::uint64_t>(std::llround(1.0 / re2_dt));
                cfg.n_paths = re2_paths;
                cfg.seed = re2_seed;
                cfg.n_threads = threads;
                cfg.dynamics =
                    dyn ? Dynamics::Linear : Dynamics::Exponential;
                PathEnsemble ens = simulate(p, cfg, cps);
                for (std::size_t c = 0; c < cps.size(); ++c) {
                    CumulantSet cs = estimate_cumulants(
                        std::span<const double>(ens.x_at(c), ens.n_paths));
                    auto& slot = dyn ? li : ex;
                    slot[0].push_back(cs.k1);
                    slot[1].push_back(cs.half_width.k1);
                    slot[2].push_back(cs.k2);
                    slot[3].push_back(cs.half_width.k2);
                    slot[4].push_back(cs.skew);
                    slot[5].push_back(cs.half_width.skew);
                    slot[6].push_back(cs.kurt);
                    slot[7].push_back(cs.half_width.kurt);
                    if (dyn == 0) {
                        cb.push_back(beta);
                        ct.push_back(cps[c]);
                    }
                }
            }
        }
        MetaList meta = base_meta("reproduce table2");
        meta.emplace_back("m", "0.1");
        meta.emplace_back("alpha", "10");
        meta.emplace_back("rho", "-0.9");
        meta.emplace_back("dt", fmt_g17(re2_dt));
        meta.emplace_back("n_paths", std::to_string(re2_paths));
        meta.emplace_back("seed", std::to_string(re2_seed));
        finish_meta(meta, timer);
        out.write(csv_text(
            meta,
            {"beta",        "t",           "k1_exp",   "k1_exp_err",
             "k2_exp",      "k2_exp_err",  "skew_exp", "skew_exp_err",
             "kurt_exp",    "kurt_exp_err", "k1_lin",  "k1_lin_err",
             "k2_lin",      "k2_lin_err",  "skew_lin", "skew_lin_err",
             "kurt_lin",    "kurt_lin_err"},
            {&cb, &ct, &ex[0], &ex[1], &ex[2], &ex[3], &ex[4], &ex[5],
             &ex[6], &ex[7], &li[0], &li[1], &li[2], &li[3], &li[4], &li[5],
             &li[6], &li[7]}));
        return 0;
    }

    if (*re_t3) {
        CalibrationConfig cfg;
        cfg.window = re3_window;
        if (re_t3->count("--fit-lo") != re_t3->count("--fit-hi"))
            throw CLI::ValidationError(
                "--fit-lo and --fit-hi must be given together");
        if (re_t3->count("--fit-lo"))
            cfg.fit_range = FitRange{re3_fit_lo, re3_fit_hi};
        PriceSeries s = load_price_csv(re3_prices);
        CalibrationResult r = calibrate(s, cfg);
        out.write(calibration_json(r, "reproduce table3").dump(2) + "\n");
        return 0;
    }

    if (*re_fd) {
        RawParams rp;
        rp.s0 = 100;
        rp.m = 0.1;
        rp.alpha = 10.0;
        rp.k = std::sqrt(2 * 10.0 * refd_beta);
        rp.rho = refd_rho;
        ModelParams p = validate(rp);
        Horizon h = Horizon::of(p, refd_t);
        CharFn fn = [&](double phi) { return cf_linear(phi, p, h).f; };
        DensityGrid g = invert_fft(fn, FrequencyGrid{1000.0, refd_n});
        double mass = g.mass;
        g = tail_trim(g, 1e-8);
        TheoreticalCumulants tc = cumulants_closed_form(p, h);
        std::vector<double> pe(g.x.size()), pg(g.x.size());
        double s = std::sqrt(tc.k2);
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            pe[i] = edgeworth_density(g.x[i], tc);
            double z = (g.x[i] - tc.k1) / s;
            pg[i] = std::exp(-0.5 * z * z) /
                    (s * std::sqrt(2 * 3.14159265358979323846));
        }
        MetaList meta = base_meta("reproduce fig-density");
        meta.emplace_back("params", params_to_json(p));
        meta.emplace_back("t", fmt_g17(refd_t));
        meta.emplace_back("mass", fmt_g17(mass));
        finish_meta(meta, timer);
        out.write(csv_text(meta,
                           {"x", "density_cf", "density_edgeworth",
                            "density_gauss"},
                           {&g.x, &g.density, &pe, &pg}));
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_app(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "expou: " << e.what() << "\n";
        return 2;
    }
}
