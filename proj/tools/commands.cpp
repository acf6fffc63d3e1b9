#include "cli.hpp"

#include "rydfloq/classical.hpp"
#include "rydfloq/dynamics.hpp"
#include "rydfloq/effective.hpp"
#include "rydfloq/error.hpp"
#include "rydfloq/floquet.hpp"
#include "rydfloq/open_system.hpp"
#include "rydfloq/parallel.hpp"
#include "rydfloq/spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace rydfloq::cli {

namespace {

constexpr const char* kVersion = "rydfloq 1.0.0";

Report base_report(const RunConfig& cfg) {
    Report r;
    r.metadata.emplace_back("version", kVersion);
    r.metadata.emplace_back("scenario", std::string(to_string(cfg.scenario())));
    for (const auto& [k, v] : cfg.resolved()) r.metadata.emplace_back(k, v);
    return r;
}

std::pair<long, long> parse_window(const RunConfig& cfg, long n_periods) {
    if (!cfg.has("window")) return {n_periods / 10, n_periods};
    const std::string w = cfg.text("window");
    const auto colon = w.find(':');
    if (colon == std::string::npos) throw UsageError("window: expected lo:hi");
    try {
        std::size_t a = 0, b = 0;
        const long lo = std::stol(w.substr(0, colon), &a);
        const long hi = std::stol(w.substr(colon + 1), &b);
        if (a != colon || b != w.size() - colon - 1 || lo < 0 || hi < lo)
            throw UsageError("window: expected 0 <= lo <= hi");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("window: expected lo:hi");
    }
}

MatrixXcd expm_hermitian(const MatrixXcd& h, double t) {
    const auto e = linalg::hermitian_eigen(h, true);
    VectorXcd ph(e.values.size());
    for (Index i = 0; i < ph.size(); ++i) ph[i] = std::polar(1.0, -e.values[i] * t);
    return e.vectors * ph.asDiagonal() * e.vectors.adjoint();
}

Report run_rstat(const RunConfig& cfg, int workers) {
    const DriveParams base = cfg.base_drive();
    if (base.n_sites > 14) throw UsageError("rstat: n_sites must be <= 14");
    base.validate();
    const std::vector<double> d0 = cfg.grid("delta0_grid");
    const std::vector<double> taus = cfg.has("tau_grid") ? cfg.grid("tau_grid")
                                                          : std::vector<double>{base.half_period};
    const std::string which = cfg.text("sector");
    std::vector<Sector> sectors;
    if (which == "both")
        sectors = {Sector::even, Sector::odd};
    else
        try {
            sectors = {parse_sector(which)};
        } catch (const InvalidArgument&) {
            throw UsageError("sector: expected even, odd, full or both");
        }

    std::vector<DriveParams> grid;
    for (double tau : taus)
        for (double x : d0) {
            DriveParams p = base;
            p.half_period = tau;
            p.detuning = x - base.nn_interaction;
            grid.push_back(p);
        }
    std::vector<std::vector<ScanRow>> per_sector;
    for (Sector s : sectors) per_sector.push_back(mean_r_scan(grid, s, workers));

    Report r = base_report(cfg);
    r.metadata.emplace_back("coe_mean_r", format_number(EnsembleConstants::coe_mean_r));
    r.metadata.emplace_back("poisson_mean_r", format_number(EnsembleConstants::poisson_mean_r));
    Table t{"rstat", {"delta0", "tau", "sector", "mean_r", "count", "error"}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (const auto& rows : per_sector) {
            const ScanRow& row = rows[i];
            t.rows.push_back({row.delta0, row.tau, std::string(to_string(row.sector)),
                              row.ok() ? Cell{row.mean_r} : Cell{}, static_cast<long>(row.count), row.error});
            if (!row.ok()) r.status = ExitCode::partial;
        }
    r.tables.push_back(std::move(t));
    return r;
}

Report run_dynamics_cmd(const RunConfig& cfg, int workers) {
    const DriveParams base = cfg.base_drive();
    base.validate();
    const std::vector<double> deltas = cfg.detunings();
    const std::vector<std::string> states = cfg.list("init_state");
    const long n_periods = cfg.integer("n_periods");
    const long stride = cfg.integer("stride");
    if (n_periods < 0) throw UsageError("n_periods must be >= 0");
    if (stride < 1) throw UsageError("stride must be >= 1");
    std::vector<Observable> obs;
    for (const auto& tag : cfg.list("observables")) {
        try {
            obs.push_back(parse_observable(tag));
        } catch (const InvalidArgument& e) {
            throw UsageError(std::string("observables: ") + e.what());
        }
    }
    const SpinBasis basis(base.n_sites);
    for (const auto& s : states) {
        try {
            (void)initial_state(s, basis);
        } catch (const InvalidArgument& e) {
            throw UsageError(std::string("init_state: ") + e.what());
        }
    }
    const auto [lo, hi] = parse_window(cfg, n_periods);
    const std::vector<long> times = sample_times(n_periods, stride);

    // results[d][s][o]
    using PerState = std::vector<std::vector<ObservableSeries>>;
    const auto results = parallel_map<PerState>(deltas.size(), workers, [&](std::size_t d) {
        DriveParams p = base;
        p.detuning = deltas[d];
        const SpectralEvolver ev(p);
        PerState out;
        for (const auto& s : states) out.push_back(run_dynamics(ev, p, initial_state(s, basis), times, obs));
        return out;
    });

    Report r = base_report(cfg);
    r.metadata.emplace_back("window_used", std::to_string(lo) + ":" + std::to_string(hi));
    for (std::size_t o = 0; o < obs.size(); ++o) {
        Table t{obs[o].tag(base.n_sites), {"delta", "init_state", "n", "value"}, {}};
        for (std::size_t d = 0; d < deltas.size(); ++d)
            for (std::size_t s = 0; s < states.size(); ++s) {
                const ObservableSeries& ser = results[d][s][o];
                for (std::size_t i = 0; i < ser.period.size(); ++i)
                    t.rows.push_back({deltas[d], states[s], ser.period[i], ser.values[i]});
            }
        // Window summaries follow the series; a zero-length run has none.
        if (n_periods > 0)
            for (std::size_t d = 0; d < deltas.size(); ++d)
                for (std::size_t s = 0; s < states.size(); ++s) {
                    const WindowStats w = window_average(results[d][s][o], lo, hi);
                    t.rows.push_back({deltas[d], states[s], std::string("window_mean"),
                                      w.count ? Cell{w.mean} : Cell{}});
                    t.rows.push_back({deltas[d], states[s], std::string("window_std"),
                                      w.count ? Cell{w.stddev} : Cell{}});
                }
        r.tables.push_back(std::move(t));
    }
    return r;
}

Report run_lindblad(const RunConfig& cfg, int workers) {
    DriveParams p = cfg.base_drive();
    if (p.n_sites > 12) throw UsageError("lindblad: n_sites must be <= 12 (dense density matrix)");
    const std::vector<double> deltas = cfg.detunings();
    if (deltas.size() != 1) throw UsageError("lindblad: a single detuning is expected");
    p.detuning = deltas[0];
    p.validate();
    const double gamma = cfg.number("gamma");
    if (gamma < 0.0) throw UsageError("gamma must be >= 0");
    const long n_periods = cfg.integer("n_periods");
    if (n_periods < 0) throw UsageError("n_periods must be >= 0");
    const UnitContext units(cfg.number("omega0_mhz"));

    MasterOptions opts;
    opts.dt = cfg.number("dt");
    if (opts.dt < 0.0) throw UsageError("dt must be >= 0");
    const std::string scheme = cfg.text("scheme");
    if (scheme == "rk4")
        opts.scheme = MasterScheme::rk4;
    else if (scheme == "split")
        opts.scheme = MasterScheme::split;
    else
        throw UsageError("scheme: expected rk4 or split");
    const std::string frame = cfg.text("frame");
    if (frame == "interaction")
        opts.frame = MasterFrame::interaction;
    else if (frame == "lab")
        opts.frame = MasterFrame::lab;
    else
        throw UsageError("frame: expected interaction or lab");
    opts.spectrum_every = cfg.integer("spectrum_every");
    if (opts.spectrum_every < 0) throw UsageError("spectrum_every must be >= 0");

    const std::vector<std::string> states = cfg.list("init_state");
    const SpinBasis basis(p.n_sites);
    for (const auto& s : states) {
        try {
            (void)initial_state(s, basis);
        } catch (const InvalidArgument& e) {
            throw UsageError(std::string("init_state: ") + e.what());
        }
    }
    std::vector<double> gammas{gamma};
    if (cfg.boolean("compare") && gamma > 0.0) gammas = {0.0, gamma};

    struct Job {
        std::size_t state;
        double gamma;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < states.size(); ++s)
        for (double g : gammas) jobs.push_back({s, g});
    const auto results = parallel_map<MasterResult>(jobs.size(), workers, [&](std::size_t j) {
        return evolve_master(p, jobs[j].gamma, initial_state(states[jobs[j].state], basis), n_periods, opts);
    });

    Report r = base_report(cfg);
    r.metadata.emplace_back("period_us", format_number(units.to_microseconds(p.period())));
    r.metadata.emplace_back("final_time_us",
                            format_number(units.to_microseconds(p.period() * static_cast<double>(n_periods))));
    if (!results.empty()) r.metadata.emplace_back("dt_used", format_number(results[0].dt));
    Table t{"lindblad",
            {"init_state", "gamma", "n", "time_us", "sz", "trace_error", "hermiticity_error", "min_eigenvalue"},
            {}};
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const MasterResult& m = results[j];
        for (std::size_t i = 0; i < m.period.size(); ++i) {
            Cell min_ev;
            for (std::size_t q = 0; q < m.spectrum_period.size(); ++q)
                if (m.spectrum_period[q] == m.period[i]) min_ev = m.min_eigenvalue[q];
            const double t_us = units.to_microseconds(p.period() * static_cast<double>(m.period[i]));
            t.rows.push_back({states[jobs[j].state], jobs[j].gamma, m.period[i], t_us, m.sz[i], m.trace_error[i],
                              m.hermiticity_error[i], min_ev});
        }
    }
    r.tables.push_back(std::move(t));
    return r;
}

Report run_classical(const RunConfig& cfg, int workers) {
    const DriveParams base = cfg.base_drive();
    const std::vector<double> deltas = cfg.detunings();
    const long n_periods = cfg.integer("n_periods");
    if (n_periods < 0) throw UsageError("n_periods must be >= 0");
    const long realizations = cfg.integer("realizations");
    if (realizations < 1) throw UsageError("realizations must be >= 1");
    const double amplitude = cfg.number("amplitude");
    if (amplitude < 0.0) throw UsageError("amplitude must be >= 0");
    const long seed = cfg.integer("seed");
    if (seed < 0) throw UsageError("seed must be >= 0");

    Report r = base_report(cfg);
    Table t{"classical", {"delta", "n", "Q", "dQ", "mean_energy", "ground_energy"}, {}};
    for (double delta : deltas) {
        DriveParams p = base;
        p.detuning = delta;
        validate_classical(p);
        const NoiseEnsembleResult e = noise_averaged_heating(p, n_periods, static_cast<int>(realizations), amplitude,
                                                             static_cast<std::uint64_t>(seed), workers);
        for (std::size_t n = 0; n < e.q.size(); ++n)
            t.rows.push_back({delta, static_cast<long>(n), e.q[n], e.dq[n], e.mean_energy[n], e.ground_energy});
    }
    r.tables.push_back(std::move(t));
    return r;
}

Report run_effective(const RunConfig& cfg) {
    DriveParams p = cfg.base_drive();
    const std::vector<double> deltas = cfg.detunings();
    if (deltas.size() != 1) throw UsageError("effective: a single detuning is expected");
    p.detuning = deltas[0];
    p.validate();
    if (p.n_sites > 12) throw UsageError("effective: n_sites must be <= 12");
    const long order = cfg.integer("order");
    if (order < 0 || order > 2) throw UsageError("order must be 0, 1 or 2");
    const std::string form = cfg.text("form");
    EffectiveHamiltonian h;
    if (form == "exact")
        h = bch_effective(p, static_cast<int>(order));
    else if (form == "explicit")
        h = bch_effective_explicit(p, static_cast<int>(order));
    else if (form == "bulk")
        h = bch_effective_bulk(p, static_cast<int>(order));
    else
        throw UsageError("form: expected exact, explicit or bulk");

    Report r = base_report(cfg);
    r.metadata.emplace_back("constant", format_number(h.constant));
    r.metadata.emplace_back("boundary_field", format_number(h.boundary_field));
    r.metadata.emplace_back("floquet_error",
                            format_number(linalg::max_abs(MatrixXcd(expm_hermitian(h.matrix, p.period()) -
                                                                    floquet_unitary(p)))));
    const VectorXd e = linalg::hermitian_eigen(h.matrix, false).values;
    Table t{"effective", {"index", "energy"}, {}};
    for (Index i = 0; i < e.size(); ++i) t.rows.push_back({static_cast<long>(i), e[i]});
    r.tables.push_back(std::move(t));
    return r;
}

Report run_oracle(const RunConfig& cfg) {
    Report r = base_report(cfg);
    Table t{"oracle", {"check", "n_sites", "value", "tolerance", "pass"}, {}};
    for (const auto& c : oracle_checks()) {
        t.rows.push_back({c.name, static_cast<long>(c.n_sites), c.value, c.tolerance,
                          std::string(c.pass() ? "yes" : "no")});
        if (!c.pass()) r.status = ExitCode::tolerance;
    }
    r.tables.push_back(std::move(t));
    return r;
}

}  // namespace

std::vector<OracleCheck> oracle_checks() {
    std::vector<OracleCheck> out;

    std::vector<double> err;
    for (double tau : {0.2, 0.1, 0.05}) {
        const DriveParams p = DriveParams::from_shifted(6, 0.0, 2.0, tau);
        err.push_back(linalg::max_abs(
            MatrixXcd(expm_hermitian(bch_effective(p, 2).matrix, p.period()) - floquet_unitary(p))));
    }
    const double slope = std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));
    out.push_back({"bch_loglog_slope", 6, slope, 3.0, true});

    for (int n : {4, 6, 8, 12}) {
        const VectorXd e = bdg_quadratic_oracle(n, 1.0, 2.0, ChainBoundary::periodic);
        const VectorXd k = fermion_momenta(n);
        std::vector<double> eps;
        for (Index m = 0; m < n; ++m) eps.push_back(fermion_dispersion(n, 1.0, 2.0, k[m]));
        std::sort(eps.begin(), eps.end());
        double diff = 0.0;
        for (int m = 0; m < n; ++m) diff = std::max(diff, std::abs(e[n + m] - eps[static_cast<std::size_t>(m)]));
        out.push_back({"bdg_vs_dispersion", n, diff, 1e-10, false});
    }

    const int n = 8;
    const VectorXd formula = fermion_many_body_spectrum(n, 1.0, 2.0);
    const VectorXd ed = linalg::symmetric_eigen(rotated_ring_hamiltonian(n, 1.0, 2.0, true), false).values;
    double diff = 0.0;
    for (Index i = 0; i < ed.size(); ++i) diff = std::max(diff, std::abs(ed[i] - ed[0] - (formula[i] - formula[0])));
    out.push_back({"fermion_vs_spin_ring_ed", n, diff, 1e-8, false});
    return out;
}

Report run_scenario(const RunConfig& cfg, int workers) {
    switch (cfg.scenario()) {
        case Scenario::rstat: return run_rstat(cfg, workers);
        case Scenario::dynamics: return run_dynamics_cmd(cfg, workers);
        case Scenario::lindblad: return run_lindblad(cfg, workers);
        case Scenario::classical: return run_classical(cfg, workers);
        case Scenario::effective: return run_effective(cfg);
        case Scenario::oracle_check: return run_oracle(cfg);
    }
    throw UsageError("unknown scenario");
}

}  // namespace rydfloq::cli
