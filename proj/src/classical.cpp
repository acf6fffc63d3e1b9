#include "rydfloq/classical.hpp"

#include "rydfloq/error.hpp"
#include "rydfloq/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace rydfloq {

ClassicalChain ClassicalChain::from_angles(const std::vector<double>& polar) {
    ClassicalChain c;
    c.spins.reserve(polar.size());
    for (double t : polar) c.spins.push_back({std::sin(t), 0.0, std::cos(t)});
    return c;
}

void validate_classical(const DriveParams& p) {
    if (p.n_sites < 2) throw InvalidArgument("classical chain needs at least 2 sites");
    if (p.law.kind != InteractionLaw::Kind::nearest_neighbor)
        throw InvalidArgument("classical map is defined for the nearest-neighbour law only");
    if (!(p.half_period > 0.0) || !std::isfinite(p.half_period))
        throw InvalidArgument("half_period must be positive");
    for (double v : {p.rabi_high, p.detuning, p.nn_interaction})
        if (!std::isfinite(v)) throw InvalidArgument("drive parameters must be finite");
}

namespace {

void check_chain(const ClassicalChain& c, const DriveParams& p) {
    validate_classical(p);
    if (c.size() != p.n_sites) throw InvalidArgument("chain length does not match n_sites");
}

// Rotation of v about the unit axis n by angle a (right-handed).
Spin3 rotate(const Spin3& v, const Spin3& n, double a) {
    const double c = std::cos(a), s = std::sin(a);
    const double dot = n[0] * v[0] + n[1] * v[1] + n[2] * v[2];
    const Spin3 cross{n[1] * v[2] - n[2] * v[1], n[2] * v[0] - n[0] * v[2], n[0] * v[1] - n[1] * v[0]};
    Spin3 out;
    for (int i = 0; i < 3; ++i) out[i] = c * v[i] + s * cross[i] + (1.0 - c) * dot * n[i];
    return out;
}

// dE_2/dz_j for the given neighbour z values (the factor 2 of alpha removed).
double local_field(int j, int n, const DriveParams& p, double z_left, double z_right) {
    const double v = p.nn_interaction;
    double f = 0.5 * (p.detuning + v);
    if (j > 0) f += 0.25 * v * z_left;
    if (j < n - 1) f += 0.25 * v * z_right;
    if (j == 0 || j == n - 1) f -= 0.25 * v;
    return f;
}

}  // namespace

std::vector<double> precession_frequencies(const ClassicalChain& c, const DriveParams& p) {
    check_chain(c, p);
    const int n = c.size();
    std::vector<double> alpha(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double zl = j > 0 ? c.spins[static_cast<std::size_t>(j - 1)][2] : 0.0;
        const double zr = j < n - 1 ? c.spins[static_cast<std::size_t>(j + 1)][2] : 0.0;
        alpha[static_cast<std::size_t>(j)] = 2.0 * local_field(j, n, p, zl, zr);
    }
    return alpha;
}

ClassicalChain tau1_map(const ClassicalChain& c, const DriveParams& p) {
    const auto alpha = precession_frequencies(c, p);
    const double om = p.rabi_high;
    ClassicalChain out = c;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        const double root = std::hypot(alpha[j], om);
        if (root == 0.0) continue;
        const Spin3 axis{om / root, 0.0, alpha[j] / root};
        out.spins[j] = rotate(c.spins[j], axis, 0.5 * root * p.half_period);
    }
    return out;
}

ClassicalChain tau2_map(const ClassicalChain& c, const DriveParams& p) {
    const auto alpha = precession_frequencies(c, p);
    ClassicalChain out = c;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        const double a = 0.5 * alpha[j] * p.half_period;
        const double cs = std::cos(a), sn = std::sin(a);
        const Spin3& s = c.spins[j];
        out.spins[j] = {cs * s[0] - sn * s[1], sn * s[0] + cs * s[1], s[2]};
    }
    return out;
}

ClassicalChain floquet_map(const ClassicalChain& c, const DriveParams& p) {
    return tau2_map(tau1_map(c, p), p);
}

double classical_diagonal_energy(const ClassicalChain& c, const DriveParams& p) {
    check_chain(c, p);
    const int n = c.size();
    const double v = p.nn_interaction;
    double e = 0.0;
    for (int j = 0; j < n; ++j) e += 0.5 * (p.detuning + v) * c.spins[static_cast<std::size_t>(j)][2];
    for (int j = 0; j + 1 < n; ++j)
        e += 0.25 * v * c.spins[static_cast<std::size_t>(j)][2] * c.spins[static_cast<std::size_t>(j + 1)][2];
    e -= 0.25 * v * (c.spins.front()[2] + c.spins.back()[2]);
    return e;
}

double classical_energy(const ClassicalChain& c, const DriveParams& p) {
    double e = classical_diagonal_energy(c, p);
    for (const auto& s : c.spins) e += 0.25 * p.rabi_high * s[0];
    return e;
}

namespace {

struct Descent {
    std::vector<double> polar;
    double energy = 0.0;
    int sweeps = 0;
    bool converged = false;
};

Descent descend(const DriveParams& p, std::vector<double> t, double tol, int max_sweeps) {
    const int n = p.n_sites;
    const double a = 0.25 * p.rabi_high;
    std::vector<double> z(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) z[j] = std::cos(t[j]);
    auto energy = [&] { return classical_energy(ClassicalChain::from_angles(t), p); };

    Descent d;
    double e = energy();
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        for (int j = 0; j < n; ++j) {
            const double zl = j > 0 ? z[static_cast<std::size_t>(j - 1)] : 0.0;
            const double zr = j < n - 1 ? z[static_cast<std::size_t>(j + 1)] : 0.0;
            const double b = local_field(j, n, p, zl, zr);
            // Site energy a sin t + b cos t is minimal at (sin t, cos t) = -(a, b)/|(a, b)|.
            if (a == 0.0 && b == 0.0) continue;
            t[static_cast<std::size_t>(j)] = std::atan2(-a, -b);
            z[static_cast<std::size_t>(j)] = std::cos(t[static_cast<std::size_t>(j)]);
        }
        const double next = energy();
        d.sweeps = sweep;
        const bool done = e - next < tol;
        e = next;
        if (done) {
            d.converged = true;
            break;
        }
    }
    d.polar = std::move(t);
    d.energy = e;
    return d;
}

}  // namespace

ClassicalGroundState classical_ground_state(const DriveParams& p, double tol, int max_sweeps) {
    validate_classical(p);
    if (!(tol > 0.0) || max_sweeps < 1) throw InvalidArgument("classical_ground_state: bad tolerance or sweep cap");
    const int n = p.n_sites;
    const double pi = std::numbers::pi;
    const auto un = static_cast<std::size_t>(n);

    std::vector<std::vector<double>> starts;
    starts.emplace_back(un, 0.0);
    starts.emplace_back(un, pi);
    starts.emplace_back(un, -0.5 * pi);
    for (int phase = 0; phase < 2; ++phase) {
        std::vector<double> neel(un);
        for (int j = 0; j < n; ++j) neel[static_cast<std::size_t>(j)] = (j + phase) % 2 ? pi : 0.0;
        starts.push_back(std::move(neel));
    }
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int r = 0; r < 4; ++r) {
        std::vector<double> s(un);
        for (auto& x : s) x = angle(rng);
        starts.push_back(std::move(s));
    }

    Descent best;
    best.energy = std::numeric_limits<double>::infinity();
    bool all_converged = true;
    for (auto& s : starts) {
        Descent d = descend(p, std::move(s), tol, max_sweeps);
        all_converged = all_converged && d.converged;
        if (d.energy < best.energy) best = std::move(d);
    }
    ClassicalGroundState g;
    g.chain = ClassicalChain::from_angles(best.polar);
    g.polar = std::move(best.polar);
    g.energy = best.energy;
    g.sweeps = best.sweeps;
    g.converged = all_converged;
    return g;
}

std::vector<double> realization_energies(const DriveParams& p, const ClassicalGroundState& gs, long n_periods,
                                         double amplitude, std::uint64_t seed, std::uint64_t r) {
    validate_classical(p);
    if (n_periods < 0) throw InvalidArgument("realization_energies: n_periods must be >= 0");
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw InvalidArgument("realization_energies: amplitude must be non-negative");
    if (gs.polar.size() != static_cast<std::size_t>(p.n_sites))
        throw InvalidArgument("realization_energies: ground state does not match n_sites");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> noise(-amplitude, amplitude);
    std::vector<double> t = gs.polar;
    if (amplitude > 0.0)
        for (auto& x : t) x += noise(rng);
    ClassicalChain c = ClassicalChain::from_angles(t);
    std::vector<double> e(static_cast<std::size_t>(n_periods) + 1);
    e[0] = classical_energy(c, p);
    for (std::size_t n = 1; n < e.size(); ++n) {
        c = floquet_map(c, p);
        e[n] = classical_energy(c, p);
    }
    return e;
}

NoiseEnsembleResult ensemble_statistics(const std::vector<std::vector<double>>& energies, double ground_energy) {
    if (energies.empty()) throw InvalidArgument("ensemble_statistics: need at least one realization");
    if (!(ground_energy < 0.0))
        throw InvalidArgument("ensemble_statistics: ground energy " + std::to_string(ground_energy) +
                              " is not negative, Q is undefined");
    const std::size_t steps = energies.front().size();
    for (const auto& e : energies)
        if (e.size() != steps) throw InvalidArgument("ensemble_statistics: series lengths differ");
    const auto runs = static_cast<double>(energies.size());

    NoiseEnsembleResult res;
    res.ground_energy = ground_energy;
    res.realizations = static_cast<int>(energies.size());
    res.q.resize(steps);
    res.dq.resize(steps);
    res.mean_energy.resize(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        double mean = 0.0;
        for (const auto& e : energies) mean += e[n];
        mean /= runs;
        double var = 0.0;
        for (const auto& e : energies) var += (e[n] - mean) * (e[n] - mean);
        var /= runs;
        res.mean_energy[n] = mean;
        res.q[n] = (mean - ground_energy) / (-ground_energy);
        res.dq[n] = std::sqrt(var);
    }
    return res;
}

NoiseEnsembleResult noise_averaged_heating(const DriveParams& p, long n_periods, int realizations,
                                           double amplitude, std::uint64_t seed, int workers) {
    validate_classical(p);
    if (n_periods < 0) throw InvalidArgument("noise_averaged_heating: n_periods must be >= 0");
    if (realizations < 1) throw InvalidArgument("noise_averaged_heating: need at least one realization");
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw InvalidArgument("noise_averaged_heating: amplitude must be non-negative");

    const ClassicalGroundState gs = classical_ground_state(p);
    if (!(gs.energy < 0.0))
        throw InvalidArgument("noise_averaged_heating: ground energy " + std::to_string(gs.energy) +
                              " is not negative, Q is undefined");

    std::vector<std::vector<double>> energies(static_cast<std::size_t>(realizations));
    parallel_for(energies.size(), workers, [&](std::size_t r) {
        energies[r] = realization_energies(p, gs, n_periods, amplitude, seed, r);
    });
    NoiseEnsembleResult res = ensemble_statistics(energies, gs.energy);
    res.amplitude = amplitude;
    res.seed = seed;
    return res;
}

}  // namespace rydfloq
