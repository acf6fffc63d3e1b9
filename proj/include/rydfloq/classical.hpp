#pragma once

#include "rydfloq/model.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace rydfloq {

using Spin3 = std::array<double, 3>;

struct ClassicalChain {
    std::vector<Spin3> spins;  // (x, y, z) per site, unit length

    int size() const { return static_cast<int>(spins.size()); }
    // Spins (sin t, 0, cos t) in the xz-plane.
    static ClassicalChain from_angles(const std::vector<double>& polar);
};

// The classical model keeps nearest-neighbour couplings only and accepts
// any chain length >= 2. rabi_low is ignored; the second half-period is
// the bare diagonal part.
void validate_classical(const DriveParams& p);

// Precession frequency alpha_j = 2 dE_2/dz_j of every site, taken from the
// current configuration.
std::vector<double> precession_frequencies(const ClassicalChain& c, const DriveParams& p);

// First half-period: rotation about (Omega_0, 0, alpha_j)/sqrt(D) by
// sqrt(D) tau / 2, D = alpha_j^2 + Omega_0^2.
ClassicalChain tau1_map(const ClassicalChain& c, const DriveParams& p);

// Second half-period: rotation about z by alpha_j tau / 2.
ClassicalChain tau2_map(const ClassicalChain& c, const DriveParams& p);

// tau2 after tau1.
ClassicalChain floquet_map(const ClassicalChain& c, const DriveParams& p);

// Energy of the time-averaged Hamiltonian evaluated on spin vectors.
double classical_energy(const ClassicalChain& c, const DriveParams& p);

// Energy of the diagonal part only (Omega_0 terms dropped).
double classical_diagonal_energy(const ClassicalChain& c, const DriveParams& p);

struct ClassicalGroundState {
    ClassicalChain chain;
    std::vector<double> polar;  // angle from +z towards +x per site
    double energy = 0.0;
    int sweeps = 0;  // sweeps of the best start
    bool converged = false;
};

// Per-site coordinate descent over xz-plane angles from several starts,
// stopping when a sweep lowers the energy by less than `tol`. If some start
// hits `max_sweeps` the best configuration found is returned with
// converged = false.
ClassicalGroundState classical_ground_state(const DriveParams& p, double tol = 1e-12,
                                            int max_sweeps = 100000);

struct NoiseEnsembleResult {
    std::vector<double> q;          // (<E> - E_GS) / (-E_GS), index n = 0..n_periods
    std::vector<double> dq;         // sqrt(<E^2> - <E>^2) across realizations
    std::vector<double> mean_energy;
    double ground_energy = 0.0;
    int realizations = 0;
    double amplitude = 0.0;
    std::uint64_t seed = 0;
};

inline constexpr double kDefaultNoiseAmplitude = 0.031415926535897934;  // pi / 100

// Energy series E(nT), n = 0..n_periods, of realization r: the ground-state
// angles plus uniform noise in [-amplitude, amplitude] drawn from a stream
// seeded by (seed, r), iterated by the stroboscopic map.
std::vector<double> realization_energies(const DriveParams& p, const ClassicalGroundState& gs, long n_periods,
                                         double amplitude, std::uint64_t seed, std::uint64_t r);

// Q and dQ per period from one energy series per realization.
NoiseEnsembleResult ensemble_statistics(const std::vector<std::vector<double>>& energies, double ground_energy);

// Ensemble of `realizations` noisy copies of the ground state, r = 0..R-1,
// reduced in realization order, so results do not depend on `workers`.
NoiseEnsembleResult noise_averaged_heating(const DriveParams& p, long n_periods, int realizations,
                                           double amplitude, std::uint64_t seed, int workers = 1);

}  // namespace rydfloq
