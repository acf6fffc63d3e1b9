#pragma once

#include "rydfloq/linalg.hpp"
#include "rydfloq/model.hpp"

#include <vector>

namespace rydfloq {

// |psi><psi|
MatrixXcd density_from_state(const VectorXcd& psi);

// -i[H, rho] + gamma sum_j (s_j rho s_j^+ - {n_j, rho}/2) with s_j the
// lowering operator |g><s| on site j and n_j = |s><s|_j.
MatrixXcd lindblad_rhs(const MatrixXcd& rho, const MatrixXcd& h, double gamma, int n_sites);

struct DensityChecks {
    double trace_error = 0.0;        // |Tr rho - 1|
    double hermiticity_error = 0.0;  // max |rho - rho^H|
    double min_eigenvalue = 0.0;     // only filled when requested
};

DensityChecks check_density(const MatrixXcd& rho, bool with_spectrum);

enum class MasterFrame {
    lab,
    // Rotating with the diagonal H_2. The fast diagonal phases are then exact
    // and only the drive and decay terms are stepped.
    interaction,
};

enum class MasterScheme {
    // Classic fourth-order Runge-Kutta on the full generator.
    rk4,
    // Per step dt: exact decay channel for dt/2, exact unitary for dt, exact
    // decay channel for dt/2. Second order in dt, completely positive at any
    // step, and applied blockwise in the reflection sectors. Meant for the
    // long N = 10, 12 runs where rk4 is too slow.
    split,
};

// Exact single-site amplitude damping with rate gamma for time t on every
// site, applied in place.
void apply_decay_channel(MatrixXcd& rho, double gamma, double t, int n_sites);

struct MasterOptions {
    // 0 selects tau / 200 for rk4 and tau for split; rounded so an integer
    // number of steps fits in tau.
    double dt = 0.0;
    MasterScheme scheme = MasterScheme::rk4;
    MasterFrame frame = MasterFrame::interaction;  // rk4 only
    long spectrum_every = 0;  // positivity check period (0: final state only)
    double trace_tolerance = 1e-6;
};

struct MasterResult {
    double gamma = 0.0;
    double dt = 0.0;  // the step actually used
    std::vector<long> period;
    std::vector<double> sz;
    std::vector<double> trace_error;
    std::vector<double> hermiticity_error;
    std::vector<long> spectrum_period;
    std::vector<double> min_eigenvalue;
    MatrixXcd final_rho;
};

// Integration of the master equation under the square-wave drive,
// recording observables at every period boundary (n = 0 included). Throws NumericalError when the trace drifts beyond
// `trace_tolerance`.
MasterResult evolve_master(const DriveParams& p, double gamma, const MatrixXcd& rho0,
                           long n_periods, const MasterOptions& opts = {});
MasterResult evolve_master(const DriveParams& p, double gamma, const VectorXcd& psi0,
                           long n_periods, const MasterOptions& opts = {});

}  // namespace rydfloq
