#pragma once

#include "rydfloq/basis.hpp"
#include "rydfloq/floquet.hpp"
#include "rydfloq/model.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace rydfloq {

enum class InitialKind { phi0, phi1, all_rydberg, custom };

// phi0 = |g...g>, phi1 = |+ g + g ...> with |+> on sites 1, 3, ...,
// all_rydberg = |s...s>, custom = the given bitstring.
VectorXcd initial_state(InitialKind kind, const SpinBasis& basis, std::string_view bits = {});
// Accepts "phi0", "phi1", "all_rydberg" or a bitstring.
VectorXcd initial_state(std::string_view name, const SpinBasis& basis);

// (1/N) sum_j <sigma^z_j>
double sz_expectation(const VectorXcd& psi, const SpinBasis& basis);
// <sigma^z_j>, site j counted from 1.
double site_sz(const VectorXcd& psi, const SpinBasis& basis, int site);
// Diagonal of sigma^z_j and of (1/N) sum_j sigma^z_j.
VectorXd sigma_z_diagonal(const SpinBasis& basis, int site);
VectorXd total_sz_diagonal(const SpinBasis& basis);

// Von Neumann entropy (nats) of the leftmost `cut` sites.
double entanglement_entropy(const VectorXcd& psi, int cut, const SpinBasis& basis);
// (N/2) ln 2 - 1/2; only the half-chain cut is defined.
double page_value(int n_sites, int cut);

// <psi|H_a|psi>
double energy_avg(const VectorXcd& psi, const DriveParams& p, const VectorXd& h2_diag);

VectorXcd apply_sigma_x(const VectorXcd& psi, int site);
VectorXcd apply_sigma_z(const VectorXcd& psi, int site);

// Stroboscopic propagation psi(n) = U^n psi(0) of several states at once.
class Evolver {
public:
    virtual ~Evolver() = default;
    using Visitor = std::function<void(long n, const std::vector<VectorXcd>& states)>;
    // `times` must be ascending and non-negative; the visitor sees the states
    // in the same order as `initial`.
    virtual void evolve(const std::vector<VectorXcd>& initial, const std::vector<long>& times,
                        const Visitor& visit) const = 0;
    virtual int n_sites() const = 0;
};

// Repeated products with an explicit Floquet matrix.
class DenseEvolver : public Evolver {
public:
    DenseEvolver(MatrixXcd u, int n_sites);
    void evolve(const std::vector<VectorXcd>& initial, const std::vector<long>& times,
                const Visitor& visit) const override;
    int n_sites() const override { return n_sites_; }

private:
    MatrixXcd u_;
    int n_sites_;
};

// Phase powers in the Floquet eigenbasis, one parity sector at a time.
// Sector spectra are built on first use and cached.
class SpectralEvolver : public Evolver {
public:
    explicit SpectralEvolver(const DriveParams& p, bool use_parity = true);
    void evolve(const std::vector<VectorXcd>& initial, const std::vector<long>& times,
                const Visitor& visit) const override;
    int n_sites() const override { return params_.n_sites; }

    const FloquetSpectrum& spectrum(Sector s) const;
    const ParityBlocks& blocks() const { return blocks_; }
    bool uses_parity() const { return use_parity_; }

private:
    DriveParams params_;
    bool use_parity_;
    ParityBlocks blocks_;
    mutable std::mutex mutex_;
    mutable std::map<Sector, std::shared_ptr<const FloquetSpectrum>> cache_;
};

enum class ObservableKind { sz, energy_avg, entropy, edge, autocorr, autocorr_global, norm };

struct Observable {
    ObservableKind kind = ObservableKind::sz;
    int site = 0;  // entropy: cut size (0 = half chain); autocorr: site from 1

    std::string tag(int n_sites) const;
};

// "sz", "energy_avg", "entropy_half", "entropy:<cut>", "edge",
// "autocorr:<site>", "autocorr_global", "norm".
Observable parse_observable(std::string_view tag);

struct ObservableSeries {
    std::string tag;
    std::vector<long> period;
    std::vector<double> values;
};

// Sample times 0, stride, 2 stride, ... up to n_periods (which is always
// included).
std::vector<long> sample_times(long n_periods, long stride);

std::vector<ObservableSeries> run_dynamics(const Evolver& evolver, const DriveParams& p,
                                           const VectorXcd& psi0, const std::vector<long>& times,
                                           const std::vector<Observable>& observables);

// Applies U n times to psi0 and records the observables after each period,
// starting with n = 0.
std::vector<ObservableSeries> stroboscopic_evolve(const MatrixXcd& u, const DriveParams& p,
                                                  const VectorXcd& psi0, long n_periods,
                                                  const std::vector<Observable>& observables);

// |A_1^x|(n) = |<psi(0)| sigma^x_1(nT) sigma^x_1 |psi(0)>|
ObservableSeries edge_correlator(const Evolver& evolver, const VectorXcd& psi0,
                                 const std::vector<long>& times);
// Re <psi(0)| sigma^z_j(nT) sigma^z_j |psi(0)>, site from 1.
ObservableSeries autocorrelation(const Evolver& evolver, const VectorXcd& psi0, int site,
                                 const std::vector<long>& times);

struct WindowStats {
    double mean = 0.0;
    double stddev = 0.0;
    Index count = 0;
};

// Mean and spread of the samples with lo <= n <= hi.
WindowStats window_average(const ObservableSeries& s, long lo, long hi);

// (1/D) sum_a |<phi_a|A|phi_a>|^2 for A given in the basis of the vectors.
double mazur_bound(const MatrixXcd& a, const FloquetSpectrum& spec);
// The same for an operator diagonal in the computational basis, summed over
// the eigenstates of every given sector spectrum (D = total count).
double mazur_bound(const VectorXd& a_diag, const std::vector<const FloquetSpectrum*>& spectra,
                   const ParityBlocks& blocks);

struct Projections {
    VectorXd basis_weights;  // |<k|psi>|^2
    VectorXd eigen_weights;  // |<theta_n|psi>|^2 for the spectrum's eigenstates
};

Projections pca_projections(const VectorXcd& psi, const FloquetSpectrum& spec,
                            const ParityBlocks& blocks);

struct EntropyMap {
    VectorXd phases;
    VectorXd entropies;
    double low_fraction = 0.0;  // share of eigenstates with S < Page value / 2
};

EntropyMap eigenstate_entropy_map(const FloquetSpectrum& spec, const ParityBlocks& blocks);

}  // namespace rydfloq
