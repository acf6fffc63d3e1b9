#pragma once

#include "rydfloq/basis.hpp"
#include "rydfloq/linalg.hpp"

#include <numbers>
#include <string>
#include <string_view>

namespace rydfloq {

// Pair interaction as a function of site separation.
struct InteractionLaw {
    enum class Kind { power, nearest_neighbor, all_to_all };
    Kind kind = Kind::power;
    double alpha = 6.0;  // exponent of the power law; 6 is van der Waals

    static InteractionLaw van_der_waals() { return {}; }
    static InteractionLaw power(double a) { return {Kind::power, a}; }
    static InteractionLaw nearest_neighbor() { return {Kind::nearest_neighbor, 0.0}; }
    static InteractionLaw all_to_all() { return {Kind::all_to_all, 0.0}; }

    bool is_van_der_waals() const { return kind == Kind::power && alpha == 6.0; }
    std::string describe() const;
};

// Parses "vdw", "nn", "all", "power:<alpha>".
InteractionLaw parse_interaction_law(std::string_view s);

// All physical knobs of the square-wave driven chain, in units of the high
// Rabi frequency (energies) and its inverse (times).
struct DriveParams {
    int n_sites = 1;
    double rabi_high = 1.0;  // Rabi frequency during [0, tau)
    double rabi_low = 0.0;   // Rabi frequency during [tau, 2 tau)
    double half_period = std::numbers::pi;
    double detuning = 0.0;
    double nn_interaction = 2.0;
    InteractionLaw law{};

    double period() const { return 2.0 * half_period; }
    // Delta_0 = Delta + V_0, the control parameter of the resonances.
    double shifted_detuning() const { return detuning + nn_interaction; }

    // Throws InvalidArgument when an invariant is broken.
    void validate() const;

    static DriveParams from_shifted(int n_sites, double delta0, double v0, double tau) {
        DriveParams p;
        p.n_sites = n_sites;
        p.nn_interaction = v0;
        p.detuning = delta0 - v0;
        p.half_period = tau;
        return p;
    }
};

// Symmetric N x N table of pair interactions with a zero diagonal.
class InteractionMatrix {
public:
    InteractionMatrix(int n_sites, double v0, const InteractionLaw& law);
    explicit InteractionMatrix(const DriveParams& p)
        : InteractionMatrix(p.n_sites, p.nn_interaction, p.law) {}

    double operator()(int j, int k) const { return v_(j, k); }
    const MatrixXd& table() const { return v_; }

private:
    MatrixXd v_;
};

// Diagonal of H_2 = Delta sum_j n_j + sum_{j<k} V_jk n_j n_k.
VectorXd build_h2_diagonal(const DriveParams& p);

// Dense (rabi/2) sum_j sigma^x_j + H_2, real symmetric.
MatrixXd build_h1_matrix(const DriveParams& p, double rabi);

// The same operator restricted to a parity sector, assembled without
// forming the full matrix.
MatrixXd build_h1_sector(const DriveParams& p, double rabi, const ParityBlocks& blocks,
                         Sector sector);

// (H_1 + H_2)/2 with the high Rabi frequency.
MatrixXd averaged_hamiltonian(const DriveParams& p);

// Matrix-free products on full-space vectors.
VectorXcd apply_sigma_x_sum(const VectorXcd& psi, int n_sites);
VectorXcd apply_diagonal(const VectorXd& diag, const VectorXcd& psi);
// H_a psi with H_a = (rabi_high/4) sum sigma^x + H_2.
VectorXcd apply_averaged_hamiltonian(const DriveParams& p, const VectorXd& h2_diag,
                                     const VectorXcd& psi);

// L_n(M) = sum_{j=1}^M j^{-n}. `kInfiniteCount` selects the zeta value.
inline constexpr int kInfiniteCount = -1;
double harmonic_number(int order, int count);

// epsilon_N = <ss...s|H_2|ss...s> by the harmonic-number closed form
// (van der Waals law only).
double all_rydberg_energy(const DriveParams& p);

}  // namespace rydfloq
