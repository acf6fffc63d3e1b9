#pragma once

#include "rydfloq/linalg.hpp"
#include "rydfloq/model.hpp"

namespace rydfloq {

// Dense Pauli operators on an n-site chain, site counted from 1. The basis
// convention is sigma^z = 2 n - 1, so |s> is the +1 eigenstate.
MatrixXcd pauli_x(int site, int n_sites);
MatrixXcd pauli_y(int site, int n_sites);
MatrixXcd pauli_z(int site, int n_sites);

struct EffectiveHamiltonian {
    MatrixXcd matrix;
    int order = 0;
    DriveParams params{};
    double constant = 0.0;        // c = N Delta / 2 + sum_{j<k} V_jk / 4
    double boundary_field = 0.0;  // V_B = V_0 L_6(N - 2) / 4
};

// Constant c and edge field V_B of the van der Waals chain.
double bch_constant(const DriveParams& p);
double bch_boundary_field(const DriveParams& p);

// Second-order BCH series of (i/T) log(e^{-i H_2' tau} e^{-i H_1 tau}),
// with every commutator evaluated exactly on dense matrices.
EffectiveHamiltonian bch_effective(const DriveParams& p, int order);

// The closed operator form of the same series, in which the per-site
// vdW field is replaced by its infinite-chain value Delta + V_0 L_6(inf)
// and the edges are corrected by V_B. Exact only as N grows.
EffectiveHamiltonian bch_effective_explicit(const DriveParams& p, int order);

// bch_effective_explicit without the constant and the V_B edge terms.
EffectiveHamiltonian bch_effective_bulk(const DriveParams& p, int order);

// Quasiparticle energy (J/2) sqrt(1 + h^2 - 2 h cos k) of the fermionized
// nearest-neighbour model, with J = V_0 (N - 1) / N and h = Omega_0 / J.
// n_sites = kInfiniteCount drops the finite-size factor.
double fermion_dispersion(int n_sites, double omega0, double v0, double k);

// Momenta 2 pi m / N, m = 0..N-1.
VectorXd fermion_momenta(int n_sites);

// All 2^N energies sum_k eps_k (n_k - 1/2), ascending.
VectorXd fermion_many_body_spectrum(int n_sites, double omega0, double v0);

enum class ChainBoundary { open, periodic };

// All 2N eigenvalues of the Bogoliubov-de Gennes matrix of the fermionized
// model, ascending. Periodic chains carry the coupling V_0 (N - 1) / N on
// all N bonds; open chains carry V_0 on N - 1 bonds.
VectorXd bdg_quadratic_oracle(int n_sites, double omega0, double v0, ChainBoundary boundary);

// Dense Fock-space matrix of the same quadratic fermion Hamiltonian
// (periodic bonds), built from Jordan-Wigner operators.
MatrixXd fermion_fock_hamiltonian(int n_sites, double omega0, double v0);

// Dense spin matrix of the rotated nearest-neighbour ring
// sum_j Omega_0/4 sigma^x_j + sum_{j<N} J/4 sigma^z_j sigma^z_{j+1} plus the
// closing bond. With `parity_matched` the closing bond is
// -J/4 P sigma^z_N sigma^z_1, P = prod_j sigma^x_j, which is the spin image
// of periodic fermion bonds; otherwise it is the plain J/4 sigma^z_N sigma^z_1.
MatrixXd rotated_ring_hamiltonian(int n_sites, double omega0, double v0, bool parity_matched);

}  // namespace rydfloq
