#pragma once

#include "rydfloq/basis.hpp"
#include "rydfloq/linalg.hpp"
#include "rydfloq/model.hpp"

#include <functional>
#include <vector>

namespace rydfloq {

// Unitary set of eigenvectors, stored either as a dense complex matrix or in
// the factored form V = Q diag(phase) O with real orthogonal Q and O. The
// factored form halves memory and lets every product run on real BLAS.
class Eigenbasis {
public:
    Eigenbasis() = default;
    static Eigenbasis dense(MatrixXcd v);
    static Eigenbasis factored(MatrixXd q, VectorXcd phase, MatrixXd o);

    bool empty() const { return rows() == 0; }
    bool is_factored() const { return factored_; }
    Index rows() const { return factored_ ? q_.rows() : v_.rows(); }
    Index cols() const { return factored_ ? o_.cols() : v_.cols(); }

    // V C and V^H X.
    MatrixXcd apply(const MatrixXcd& c) const;
    MatrixXcd apply_adjoint(const MatrixXcd& x) const;

    // Columns [first, first + count) as a dense block.
    MatrixXcd columns(Index first, Index count) const;
    VectorXcd column(Index n) const { return columns(n, 1).col(0); }
    MatrixXcd to_dense() const { return columns(0, cols()); }

    // Visits dense column blocks of at most `block` columns, in order.
    void for_each_block(Index block,
                        const std::function<void(Index first, const MatrixXcd&)>& fn) const;

    // Reorders columns: new column i is old column perm[i].
    void permute_columns(const std::vector<Index>& perm);

private:
    bool factored_ = false;
    MatrixXcd v_;
    MatrixXd q_;
    VectorXcd phase_;
    MatrixXd o_;
};

// Products of a real matrix with a complex one, split into two real gemms.
MatrixXcd real_times_complex(const MatrixXd& a, const MatrixXcd& b);
MatrixXcd real_transpose_times_complex(const MatrixXd& a, const MatrixXcd& b);

struct FloquetSpectrum {
    VectorXd phases;  // ascending, in [0, 2 pi)
    // Columns match `phases`; coordinates are in the sector basis of
    // ParityBlocks (or the computational basis for the full space).
    Eigenbasis vectors;
    std::vector<int> parity_labels;  // empty when not requested
    Sector sector = Sector::full;
    DriveParams params{};

    Index size() const { return phases.size(); }
    bool has_vectors() const { return !vectors.empty(); }
};

// theta = -arg(lambda) mapped into [0, 2 pi), with 2 pi itself sent to 0.
double eigenphase(cplx lambda);

// e^{-i H_2' tau} e^{-i H_1 tau}, where H_2' carries the low Rabi term.
MatrixXcd floquet_unitary(const DriveParams& p);

// The same operator on one parity sector.
MatrixXcd floquet_unitary_sector(const DriveParams& p, const ParityBlocks& blocks, Sector sector);

struct SpectrumOptions {
    bool want_vectors = true;
    // Full space only: rotate degenerate subspaces into parity eigenstates
    // and fill parity_labels.
    bool parity_labels = false;
    double degeneracy_tol = 1e-9;
};

// Diagonalizes a given full-space unitary through a complex Schur form.
// Sector requests restrict U to the sector first.
FloquetSpectrum eigenphase_spectrum(const MatrixXcd& u, Sector sector, const SpinBasis& basis,
                                    const SpectrumOptions& opts = {});

// Builds the spectrum directly from the drive parameters. Both half-period
// factors are real symmetric, which makes the Floquet operator similar to a
// complex symmetric unitary whose real and imaginary parts commute; the
// eigenproblem then reduces to real symmetric ones.
FloquetSpectrum floquet_spectrum(const DriveParams& p, Sector sector, bool want_vectors = true);

// I_0 / Var(theta) over the folded phases E_k T of the undriven H_2.
// Returns +infinity when all folded phases coincide.
double undriven_phase_variance(const DriveParams& p, double normalizer);
double folded_phase_variance(const DriveParams& p);

struct PhaseHistogram {
    VectorXd centers;
    VectorXd density;  // integrates to 1 over [0, 2 pi)
};

PhaseHistogram eigenphase_histogram(const VectorXd& phases, int bins);
inline PhaseHistogram eigenphase_histogram(const FloquetSpectrum& s, int bins) {
    return eigenphase_histogram(s.phases, bins);
}

// Number of separated bands of the circular histogram: maximal runs of bins
// whose (3-bin smoothed) density exceeds `threshold` times the peak density.
int count_histogram_modes(const PhaseHistogram& h, double threshold = 0.25);

}  // namespace rydfloq
