#pragma once

#include <Eigen/Dense>

#include <complex>

namespace rydfloq {

using cplx = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace linalg {

// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
// Backed by LAPACK dsyevd; `vectors` holds the eigenvectors column-wise when
// requested, and is empty otherwise.
struct SymmetricEigen {
    VectorXd values;
    MatrixXd vectors;
};

SymmetricEigen symmetric_eigen(MatrixXd a, bool want_vectors = true);

struct HermitianEigen {
    VectorXd values;
    MatrixXcd vectors;
};

HermitianEigen hermitian_eigen(MatrixXcd a, bool want_vectors = true);

// Complex Schur decomposition a = Z T Z^H (LAPACK zgees). For a normal matrix
// T is diagonal up to rounding and the columns of Z are orthonormal
// eigenvectors, which is how unitary matrices are diagonalized here.
struct SchurForm {
    VectorXcd diagonal;
    MatrixXcd vectors;
    double off_diagonal_norm = 0.0;
};

SchurForm complex_schur(MatrixXcd a);

// exp(-i h t) for a real symmetric h, via its eigen-decomposition.
MatrixXcd expi_symmetric(const SymmetricEigen& eig, double t);

// max_ij |a_ij|
double max_abs(const MatrixXcd& a);
double max_abs(const MatrixXd& a);

// max_ij |(a^H a - 1)_ij|
double unitarity_defect(const MatrixXcd& a);

// Pins the number of BLAS/LAPACK threads. Results of the threaded BLAS may
// depend on the thread count, so the CLI fixes it to one and parallelizes
// over independent work items instead.
void set_blas_threads(int n);

}  // namespace linalg
}  // namespace rydfloq
