#include "rydfloq/linalg.hpp"

#include "rydfloq/error.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <string>

extern "C" void openblas_set_num_threads(int);

namespace rydfloq::linalg {

SymmetricEigen symmetric_eigen(MatrixXd a, bool want_vectors) {
    if (a.rows() != a.cols()) throw InvalidArgument("symmetric_eigen: matrix is not square");
    const auto n = static_cast<lapack_int>(a.rows());
    SymmetricEigen out;
    out.values.resize(n);
    if (n == 0) return out;
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n,
                                           a.data(), n, out.values.data());
    if (info != 0) throw NumericalError("dsyevd failed, info=" + std::to_string(info));
    if (want_vectors) out.vectors = std::move(a);
    return out;
}

HermitianEigen hermitian_eigen(MatrixXcd a, bool want_vectors) {
    if (a.rows() != a.cols()) throw InvalidArgument("hermitian_eigen: matrix is not square");
    const auto n = static_cast<lapack_int>(a.rows());
    HermitianEigen out;
    out.values.resize(n);
    if (n == 0) return out;
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n,
                                           a.data(), n, out.values.data());
    if (info != 0) throw NumericalError("zheevd failed, info=" + std::to_string(info));
    if (want_vectors) out.vectors = std::move(a);
    return out;
}

SchurForm complex_schur(MatrixXcd a) {
    if (a.rows() != a.cols()) throw InvalidArgument("complex_schur: matrix is not square");
    const auto n = static_cast<lapack_int>(a.rows());
    SchurForm out;
    out.diagonal.resize(n);
    out.vectors.resize(n, n);
    if (n == 0) return out;
    lapack_int sdim = 0;
    const lapack_int info = LAPACKE_zgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, a.data(), n, &sdim,
                                          out.diagonal.data(), out.vectors.data(), n);
    if (info != 0) throw NumericalError("zgees failed, info=" + std::to_string(info));
    double off = 0.0;
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < j; ++i) off = std::max(off, std::abs(a(i, j)));
    out.off_diagonal_norm = off;
    return out;
}

MatrixXcd expi_symmetric(const SymmetricEigen& eig, double t) {
    const MatrixXd& q = eig.vectors;
    const VectorXd c = (eig.values * t).array().cos();
    const VectorXd s = (eig.values * t).array().sin();
    const MatrixXd re = q * c.asDiagonal() * q.transpose();
    const MatrixXd im = q * s.asDiagonal() * q.transpose();
    MatrixXcd out(q.rows(), q.rows());
    out.real() = re;
    out.imag() = -im;
    return out;
}

double max_abs(const MatrixXcd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
double max_abs(const MatrixXd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double unitarity_defect(const MatrixXcd& a) {
    const MatrixXcd g = a.adjoint() * a - MatrixXcd::Identity(a.cols(), a.cols());
    return max_abs(g);
}

void set_blas_threads(int n) { openblas_set_num_threads(n < 1 ? 1 : n); }

}  // namespace rydfloq::linalg
