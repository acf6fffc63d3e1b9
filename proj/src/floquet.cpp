#include "rydfloq/floquet.hpp"

#include "rydfloq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace rydfloq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Irrational mixing weight for S = A + c B; any value works unless two
// distinct eigenvalues happen to share a + c b, which the cluster refinement
// below takes care of.
constexpr double kMix = 0.6180339887498949;

VectorXd sector_diagonal(const VectorXd& full, const ParityBlocks& blocks, Sector s) {
    if (s == Sector::full) return full;
    VectorXd d(blocks.sector_dim(s));
    for (Index i = 0; i < d.size(); ++i) d[i] = full[blocks.orbit(s, i).first];
    return d;
}

std::vector<Index> sorting_permutation(const VectorXd& v) {
    std::vector<Index> perm(static_cast<std::size_t>(v.size()));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::stable_sort(perm.begin(), perm.end(), [&](Index a, Index b) { return v[a] < v[b]; });
    return perm;
}

VectorXd permuted(const VectorXd& v, const std::vector<Index>& perm) {
    VectorXd out(v.size());
    for (std::size_t i = 0; i < perm.size(); ++i) out[static_cast<Index>(i)] = v[perm[i]];
    return out;
}

}  // namespace

Eigenbasis Eigenbasis::dense(MatrixXcd v) {
    Eigenbasis e;
    e.v_ = std::move(v);
    return e;
}

Eigenbasis Eigenbasis::factored(MatrixXd q, VectorXcd phase, MatrixXd o) {
    if (q.cols() != phase.size() || o.rows() != phase.size())
        throw InvalidArgument("Eigenbasis::factored: inconsistent factor shapes");
    Eigenbasis e;
    e.factored_ = true;
    e.q_ = std::move(q);
    e.phase_ = std::move(phase);
    e.o_ = std::move(o);
    return e;
}

MatrixXcd real_times_complex(const MatrixXd& a, const MatrixXcd& b) {
    const MatrixXd re = a * MatrixXd(b.real());
    const MatrixXd im = a * MatrixXd(b.imag());
    MatrixXcd out(re.rows(), re.cols());
    out.real() = re;
    out.imag() = im;
    return out;
}

MatrixXcd real_transpose_times_complex(const MatrixXd& a, const MatrixXcd& b) {
    const MatrixXd re = a.transpose() * MatrixXd(b.real());
    const MatrixXd im = a.transpose() * MatrixXd(b.imag());
    MatrixXcd out(re.rows(), re.cols());
    out.real() = re;
    out.imag() = im;
    return out;
}

MatrixXcd Eigenbasis::apply(const MatrixXcd& c) const {
    if (c.rows() != cols()) throw InvalidArgument("Eigenbasis::apply: dimension mismatch");
    if (!factored_) return v_ * c;
    MatrixXcd t = real_times_complex(o_, c);
    t = phase_.asDiagonal() * t;
    return real_times_complex(q_, t);
}

MatrixXcd Eigenbasis::apply_adjoint(const MatrixXcd& x) const {
    if (x.rows() != rows()) throw InvalidArgument("Eigenbasis::apply_adjoint: dimension mismatch");
    if (!factored_) return v_.adjoint() * x;
    MatrixXcd t = real_transpose_times_complex(q_, x);
    t = phase_.conjugate().asDiagonal() * t;
    return real_transpose_times_complex(o_, t);
}

MatrixXcd Eigenbasis::columns(Index first, Index count) const {
    if (first < 0 || count < 0 || first + count > cols())
        throw InvalidArgument("Eigenbasis::columns: range out of bounds");
    if (!factored_) return v_.middleCols(first, count);
    const MatrixXcd t = phase_.asDiagonal() * o_.middleCols(first, count).cast<cplx>();
    return real_times_complex(q_, t);
}

void Eigenbasis::for_each_block(Index block,
                                const std::function<void(Index, const MatrixXcd&)>& fn) const {
    if (block < 1) throw InvalidArgument("Eigenbasis::for_each_block: block must be positive");
    for (Index first = 0; first < cols(); first += block) {
        const Index count = std::min(block, cols() - first);
        fn(first, columns(first, count));
    }
}

void Eigenbasis::permute_columns(const std::vector<Index>& perm) {
    if (static_cast<Index>(perm.size()) != cols())
        throw InvalidArgument("Eigenbasis::permute_columns: size mismatch");
    if (factored_) {
        MatrixXd o(o_.rows(), o_.cols());
        for (std::size_t i = 0; i < perm.size(); ++i) o.col(static_cast<Index>(i)) = o_.col(perm[i]);
        o_ = std::move(o);
    } else {
        MatrixXcd v(v_.rows(), v_.cols());
        for (std::size_t i = 0; i < perm.size(); ++i) v.col(static_cast<Index>(i)) = v_.col(perm[i]);
        v_ = std::move(v);
    }
}

double eigenphase(cplx lambda) {
    double t = -std::arg(lambda);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

namespace {

MatrixXcd compose_unitary(const DriveParams& p, const MatrixXd& h1, const MatrixXd& h2_low,
                          const VectorXd& h2_diag) {
    const double tau = p.half_period;
    const MatrixXcd u1 = linalg::expi_symmetric(linalg::symmetric_eigen(h1), tau);
    if (p.rabi_low == 0.0) {
        VectorXcd d(h2_diag.size());
        for (Index k = 0; k < d.size(); ++k) d[k] = std::polar(1.0, -h2_diag[k] * tau);
        return d.asDiagonal() * u1;
    }
    const MatrixXcd u2 = linalg::expi_symmetric(linalg::symmetric_eigen(h2_low), tau);
    return u2 * u1;
}

}  // namespace

MatrixXcd floquet_unitary(const DriveParams& p) {
    p.validate();
    const MatrixXd h1 = build_h1_matrix(p, p.rabi_high);
    const MatrixXd h2 = p.rabi_low == 0.0 ? MatrixXd() : build_h1_matrix(p, p.rabi_low);
    return compose_unitary(p, h1, h2, build_h2_diagonal(p));
}

MatrixXcd floquet_unitary_sector(const DriveParams& p, const ParityBlocks& blocks, Sector sector) {
    p.validate();
    const MatrixXd h1 = build_h1_sector(p, p.rabi_high, blocks, sector);
    const MatrixXd h2 =
        p.rabi_low == 0.0 ? MatrixXd() : build_h1_sector(p, p.rabi_low, blocks, sector);
    return compose_unitary(p, h1, h2, sector_diagonal(build_h2_diagonal(p), blocks, sector));
}

FloquetSpectrum eigenphase_spectrum(const MatrixXcd& u, Sector sector, const SpinBasis& basis,
                                    const SpectrumOptions& opts) {
    if (u.rows() != basis.dimension() || u.cols() != basis.dimension())
        throw InvalidArgument("eigenphase_spectrum: matrix does not match the basis");
    const ParityBlocks blocks(basis);
    MatrixXcd us = sector == Sector::full ? u : blocks.restrict(u, sector);
    const double defect = linalg::unitarity_defect(us);
    if (defect > 1e-8)
        throw NumericalError("eigenphase_spectrum: input is not unitary (defect " +
                             std::to_string(defect) + ")");

    auto schur = linalg::complex_schur(std::move(us));
    VectorXd theta(schur.diagonal.size());
    for (Index k = 0; k < theta.size(); ++k) theta[k] = eigenphase(schur.diagonal[k]);
    const auto perm = sorting_permutation(theta);

    FloquetSpectrum out;
    out.sector = sector;
    out.phases = permuted(theta, perm);
    if (!opts.want_vectors && !opts.parity_labels) return out;

    out.vectors = Eigenbasis::dense(std::move(schur.vectors));
    out.vectors.permute_columns(perm);

    if (opts.parity_labels) {
        const Index d = out.size();
        if (sector != Sector::full) {
            out.parity_labels.assign(static_cast<std::size_t>(d), sector == Sector::even ? 1 : -1);
        } else {
            MatrixXcd v = out.vectors.to_dense();
            out.parity_labels.resize(static_cast<std::size_t>(d));
            for (Index first = 0; first < d;) {
                Index last = first + 1;
                while (last < d && out.phases[last] - out.phases[last - 1] < opts.degeneracy_tol) ++last;
                const Index m = last - first;
                if (m == 1) {
                    const VectorXcd pv = apply_parity(v.col(first), basis);
                    out.parity_labels[static_cast<std::size_t>(first)] =
                        v.col(first).dot(pv).real() >= 0.0 ? 1 : -1;
                } else {
                    auto res = resolve_degenerate_parity(v.middleCols(first, m), basis);
                    v.middleCols(first, m) = res.vectors;
                    for (Index c = 0; c < m; ++c)
                        out.parity_labels[static_cast<std::size_t>(first + c)] =
                            res.labels[static_cast<std::size_t>(c)];
                }
                first = last;
            }
            out.vectors = Eigenbasis::dense(std::move(v));
        }
    }
    if (!opts.want_vectors) out.vectors = Eigenbasis();
    return out;
}

FloquetSpectrum floquet_spectrum(const DriveParams& p, Sector sector, bool want_vectors) {
    p.validate();
    const SpinBasis basis(p.n_sites);
    const ParityBlocks blocks(basis);
    const double tau = p.half_period;

    MatrixXd q;
    VectorXd e;
    {
        auto eig = linalg::symmetric_eigen(build_h1_sector(p, p.rabi_high, blocks, sector));
        q = std::move(eig.vectors);
        e = std::move(eig.values);
    }
    const Index n = e.size();

    // G = Q^T e^{-i H_2' tau} Q, real part in gr, imaginary part in gi.
    MatrixXd gr, gi;
    {
        MatrixXd m;
        VectorXd h;
        if (p.rabi_low == 0.0) {
            m = q.transpose();
            h = sector_diagonal(build_h2_diagonal(p), blocks, sector);
        } else {
            auto eig2 = linalg::symmetric_eigen(build_h1_sector(p, p.rabi_low, blocks, sector));
            m = q.transpose() * eig2.vectors;
            h = std::move(eig2.values);
        }
        MatrixXd scaled = m * (h * tau).array().cos().matrix().asDiagonal();
        gr.noalias() = scaled * m.transpose();
        scaled = m * (-(h * tau).array().sin()).matrix().asDiagonal();
        gi.noalias() = scaled * m.transpose();
    }

    // W = D G D with D = diag(e^{-i E tau / 2}); afterwards gr holds Re W and
    // gi holds S = Re W + c Im W.
    VectorXcd d(n);
    for (Index k = 0; k < n; ++k) d[k] = std::polar(1.0, -0.5 * e[k] * tau);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const cplx w = d[i] * d[j] * cplx(gr(i, j), gi(i, j));
            gr(i, j) = w.real();
            gi(i, j) = w.real() + kMix * w.imag();
        }
    }
    MatrixXd& a = gr;
    // Symmetrize against rounding before the symmetric solver reads one triangle.
    a = 0.5 * (a + a.transpose()).eval();

    auto seig = linalg::symmetric_eigen(std::move(gi));
    MatrixXd o = std::move(seig.vectors);
    const VectorXd& s = seig.values;

    // Rayleigh quotients a_k = o_k^T A o_k, computed in column blocks.
    VectorXd av(n);
    constexpr Index kBlock = 256;
    for (Index first = 0; first < n; first += kBlock) {
        const Index count = std::min(kBlock, n - first);
        const MatrixXd ao = a * o.middleCols(first, count);
        for (Index c = 0; c < count; ++c) av[first + c] = o.col(first + c).dot(ao.col(c));
    }

    // Near-equal values of S may hide distinct eigenvalues of W; split them
    // with A restricted to the cluster.
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    for (Index first = 0; first < n;) {
        Index last = first + 1;
        while (last < n && s[last] - s[last - 1] < 1e-9 * scale) ++last;
        const Index m = last - first;
        if (m > 1) {
            const MatrixXd oc = o.middleCols(first, m);
            MatrixXd ac = oc.transpose() * a * oc;
            ac = 0.5 * (ac + ac.transpose()).eval();
            auto ceig = linalg::symmetric_eigen(ac);
            o.middleCols(first, m) = oc * ceig.vectors;
            av.segment(first, m) = ceig.values;
        }
        first = last;
    }

    VectorXd theta(n);
    for (Index k = 0; k < n; ++k) {
        const double b = (s[k] - av[k]) / kMix;
        theta[k] = eigenphase(cplx(av[k], b));
    }
    const auto perm = sorting_permutation(theta);

    FloquetSpectrum out;
    out.sector = sector;
    out.params = p;
    out.phases = permuted(theta, perm);
    if (sector != Sector::full)
        out.parity_labels.assign(static_cast<std::size_t>(n), sector == Sector::even ? 1 : -1);
    if (want_vectors) {
        // U = (Q D*) W (Q D*)^{-1}, so the eigenvectors are Q D* O.
        out.vectors = Eigenbasis::factored(std::move(q), d.conjugate(), std::move(o));
        out.vectors.permute_columns(perm);
    }
    return out;
}

double folded_phase_variance(const DriveParams& p) {
    const VectorXd h2 = build_h2_diagonal(p);
    const double t = p.period();
    VectorXd theta(h2.size());
    for (Index k = 0; k < h2.size(); ++k) {
        double x = std::fmod(h2[k] * t + std::numbers::pi, kTwoPi);
        if (x < 0.0) x += kTwoPi;
        theta[k] = x - std::numbers::pi;
    }
    const double mean = theta.mean();
    return (theta.array() - mean).square().mean();
}

double undriven_phase_variance(const DriveParams& p, double normalizer) {
    if (!(normalizer > 0.0)) throw InvalidArgument("undriven_phase_variance: normalizer must be positive");
    const double var = folded_phase_variance(p);
    if (var < 1e-20) return std::numeric_limits<double>::infinity();
    return normalizer / var;
}

PhaseHistogram eigenphase_histogram(const VectorXd& phases, int bins) {
    if (bins < 8) throw InvalidArgument("eigenphase_histogram: need at least 8 bins");
    if (phases.size() == 0) throw InvalidArgument("eigenphase_histogram: no phases");
    const double width = kTwoPi / bins;
    PhaseHistogram h;
    h.centers.resize(bins);
    h.density = VectorXd::Zero(bins);
    for (int b = 0; b < bins; ++b) h.centers[b] = (b + 0.5) * width;
    for (Index k = 0; k < phases.size(); ++k) {
        auto b = static_cast<int>(std::floor(phases[k] / width));
        b = std::clamp(b, 0, bins - 1);
        h.density[b] += 1.0;
    }
    h.density /= static_cast<double>(phases.size()) * width;
    return h;
}

int count_histogram_modes(const PhaseHistogram& h, double threshold) {
    const Index n = h.density.size();
    if (n < 3) throw InvalidArgument("count_histogram_modes: histogram too short");
    VectorXd sm(n);
    for (Index b = 0; b < n; ++b)
        sm[b] = (h.density[(b + n - 1) % n] + h.density[b] + h.density[(b + 1) % n]) / 3.0;
    const double cut = threshold * sm.maxCoeff();
    std::vector<bool> above(static_cast<std::size_t>(n));
    for (Index b = 0; b < n; ++b) above[static_cast<std::size_t>(b)] = sm[b] > cut;
    int runs = 0;
    for (Index b = 0; b < n; ++b) {
        const bool prev = above[static_cast<std::size_t>((b + n - 1) % n)];
        if (above[static_cast<std::size_t>(b)] && !prev) ++runs;
    }
    // Every bin above the cut: one band wrapping the whole circle.
    if (runs == 0 && above[0]) runs = 1;
    return runs;
}

}  // namespace rydfloq
