#include "rydfloq/open_system.hpp"

#include "rydfloq/basis.hpp"
#include "rydfloq/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace rydfloq {

MatrixXcd density_from_state(const VectorXcd& psi) { return psi * psi.adjoint(); }

namespace {

// rho_out += gamma sum_j s_j rho s_j^+ - (gamma/2) (pop_k + pop_l) rho_kl
void add_decay(const MatrixXcd& rho, double gamma, int n_sites, MatrixXcd& out) {
    const Index dim = rho.rows();
    for (Index l = 0; l < dim; ++l) {
        const int pl = SpinBasis::popcount(static_cast<BasisIndex>(l));
        for (Index k = 0; k < dim; ++k) {
            const int pk = SpinBasis::popcount(static_cast<BasisIndex>(k));
            out(k, l) -= 0.5 * gamma * (pk + pl) * rho(k, l);
        }
        for (int j = 0; j < n_sites; ++j) {
            const Index b = Index{1} << j;
            if (l & b) continue;
            for (Index k = 0; k < dim; ++k)
                if (!(k & b)) out(k, l) += gamma * rho(k | b, l | b);
        }
    }
}

}  // namespace

MatrixXcd lindblad_rhs(const MatrixXcd& rho, const MatrixXcd& h, double gamma, int n_sites) {
    const Index dim = Index{1} << n_sites;
    if (rho.rows() != dim || rho.cols() != dim || h.rows() != dim || h.cols() != dim)
        throw InvalidArgument("lindblad_rhs: dimension mismatch");
    if (gamma < 0.0) throw InvalidArgument("lindblad_rhs: gamma must be non-negative");
    const cplx mi(0.0, -1.0);
    MatrixXcd out = mi * (h * rho - rho * h);
    if (gamma > 0.0) add_decay(rho, gamma, n_sites, out);
    return out;
}

DensityChecks check_density(const MatrixXcd& rho, bool with_spectrum) {
    DensityChecks c;
    c.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
    c.hermiticity_error = linalg::max_abs(MatrixXcd(rho - rho.adjoint()));
    if (with_spectrum) {
        const MatrixXcd herm = 0.5 * (rho + rho.adjoint());
        c.min_eigenvalue = linalg::hermitian_eigen(herm, false).values.minCoeff();
    }
    return c;
}

void apply_decay_channel(MatrixXcd& rho, double gamma, double t, int n_sites) {
    const Index dim = Index{1} << n_sites;
    if (rho.rows() != dim || rho.cols() != dim) throw InvalidArgument("apply_decay_channel: dimension mismatch");
    if (gamma < 0.0 || t < 0.0) throw InvalidArgument("apply_decay_channel: gamma and t must be non-negative");
    if (gamma == 0.0 || t == 0.0) return;
    // Kraus operators |g><g| + sqrt(1-p)|s><s| and sqrt(p)|g><s| per site.
    const double p = -std::expm1(-gamma * t);
    const double keep = std::sqrt(1.0 - p);
    for (int j = 0; j < n_sites; ++j) {
        const Index b = Index{1} << j;
        for (Index l = 0; l < dim; ++l) {
            cplx* col = rho.data() + l * dim;
            if (l & b) {
                for (Index k = 0; k < dim; ++k) col[k] *= (k & b) ? 1.0 - p : keep;
            } else {
                const cplx* up = rho.data() + (l | b) * dim;
                for (Index k = 0; k < dim; ++k) {
                    if (k & b)
                        col[k] *= keep;
                    else
                        col[k] += p * up[k | b];
                }
            }
        }
    }
}

namespace {

// Right-hand side of the master equation for the square-wave model, applied
// column by column without forming the Hamiltonian. In the interaction frame
// rho is rotated to the lab frame by diagonal phases, the drive and decay
// terms are applied there and the result is rotated back.
class PiecewiseGenerator {
public:
    PiecewiseGenerator(const DriveParams& p, double gamma, MasterFrame frame)
        : n_(p.n_sites),
          dim_(Index{1} << p.n_sites),
          gamma_(gamma),
          frame_(frame),
          h2_(build_h2_diagonal(p)),
          pop_(static_cast<std::size_t>(dim_)),
          phase_(dim_),
          lab_(frame == MasterFrame::interaction ? dim_ : 0, frame == MasterFrame::interaction ? dim_ : 0),
          flips_(dim_) {
        for (Index k = 0; k < dim_; ++k) pop_[static_cast<std::size_t>(k)] = SpinBasis::popcount(static_cast<BasisIndex>(k));
    }

    // out = L(t)[rho] for drive amplitude `rabi`; t is the frame time.
    void operator()(const MatrixXcd& rho, double rabi, double t, MatrixXcd& out) {
        if (frame_ == MasterFrame::lab) {
            apply(rho, rabi, true, out);
            return;
        }
        for (Index k = 0; k < dim_; ++k) phase_[k] = std::polar(1.0, -h2_[k] * t);
        rotate(rho, lab_, false);
        apply(lab_, rabi, false, out);
        rotate(out, out, true);
    }

    // rho_lab = e^{-i H_2 t} rho_rot e^{i H_2 t}
    void to_lab(MatrixXcd& rho, double t) {
        for (Index k = 0; k < dim_; ++k) phase_[k] = std::polar(1.0, -h2_[k] * t);
        rotate(rho, rho, false);
    }

private:
    // dst = P src P^H with P = diag(phase_), or P^H src P when `inverse`.
    void rotate(const MatrixXcd& src, MatrixXcd& dst, bool inverse) const {
        for (Index l = 0; l < dim_; ++l) {
            const cplx pl = inverse ? phase_[l] : std::conj(phase_[l]);
            const cplx* s = src.data() + l * dim_;
            cplx* d = dst.data() + l * dim_;
            if (inverse) {
                for (Index k = 0; k < dim_; ++k) d[k] = std::conj(phase_[k]) * pl * s[k];
            } else {
                for (Index k = 0; k < dim_; ++k) d[k] = phase_[k] * pl * s[k];
            }
        }
    }

    // out = -i[(rabi/2) sum_j sigma^x_j (+ H_2 if with_h2), rho] + decay
    void apply(const MatrixXcd& rho, double rabi, bool with_h2, MatrixXcd& out) {
        const cplx a(0.0, -0.5 * rabi);
        const double g2 = 0.5 * gamma_;
        const Index dim = dim_;
        cplx* f = flips_.data();

        for (Index l = 0; l < dim; ++l) {
            const cplx* col = rho.data() + l * dim;
            cplx* o = out.data() + l * dim;
            const double hl = h2_[l];
            const int pl = pop_[static_cast<std::size_t>(l)];
            if (with_h2) {
                for (Index k = 0; k < dim; ++k)
                    o[k] = cplx(-g2 * (pop_[static_cast<std::size_t>(k)] + pl), -(h2_[k] - hl)) * col[k];
            } else {
                for (Index k = 0; k < dim; ++k) o[k] = -g2 * (pop_[static_cast<std::size_t>(k)] + pl) * col[k];
            }

            if (rabi != 0.0) {
                // f = sum_j (sigma^x_j rho - rho sigma^x_j) restricted to column l
                for (Index k = 0; k < dim; ++k) f[k] = 0.0;
                for (int j = 0; j < n_; ++j) {
                    const Index b = Index{1} << j;
                    const cplx* colb = rho.data() + (l ^ b) * dim;
                    for (Index base = 0; base < dim; base += 2 * b) {
                        for (Index i = base; i < base + b; ++i) {
                            f[i] += col[i + b] - colb[i];
                            f[i + b] += col[i] - colb[i + b];
                        }
                    }
                }
                for (Index k = 0; k < dim; ++k) o[k] += a * f[k];
            }

            if (gamma_ > 0.0) {
                for (int j = 0; j < n_; ++j) {
                    const Index b = Index{1} << j;
                    if (l & b) continue;
                    const cplx* colb = rho.data() + (l | b) * dim;
                    for (Index base = 0; base < dim; base += 2 * b)
                        for (Index i = base; i < base + b; ++i) o[i] += gamma_ * colb[i + b];
                }
            }
        }
    }

    int n_;
    Index dim_;
    double gamma_;
    MasterFrame frame_;
    VectorXd h2_;
    std::vector<int> pop_;
    VectorXcd phase_;
    MatrixXcd lab_;
    VectorXcd flips_;
};

double sz_of(const MatrixXcd& rho, int n_sites) {
    double s = 0.0;
    for (Index k = 0; k < rho.rows(); ++k)
        s += rho(k, k).real() * (2.0 * SpinBasis::popcount(static_cast<BasisIndex>(k)) - n_sites);
    return s / n_sites;
}

}  // namespace

namespace {

// Orthogonal change of basis T from the computational basis to the
// reflection sectors, even columns first. Every state has at most one even
// and one odd partner column, so T is applied in O(D^2).
class SectorFrame {
public:
    explicit SectorFrame(int n_sites) : blocks_(SpinBasis(n_sites)) {
        const Index dim = blocks_.dimension();
        de_ = blocks_.even_dim();
        ie_.assign(static_cast<std::size_t>(dim), -1);
        io_.assign(static_cast<std::size_t>(dim), -1);
        ae_.assign(static_cast<std::size_t>(dim), 0.0);
        ao_.assign(static_cast<std::size_t>(dim), 0.0);
        constexpr double kInvSqrt2 = 0.70710678118654752440;
        for (Index i = 0; i < de_; ++i) {
            const auto& o = blocks_.orbit(Sector::even, i);
            const bool pal = o.first == o.second;
            ie_[o.first] = ie_[o.second] = i;
            ae_[o.first] = ae_[o.second] = pal ? 1.0 : kInvSqrt2;
        }
        for (Index i = 0; i < blocks_.odd_dim(); ++i) {
            const auto& o = blocks_.orbit(Sector::odd, i);
            io_[o.first] = io_[o.second] = de_ + i;
            ao_[o.first] = kInvSqrt2;
            ao_[o.second] = -kInvSqrt2;
        }
    }

    const ParityBlocks& blocks() const { return blocks_; }
    Index even_dim() const { return de_; }

    // out = T^T in T
    void forward(const MatrixXcd& in, MatrixXcd& out, MatrixXcd& scratch) const {
        const Index dim = in.rows();
        scratch.setZero(dim, dim);
        for (Index k = 0; k < dim; ++k) {
            scratch.col(ie_[k]) += ae_[k] * in.col(k);
            if (io_[k] >= 0) scratch.col(io_[k]) += ao_[k] * in.col(k);
        }
        out.setZero(dim, dim);
        for (Index c = 0; c < dim; ++c) {
            const cplx* z = scratch.data() + c * dim;
            cplx* o = out.data() + c * dim;
            for (Index k = 0; k < dim; ++k) {
                o[ie_[k]] += ae_[k] * z[k];
                if (io_[k] >= 0) o[io_[k]] += ao_[k] * z[k];
            }
        }
    }

    // out = T in T^T
    void backward(const MatrixXcd& in, MatrixXcd& out, MatrixXcd& scratch) const {
        const Index dim = in.rows();
        scratch.resize(dim, dim);
        for (Index k = 0; k < dim; ++k) {
            scratch.col(k) = ae_[k] * in.col(ie_[k]);
            if (io_[k] >= 0) scratch.col(k) += ao_[k] * in.col(io_[k]);
        }
        out.resize(dim, dim);
        for (Index c = 0; c < dim; ++c) {
            const cplx* z = scratch.data() + c * dim;
            cplx* o = out.data() + c * dim;
            for (Index k = 0; k < dim; ++k) {
                o[k] = ae_[k] * z[ie_[k]];
                if (io_[k] >= 0) o[k] += ao_[k] * z[io_[k]];
            }
        }
    }

private:
    ParityBlocks blocks_;
    Index de_ = 0;
    std::vector<Index> ie_, io_;
    std::vector<double> ae_, ao_;
};

// Exact propagator of one drive segment over a step dt, by sector.
struct SegmentPropagator {
    bool diagonal = false;
    VectorXcd phases;  // diagonal case: e^{-i h_k dt}
    MatrixXcd even, odd;
};

SegmentPropagator make_segment(const DriveParams& p, double rabi, double dt, const SectorFrame& frame) {
    SegmentPropagator s;
    if (rabi == 0.0) {
        const VectorXd h = build_h2_diagonal(p);
        s.diagonal = true;
        s.phases.resize(h.size());
        for (Index k = 0; k < h.size(); ++k) s.phases[k] = std::polar(1.0, -h[k] * dt);
        return s;
    }
    s.even = linalg::expi_symmetric(linalg::symmetric_eigen(build_h1_sector(p, rabi, frame.blocks(), Sector::even)), dt);
    s.odd = linalg::expi_symmetric(linalg::symmetric_eigen(build_h1_sector(p, rabi, frame.blocks(), Sector::odd)), dt);
    return s;
}

class SplitStepper {
public:
    SplitStepper(const DriveParams& p, double gamma, double dt, const MatrixXcd& rho0)
        : n_(p.n_sites), gamma_(gamma), dt_(dt), frame_(p.n_sites) {
        high_ = make_segment(p, p.rabi_high, dt, frame_);
        low_ = make_segment(p, p.rabi_low, dt, frame_);

        // A reflection-symmetric state keeps zero even-odd blocks for all
        // times, since every step commutes with the reflection.
        frame_.forward(rho0, blocked_, scratch_);
        const Index de = frame_.even_dim(), dout = rho0.rows() - de;
        const double off = std::max(linalg::max_abs(MatrixXcd(blocked_.topRightCorner(de, dout))),
                                    linalg::max_abs(MatrixXcd(blocked_.bottomLeftCorner(dout, de))));
        symmetric_ = off <= 1e-14;
    }

    // Decay for dt/2, unitary for dt, decay for dt/2. The trailing half is
    // deferred and merged with the next step; flush() applies it.
    void step(MatrixXcd& rho, bool high) {
        const SegmentPropagator& u = high ? high_ : low_;
        apply_decay_channel(rho, gamma_, pending_ + 0.5 * dt_, n_);
        if (u.diagonal) {
            for (Index l = 0; l < rho.cols(); ++l) {
                const cplx pl = std::conj(u.phases[l]);
                for (Index k = 0; k < rho.rows(); ++k) rho(k, l) *= u.phases[k] * pl;
            }
        } else {
            frame_.forward(rho, blocked_, scratch_);
            conjugate(u);
            frame_.backward(blocked_, rho, scratch_);
        }
        pending_ = 0.5 * dt_;
    }

    void flush(MatrixXcd& rho) {
        apply_decay_channel(rho, gamma_, pending_, n_);
        pending_ = 0.0;
    }

    // Smallest eigenvalue, taken per block when the state is symmetric.
    double min_eigenvalue(const MatrixXcd& rho) {
        frame_.forward(rho, blocked_, scratch_);
        auto lowest = [](const MatrixXcd& m) {
            const MatrixXcd h = 0.5 * (m + m.adjoint());
            return linalg::hermitian_eigen(h, false).values.minCoeff();
        };
        const Index de = frame_.even_dim(), dout = rho.rows() - de;
        if (!symmetric_ || dout == 0) return lowest(blocked_);
        return std::min(lowest(blocked_.topLeftCorner(de, de)), lowest(blocked_.bottomRightCorner(dout, dout)));
    }

private:
    void conjugate(const SegmentPropagator& u) {
        const Index de = frame_.even_dim(), dout = blocked_.rows() - de;
        auto apply = [&](Index r0, Index rn, const MatrixXcd& ur, Index c0, Index cn, const MatrixXcd& uc) {
            auto blk = blocked_.block(r0, c0, rn, cn);
            work_.noalias() = ur * blk;
            blk.noalias() = work_ * uc.adjoint();
        };
        apply(0, de, u.even, 0, de, u.even);
        if (dout == 0) return;
        apply(de, dout, u.odd, de, dout, u.odd);
        if (!symmetric_) {
            apply(0, de, u.even, de, dout, u.odd);
            apply(de, dout, u.odd, 0, de, u.even);
        }
    }

    int n_;
    double gamma_;
    double dt_;
    SectorFrame frame_;
    SegmentPropagator high_, low_;
    MatrixXcd blocked_, scratch_, work_;
    bool symmetric_ = false;
    double pending_ = 0.0;
};

}  // namespace

MasterResult evolve_master(const DriveParams& p, double gamma, const MatrixXcd& rho0,
                           long n_periods, const MasterOptions& opts) {
    p.validate();
    const Index dim = Index{1} << p.n_sites;
    if (rho0.rows() != dim || rho0.cols() != dim)
        throw InvalidArgument("evolve_master: initial state does not match the chain");
    if (gamma < 0.0) throw InvalidArgument("evolve_master: gamma must be non-negative");
    if (n_periods < 1) throw InvalidArgument("evolve_master: n_periods must be >= 1");
    const bool split = opts.scheme == MasterScheme::split;
    const double tau = p.half_period;
    const double want = opts.dt > 0.0 ? opts.dt : (split ? tau : tau / 200.0);
    const long steps = std::max(1L, std::lround(tau / want));
    const double dt = tau / static_cast<double>(steps);

    MasterResult res;
    res.gamma = gamma;
    res.dt = dt;
    MatrixXcd rho = rho0;

    std::unique_ptr<SplitStepper> splitter;
    if (split) splitter = std::make_unique<SplitStepper>(p, gamma, dt, rho0);

    auto record = [&](long n, bool spectrum) {
        auto c = check_density(rho, spectrum && !split);
        if (spectrum && split) c.min_eigenvalue = splitter->min_eigenvalue(rho);
        res.period.push_back(n);
        res.sz.push_back(sz_of(rho, p.n_sites));
        res.trace_error.push_back(c.trace_error);
        res.hermiticity_error.push_back(c.hermiticity_error);
        if (spectrum) {
            res.spectrum_period.push_back(n);
            res.min_eigenvalue.push_back(c.min_eigenvalue);
        }
        if (!std::isfinite(c.trace_error) || c.trace_error > opts.trace_tolerance)
            throw NumericalError("evolve_master: trace drifted by " + std::to_string(c.trace_error) +
                                 " after " + std::to_string(n) + " periods with dt = " +
                                 std::to_string(dt) + "; reduce the step");
    };

    record(0, opts.spectrum_every > 0);
    if (split) {
        for (long n = 1; n <= n_periods; ++n) {
            for (long s = 0; s < steps; ++s) splitter->step(rho, true);
            for (long s = 0; s < steps; ++s) splitter->step(rho, false);
            splitter->flush(rho);
            record(n, n == n_periods || (opts.spectrum_every > 0 && n % opts.spectrum_every == 0));
        }
        res.final_rho = std::move(rho);
        return res;
    }

    PiecewiseGenerator gen(p, gamma, opts.frame);
    MatrixXcd acc(dim, dim), tmp(dim, dim), k(dim, dim);
    auto step = [&](double rabi, double t) {
        gen(rho, rabi, t, k);
        acc = k;
        tmp = rho + (0.5 * dt) * k;
        gen(tmp, rabi, t + 0.5 * dt, k);
        acc += 2.0 * k;
        tmp = rho + (0.5 * dt) * k;
        gen(tmp, rabi, t + 0.5 * dt, k);
        acc += 2.0 * k;
        tmp = rho + dt * k;
        gen(tmp, rabi, t + dt, k);
        acc += k;
        rho += (dt / 6.0) * acc;
    };

    const bool rotating = opts.frame == MasterFrame::interaction;
    for (long n = 1; n <= n_periods; ++n) {
        for (long s = 0; s < steps; ++s) step(p.rabi_high, s * dt);
        const bool idle = rotating && p.rabi_low == 0.0 && gamma == 0.0;
        if (!idle)
            for (long s = 0; s < steps; ++s) step(p.rabi_low, tau + s * dt);
        if (rotating) gen.to_lab(rho, 2.0 * tau);
        const bool spectrum =
            n == n_periods || (opts.spectrum_every > 0 && n % opts.spectrum_every == 0);
        record(n, spectrum);
    }
    res.final_rho = std::move(rho);
    return res;
}

MasterResult evolve_master(const DriveParams& p, double gamma, const VectorXcd& psi0,
                           long n_periods, const MasterOptions& opts) {
    return evolve_master(p, gamma, density_from_state(psi0), n_periods, opts);
}

}  // namespace rydfloq
