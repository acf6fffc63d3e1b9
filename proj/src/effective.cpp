#include "rydfloq/effective.hpp"

#include "rydfloq/basis.hpp"
#include "rydfloq/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rydfloq {

namespace {

Index dim_of(int n_sites) {
    if (n_sites < 1 || n_sites > 12) throw InvalidArgument("dense operators support 1 to 12 sites");
    return Index{1} << n_sites;
}

void check_site(int site, int n_sites) {
    if (site < 1 || site > n_sites) throw InvalidArgument("site out of range");
}

MatrixXcd commutator(const MatrixXcd& a, const MatrixXcd& b) { return a * b - b * a; }

}  // namespace

MatrixXcd pauli_x(int site, int n_sites) {
    const Index d = dim_of(n_sites);
    check_site(site, n_sites);
    const Index b = Index{1} << (site - 1);
    MatrixXcd m = MatrixXcd::Zero(d, d);
    for (Index k = 0; k < d; ++k) m(k ^ b, k) = 1.0;
    return m;
}

MatrixXcd pauli_y(int site, int n_sites) {
    const Index d = dim_of(n_sites);
    check_site(site, n_sites);
    const Index b = Index{1} << (site - 1);
    MatrixXcd m = MatrixXcd::Zero(d, d);
    // sigma^y |g> = -i |s>, sigma^y |s> = i |g>
    for (Index k = 0; k < d; ++k) m(k ^ b, k) = (k & b) ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
    return m;
}

MatrixXcd pauli_z(int site, int n_sites) {
    const Index d = dim_of(n_sites);
    check_site(site, n_sites);
    const Index b = Index{1} << (site - 1);
    MatrixXcd m = MatrixXcd::Zero(d, d);
    for (Index k = 0; k < d; ++k) m(k, k) = (k & b) ? 1.0 : -1.0;
    return m;
}

double bch_constant(const DriveParams& p) {
    const InteractionMatrix v(p);
    double pairs = 0.0;
    for (int j = 0; j < p.n_sites; ++j)
        for (int k = j + 1; k < p.n_sites; ++k) pairs += v(j, k);
    return 0.5 * p.n_sites * p.detuning + 0.25 * pairs;
}

double bch_boundary_field(const DriveParams& p) {
    if (p.n_sites < 2) return 0.0;
    return 0.25 * p.nn_interaction * harmonic_number(6, p.n_sites - 2);
}

EffectiveHamiltonian bch_effective(const DriveParams& p, int order) {
    if (order < 0 || order > 2) throw InvalidArgument("bch_effective: order must be 0, 1 or 2");
    p.validate();
    const double tau = p.half_period;
    const MatrixXcd h1 = build_h1_matrix(p, p.rabi_high).cast<cplx>();
    const MatrixXcd h2 = build_h1_matrix(p, p.rabi_low).cast<cplx>();

    EffectiveHamiltonian out;
    out.order = order;
    out.params = p;
    out.constant = bch_constant(p);
    out.boundary_field = bch_boundary_field(p);
    out.matrix = 0.5 * (h1 + h2);
    if (order >= 1) {
        const MatrixXcd c21 = commutator(h2, h1);
        out.matrix += cplx(0.0, -0.25 * tau) * c21;
        if (order >= 2)
            out.matrix -= (tau * tau / 24.0) * (commutator(h2, c21) + commutator(h1, commutator(h1, h2)));
    }
    // Commutator products are Hermitian only up to rounding.
    out.matrix = 0.5 * (out.matrix + out.matrix.adjoint()).eval();
    return out;
}

namespace {

EffectiveHamiltonian explicit_form(const DriveParams& p, int order, bool with_boundary) {
    if (order < 0 || order > 2) throw InvalidArgument("bch_effective: order must be 0, 1 or 2");
    p.validate();
    if (!p.law.is_van_der_waals())
        throw InvalidArgument("explicit effective Hamiltonian is defined for the van der Waals law only");
    const int n = p.n_sites;
    const Index d = dim_of(n);
    const double om = p.rabi_high;
    const double tau = p.half_period;
    const double x1 = order >= 1 ? om * tau : 0.0;             // Omega tau
    const double x2 = order >= 2 ? om * om * tau * tau : 0.0;  // (Omega tau)^2
    const double field = p.detuning + p.nn_interaction * std::pow(std::numbers::pi, 6) / 945.0;
    const InteractionMatrix v(p);

    std::vector<MatrixXcd> sx, sy, sz;
    for (int j = 1; j <= n; ++j) {
        sx.push_back(pauli_x(j, n));
        sy.push_back(pauli_y(j, n));
        sz.push_back(pauli_z(j, n));
    }

    EffectiveHamiltonian out;
    out.order = order;
    out.params = p;
    out.constant = bch_constant(p);
    out.boundary_field = bch_boundary_field(p);
    MatrixXcd h = MatrixXcd::Zero(d, d);
    if (with_boundary) {
        const double vb = out.boundary_field;
        h += out.constant * MatrixXcd::Identity(d, d);
        h -= (x1 * vb / 4.0) * (sy[0] + sy[n - 1]);
        h -= (1.0 - x2 / 24.0) * vb * (sz[0] + sz[n - 1]);
    }
    for (int j = 0; j < n; ++j) {
        h += (om / 4.0) * sx[j];
        h += (x1 / 8.0) * field * sy[j];
        h += (0.5 - x2 / 48.0) * field * sz[j];
    }
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const double w = v(j, k) / 4.0;
            if (w == 0.0) continue;
            h += w * (1.0 - x2 / 12.0) * (sz[j] * sz[k]);
            h += w * (x1 / 4.0) * (sy[j] * sz[k] + sy[k] * sz[j]);
            h += w * (x2 / 12.0) * (sy[j] * sy[k]);
        }
    }
    out.matrix = std::move(h);
    return out;
}

}  // namespace

EffectiveHamiltonian bch_effective_explicit(const DriveParams& p, int order) {
    return explicit_form(p, order, true);
}

EffectiveHamiltonian bch_effective_bulk(const DriveParams& p, int order) {
    return explicit_form(p, order, false);
}

double fermion_dispersion(int n_sites, double omega0, double v0, double k) {
    if (v0 == 0.0) throw InvalidArgument("fermion_dispersion: v0 = 0 is the free-spin limit");
    double j = v0;
    if (n_sites != kInfiniteCount) {
        if (n_sites < 2) throw InvalidArgument("fermion_dispersion: need at least 2 sites");
        j = v0 * (n_sites - 1) / n_sites;
    }
    const double h = omega0 / j;
    // max() guards 1 + h^2 - 2h cos k against rounding below zero at h = 1, k = 0.
    return 0.5 * std::abs(j) * std::sqrt(std::max(0.0, 1.0 + h * h - 2.0 * h * std::cos(k)));
}

VectorXd fermion_momenta(int n_sites) {
    if (n_sites < 2) throw InvalidArgument("fermion_momenta: need at least 2 sites");
    VectorXd k(n_sites);
    for (int m = 0; m < n_sites; ++m) k[m] = 2.0 * std::numbers::pi * m / n_sites;
    return k;
}

VectorXd fermion_many_body_spectrum(int n_sites, double omega0, double v0) {
    if (n_sites < 2 || n_sites > 20) throw InvalidArgument("fermion_many_body_spectrum: N must lie in [2, 20]");
    const VectorXd k = fermion_momenta(n_sites);
    VectorXd eps(n_sites);
    for (int m = 0; m < n_sites; ++m) eps[m] = fermion_dispersion(n_sites, omega0, v0, k[m]);
    const double ground = -0.5 * eps.sum();
    const Index count = Index{1} << n_sites;
    VectorXd e(count);
    for (Index occ = 0; occ < count; ++occ) {
        double s = ground;
        for (int m = 0; m < n_sites; ++m)
            if (occ & (Index{1} << m)) s += eps[m];
        e[occ] = s;
    }
    std::sort(e.data(), e.data() + e.size());
    return e;
}

VectorXd bdg_quadratic_oracle(int n_sites, double omega0, double v0, ChainBoundary boundary) {
    if (n_sites < 2 || n_sites > 64) throw InvalidArgument("bdg_quadratic_oracle: N must lie in [2, 64]");
    const int n = n_sites;
    const bool periodic = boundary == ChainBoundary::periodic;
    const double j = periodic ? v0 * (n - 1) / n : v0;
    MatrixXd a = MatrixXd::Zero(n, n);
    MatrixXd b = MatrixXd::Zero(n, n);
    for (int s = 0; s < n; ++s) a(s, s) = -0.5 * omega0;
    const int bonds = periodic ? n : n - 1;
    for (int s = 0; s < bonds; ++s) {
        const int t = (s + 1) % n;
        a(s, t) += 0.25 * j;
        a(t, s) += 0.25 * j;
        b(s, t) += 0.25 * j;
        b(t, s) -= 0.25 * j;
    }
    MatrixXd bdg(2 * n, 2 * n);
    bdg << a, b, -b, -a;
    return linalg::symmetric_eigen(bdg, false).values;
}

MatrixXd fermion_fock_hamiltonian(int n_sites, double omega0, double v0) {
    if (n_sites < 2 || n_sites > 12) throw InvalidArgument("fermion_fock_hamiltonian: N must lie in [2, 12]");
    const int n = n_sites;
    const Index d = Index{1} << n;
    const double j = v0 * (n - 1) / n;

    // Fermion operators in the occupation basis, mode m = bit m, ordered so
    // that c_m carries the sign (-1)^(number of occupied modes below m).
    auto sign_below = [](Index occ, int m) {
        return (SpinBasis::popcount(static_cast<BasisIndex>(occ & ((Index{1} << m) - 1))) & 1) ? -1.0 : 1.0;
    };
    std::vector<MatrixXd> c(static_cast<std::size_t>(n), MatrixXd::Zero(d, d));
    for (int m = 0; m < n; ++m) {
        const Index bit = Index{1} << m;
        for (Index occ = 0; occ < d; ++occ)
            if (occ & bit) c[static_cast<std::size_t>(m)](occ ^ bit, occ) = sign_below(occ, m);
    }

    MatrixXd h = MatrixXd::Zero(d, d);
    for (int m = 0; m < n; ++m) {
        const MatrixXd& cm = c[static_cast<std::size_t>(m)];
        h += 0.25 * omega0 * (MatrixXd::Identity(d, d) - 2.0 * cm.transpose() * cm);
    }
    for (int s = 0; s < n; ++s) {
        const MatrixXd& cs = c[static_cast<std::size_t>(s)];
        const MatrixXd& ct = c[static_cast<std::size_t>((s + 1) % n)];
        h += 0.25 * j *
             (cs.transpose() * ct.transpose() + ct.transpose() * cs + cs.transpose() * ct + ct * cs);
    }
    return h;
}

MatrixXd rotated_ring_hamiltonian(int n_sites, double omega0, double v0, bool parity_matched) {
    if (n_sites < 2 || n_sites > 12) throw InvalidArgument("rotated_ring_hamiltonian: N must lie in [2, 12]");
    const int n = n_sites;
    const Index d = Index{1} << n;
    const double j = v0 * (n - 1) / n;
    auto z = [](Index k, int site) { return (k >> site) & 1 ? 1.0 : -1.0; };
    MatrixXd h = MatrixXd::Zero(d, d);
    for (Index k = 0; k < d; ++k) {
        for (int s = 0; s < n; ++s) h(k ^ (Index{1} << s), k) += 0.25 * omega0;
        for (int s = 0; s + 1 < n; ++s) h(k, k) += 0.25 * j * z(k, s) * z(k, s + 1);
        const double edge = 0.25 * j * z(k, n - 1) * z(k, 0);
        if (parity_matched)
            h(k ^ (d - 1), k) -= edge;
        else
            h(k, k) += edge;
    }
    return h;
}

}  // namespace rydfloq
