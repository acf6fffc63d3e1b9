#include "rydfloq/model.hpp"

#include "rydfloq/error.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace rydfloq {

std::string InteractionLaw::describe() const {
    switch (kind) {
        case Kind::power:
            if (alpha == 6.0) return "vdw";
            {
                std::ostringstream os;
                os << "power:" << alpha;
                return os.str();
            }
        case Kind::nearest_neighbor: return "nn";
        case Kind::all_to_all: return "all";
    }
    return "?";
}

InteractionLaw parse_interaction_law(std::string_view s) {
    if (s == "vdw") return InteractionLaw::van_der_waals();
    if (s == "nn") return InteractionLaw::nearest_neighbor();
    if (s == "all") return InteractionLaw::all_to_all();
    if (s.substr(0, 6) == "power:") {
        const std::string num(s.substr(6));
        std::size_t used = 0;
        double a = 0.0;
        try {
            a = std::stod(num, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != num.size() || num.empty())
            throw InvalidArgument("bad interaction exponent '" + num + "'");
        return InteractionLaw::power(a);
    }
    throw InvalidArgument("unknown interaction law '" + std::string(s) +
                          "' (expected vdw, nn, all or power:<alpha>)");
}

void DriveParams::validate() const {
    if (n_sites < 1 || n_sites > SpinBasis::kMaxSites)
        throw InvalidArgument("n_sites must lie in [1, " + std::to_string(SpinBasis::kMaxSites) + "]");
    if (!(half_period > 0.0) || !std::isfinite(half_period))
        throw InvalidArgument("half_period must be positive");
    if (law.kind == InteractionLaw::Kind::power && !(law.alpha > 0.0))
        throw InvalidArgument("power-law exponent must be positive");
    for (double v : {rabi_high, rabi_low, detuning, nn_interaction})
        if (!std::isfinite(v)) throw InvalidArgument("drive parameters must be finite");
}

InteractionMatrix::InteractionMatrix(int n_sites, double v0, const InteractionLaw& law)
    : v_(MatrixXd::Zero(n_sites, n_sites)) {
    for (int j = 0; j < n_sites; ++j) {
        for (int k = j + 1; k < n_sites; ++k) {
            const int d = k - j;
            double v = 0.0;
            switch (law.kind) {
                case InteractionLaw::Kind::power:
                    v = v0 / std::pow(static_cast<double>(d), law.alpha);
                    break;
                case InteractionLaw::Kind::nearest_neighbor: v = d == 1 ? v0 : 0.0; break;
                case InteractionLaw::Kind::all_to_all: v = v0; break;
            }
            v_(j, k) = v;
            v_(k, j) = v;
        }
    }
}

VectorXd build_h2_diagonal(const DriveParams& p) {
    p.validate();
    const InteractionMatrix v(p);
    const int n = p.n_sites;
    const Index dim = Index{1} << n;
    VectorXd diag(dim);
    for (Index k = 0; k < dim; ++k) {
        const auto kk = static_cast<BasisIndex>(k);
        double e = p.detuning * SpinBasis::popcount(kk);
        for (int j = 0; j < n; ++j) {
            if (!SpinBasis::occupied(kk, j)) continue;
            for (int l = j + 1; l < n; ++l)
                if (SpinBasis::occupied(kk, l)) e += v(j, l);
        }
        diag[k] = e;
    }
    return diag;
}

MatrixXd build_h1_matrix(const DriveParams& p, double rabi) {
    const VectorXd diag = build_h2_diagonal(p);
    const Index dim = diag.size();
    MatrixXd h = MatrixXd::Zero(dim, dim);
    h.diagonal() = diag;
    const double half = 0.5 * rabi;
    for (Index k = 0; k < dim; ++k)
        for (int j = 0; j < p.n_sites; ++j) h(k ^ (Index{1} << j), k) = half;
    return h;
}

MatrixXd build_h1_sector(const DriveParams& p, double rabi, const ParityBlocks& blocks,
                         Sector sector) {
    if (sector == Sector::full) return build_h1_matrix(p, rabi);
    if (blocks.n_sites() != p.n_sites) throw InvalidArgument("build_h1_sector: basis size mismatch");
    const VectorXd diag = build_h2_diagonal(p);
    const Index d = blocks.sector_dim(sector);
    const double sign = sector == Sector::even ? 1.0 : -1.0;
    constexpr double kInvSqrt2 = 0.70710678118654752440;

    // Position of every basis state in the sector, with the amplitude of that
    // state in its sector vector.
    std::vector<Index> slot(static_cast<std::size_t>(blocks.dimension()), -1);
    std::vector<double> amp(static_cast<std::size_t>(blocks.dimension()), 0.0);
    for (Index i = 0; i < d; ++i) {
        const auto& o = blocks.orbit(sector, i);
        if (o.first == o.second) {
            slot[o.first] = i;
            amp[o.first] = 1.0;
        } else {
            slot[o.first] = i;
            slot[o.second] = i;
            amp[o.first] = kInvSqrt2;
            amp[o.second] = sign * kInvSqrt2;
        }
    }

    MatrixXd h = MatrixXd::Zero(d, d);
    const double half = 0.5 * rabi;
    for (Index i = 0; i < d; ++i) {
        const auto& o = blocks.orbit(sector, i);
        // H_2 is diagonal and parity-symmetric, so its value is shared by the pair.
        h(i, i) += diag[o.first];
        // Column i of P^T X P: apply X to the sector vector, project back.
        const int members = o.first == o.second ? 1 : 2;
        for (int m = 0; m < members; ++m) {
            const BasisIndex k = m == 0 ? o.first : o.second;
            const double a = amp[k];
            for (int j = 0; j < p.n_sites; ++j) {
                const BasisIndex t = k ^ (BasisIndex{1} << j);
                const Index row = slot[t];
                if (row >= 0) h(row, i) += half * a * amp[t];
            }
        }
    }
    return h;
}

MatrixXd averaged_hamiltonian(const DriveParams& p) {
    MatrixXd h = 0.5 * build_h1_matrix(p, p.rabi_high);
    h.diagonal() += 0.5 * build_h2_diagonal(p);
    return h;
}

VectorXcd apply_sigma_x_sum(const VectorXcd& psi, int n_sites) {
    const Index dim = Index{1} << n_sites;
    if (psi.size() != dim) throw InvalidArgument("apply_sigma_x_sum: dimension mismatch");
    VectorXcd out = VectorXcd::Zero(dim);
    for (Index k = 0; k < dim; ++k) {
        cplx acc = 0.0;
        for (int j = 0; j < n_sites; ++j) acc += psi[k ^ (Index{1} << j)];
        out[k] = acc;
    }
    return out;
}

VectorXcd apply_diagonal(const VectorXd& diag, const VectorXcd& psi) {
    if (psi.size() != diag.size()) throw InvalidArgument("apply_diagonal: dimension mismatch");
    return diag.cast<cplx>().cwiseProduct(psi);
}

VectorXcd apply_averaged_hamiltonian(const DriveParams& p, const VectorXd& h2_diag,
                                     const VectorXcd& psi) {
    return 0.25 * p.rabi_high * apply_sigma_x_sum(psi, p.n_sites) + apply_diagonal(h2_diag, psi);
}

double harmonic_number(int order, int count) {
    if (order < 1) throw InvalidArgument("harmonic_number: order must be >= 1");
    if (count == kInfiniteCount) {
        if (order == 1) throw InvalidArgument("harmonic_number: L_1(infinity) diverges");
        return std::riemann_zeta(static_cast<double>(order));
    }
    if (count < 0) throw InvalidArgument("harmonic_number: count must be >= 0");
    // Summed from the small terms up to limit rounding.
    double s = 0.0;
    for (int j = count; j >= 1; --j) s += std::pow(static_cast<double>(j), -order);
    return s;
}

double all_rydberg_energy(const DriveParams& p) {
    p.validate();
    if (!p.law.is_van_der_waals())
        throw InvalidArgument("all_rydberg_energy: closed form needs the van der Waals law, got " +
                              p.law.describe());
    const int n = p.n_sites;
    const double v0 = p.nn_interaction;
    return n * (p.detuning + v0 * harmonic_number(6, n - 1) - v0 * harmonic_number(5, n - 1) / n);
}

}  // namespace rydfloq
