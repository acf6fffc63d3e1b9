#include "rydfloq/basis.hpp"

#include "rydfloq/error.hpp"

#include <cmath>
#include <string>

namespace rydfloq {

SpinBasis::SpinBasis(int n_sites) : n_sites_(n_sites) {
    if (n_sites < 1 || n_sites > kMaxSites)
        throw InvalidArgument("n_sites must lie in [1, " + std::to_string(kMaxSites) +
                              "], got " + std::to_string(n_sites));
}

BasisIndex SpinBasis::reflect(BasisIndex k) const {
    BasisIndex r = 0;
    for (int j = 0; j < n_sites_; ++j) r |= ((k >> j) & 1u) << (n_sites_ - 1 - j);
    return r;
}

BasisIndex SpinBasis::parse(std::string_view bits) const {
    if (static_cast<int>(bits.size()) != n_sites_)
        throw InvalidArgument("bitstring has " + std::to_string(bits.size()) + " sites, chain has " +
                              std::to_string(n_sites_));
    BasisIndex k = 0;
    for (int j = 0; j < n_sites_; ++j) {
        const char c = bits[static_cast<std::size_t>(j)];
        if (c == 's' || c == '1')
            k |= BasisIndex{1} << j;
        else if (c != 'g' && c != '0')
            throw InvalidArgument(std::string("invalid site symbol '") + c + "' in bitstring");
    }
    return k;
}

SpinBasis build_basis(int n_sites) { return SpinBasis(n_sites); }

BasisIndex reflect_index(BasisIndex k, const SpinBasis& basis) {
    if (static_cast<Index>(k) >= basis.dimension())
        throw InvalidArgument("basis index " + std::to_string(k) + " out of range");
    return basis.reflect(k);
}

std::string_view to_string(Sector s) {
    switch (s) {
        case Sector::full: return "full";
        case Sector::even: return "even";
        case Sector::odd: return "odd";
    }
    return "?";
}

Sector parse_sector(std::string_view s) {
    if (s == "full") return Sector::full;
    if (s == "even") return Sector::even;
    if (s == "odd") return Sector::odd;
    throw InvalidArgument("unknown sector '" + std::string(s) + "'");
}

ParityBlocks::ParityBlocks(const SpinBasis& basis)
    : n_sites_(basis.n_sites()), dimension_(basis.dimension()) {
    for (Index k = 0; k < dimension_; ++k) {
        const auto kk = static_cast<BasisIndex>(k);
        const BasisIndex r = basis.reflect(kk);
        if (r == kk) {
            even_members_.push_back({kk, kk});
        } else if (kk < r) {
            even_members_.push_back({kk, r});
            odd_members_.push_back({kk, r});
        }
    }
}

Index ParityBlocks::sector_dim(Sector s) const {
    switch (s) {
        case Sector::full: return dimension_;
        case Sector::even: return even_dim();
        case Sector::odd: return odd_dim();
    }
    return 0;
}

const ParityBlocks::Orbit& ParityBlocks::orbit(Sector s, Index i) const {
    if (s == Sector::full) throw InvalidArgument("orbit(): full space has no orbit structure");
    const auto& v = s == Sector::even ? even_members_ : odd_members_;
    return v.at(static_cast<std::size_t>(i));
}

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

VectorXcd ParityBlocks::to_sector(const VectorXcd& full, Sector s) const {
    if (full.size() != dimension_) throw InvalidArgument("to_sector: dimension mismatch");
    if (s == Sector::full) return full;
    const auto& members = s == Sector::even ? even_members_ : odd_members_;
    const double sign = s == Sector::even ? 1.0 : -1.0;
    VectorXcd out(static_cast<Index>(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto& o = members[i];
        if (o.first == o.second)
            out[static_cast<Index>(i)] = full[o.first];
        else
            out[static_cast<Index>(i)] = kInvSqrt2 * (full[o.first] + sign * full[o.second]);
    }
    return out;
}

void ParityBlocks::add_from_sector(const VectorXcd& part, Sector s, VectorXcd& full) const {
    if (full.size() != dimension_) throw InvalidArgument("add_from_sector: dimension mismatch");
    if (s == Sector::full) {
        full += part;
        return;
    }
    const auto& members = s == Sector::even ? even_members_ : odd_members_;
    if (part.size() != static_cast<Index>(members.size()))
        throw InvalidArgument("add_from_sector: sector dimension mismatch");
    const double sign = s == Sector::even ? 1.0 : -1.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto& o = members[i];
        const cplx c = part[static_cast<Index>(i)];
        if (o.first == o.second) {
            full[o.first] += c;
        } else {
            full[o.first] += kInvSqrt2 * c;
            full[o.second] += sign * kInvSqrt2 * c;
        }
    }
}

VectorXcd ParityBlocks::from_sector(const VectorXcd& part, Sector s) const {
    VectorXcd full = VectorXcd::Zero(dimension_);
    add_from_sector(part, s, full);
    return full;
}

MatrixXd ParityBlocks::sector_columns(Sector s) const {
    if (s == Sector::full) return MatrixXd::Identity(dimension_, dimension_);
    const auto& members = s == Sector::even ? even_members_ : odd_members_;
    const double sign = s == Sector::even ? 1.0 : -1.0;
    MatrixXd p = MatrixXd::Zero(dimension_, static_cast<Index>(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto& o = members[i];
        const auto col = static_cast<Index>(i);
        if (o.first == o.second) {
            p(o.first, col) = 1.0;
        } else {
            p(o.first, col) = kInvSqrt2;
            p(o.second, col) = sign * kInvSqrt2;
        }
    }
    return p;
}

MatrixXd ParityBlocks::transform() const {
    MatrixXd t(dimension_, dimension_);
    t.leftCols(even_dim()) = sector_columns(Sector::even);
    t.rightCols(odd_dim()) = sector_columns(Sector::odd);
    return t;
}

MatrixXd ParityBlocks::restrict(const MatrixXd& a, Sector s) const {
    if (a.rows() != dimension_ || a.cols() != dimension_)
        throw InvalidArgument("restrict: dimension mismatch");
    if (s == Sector::full) return a;
    const MatrixXd p = sector_columns(s);
    return p.transpose() * a * p;
}

MatrixXcd ParityBlocks::restrict(const MatrixXcd& a, Sector s) const {
    if (a.rows() != dimension_ || a.cols() != dimension_)
        throw InvalidArgument("restrict: dimension mismatch");
    if (s == Sector::full) return a;
    const MatrixXcd p = sector_columns(s).cast<cplx>();
    return p.adjoint() * a * p;
}

ParityBlocks build_parity_blocks(const SpinBasis& basis) { return ParityBlocks(basis); }

VectorXcd apply_parity(const VectorXcd& v, const SpinBasis& basis) {
    if (v.size() != basis.dimension()) throw InvalidArgument("apply_parity: dimension mismatch");
    VectorXcd out(v.size());
    for (Index k = 0; k < v.size(); ++k) out[k] = v[basis.reflect(static_cast<BasisIndex>(k))];
    return out;
}

ParityResolved resolve_degenerate_parity(const MatrixXcd& vectors, const SpinBasis& basis,
                                         double tol) {
    const Index m = vectors.cols();
    if (vectors.rows() != basis.dimension())
        throw InvalidArgument("resolve_degenerate_parity: vectors do not match the basis");
    const MatrixXcd gram = vectors.adjoint() * vectors;
    if (linalg::max_abs(MatrixXcd(gram - MatrixXcd::Identity(m, m))) > tol)
        throw NumericalError("resolve_degenerate_parity: input vectors are not orthonormal");

    MatrixXcd pv(vectors.rows(), m);
    for (Index c = 0; c < m; ++c) pv.col(c) = apply_parity(vectors.col(c), basis);
    MatrixXcd sub = vectors.adjoint() * pv;
    sub = 0.5 * (sub + sub.adjoint()).eval();
    if (linalg::max_abs(MatrixXcd(sub * sub - MatrixXcd::Identity(m, m))) > tol)
        throw NumericalError(
            "resolve_degenerate_parity: parity is not an involution on the subspace; "
            "the degeneracy grouping is probably wrong");

    // Eigenvalues come out ascending; list the even vectors first.
    auto eig = linalg::hermitian_eigen(sub);
    ParityResolved out;
    out.vectors = vectors * eig.vectors.rowwise().reverse();
    out.labels.reserve(static_cast<std::size_t>(m));
    for (Index c = m - 1; c >= 0; --c) out.labels.push_back(eig.values[c] > 0.0 ? 1 : -1);
    return out;
}

}  // namespace rydfloq
