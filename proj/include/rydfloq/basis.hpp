#pragma once

#include "rydfloq/linalg.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace rydfloq {

using BasisIndex = std::uint32_t;

// Computational basis of an open chain of two-level atoms. Bit j of a basis
// index is site j+1; a set bit means the atom is in the Rydberg state |s>.
class SpinBasis {
public:
    static constexpr int kMaxSites = 20;

    explicit SpinBasis(int n_sites);

    int n_sites() const { return n_sites_; }
    Index dimension() const { return Index{1} << n_sites_; }

    // Index of the site-reversed bitstring.
    BasisIndex reflect(BasisIndex k) const;

    static int popcount(BasisIndex k) { return __builtin_popcount(k); }
    static bool occupied(BasisIndex k, int site) { return (k >> site) & 1u; }

    // Parses a bitstring written site 1 first, using 'g'/'0' and 's'/'1'.
    BasisIndex parse(std::string_view bits) const;

private:
    int n_sites_;
};

SpinBasis build_basis(int n_sites);

// Same as SpinBasis::reflect, with a range check on k.
BasisIndex reflect_index(BasisIndex k, const SpinBasis& basis);

enum class Sector { full, even, odd };

std::string_view to_string(Sector s);
Sector parse_sector(std::string_view s);

// Symmetric/antisymmetric combinations of reflection partners.
//
// Even sector: palindromes |k>, and (|k> + |r(k)>)/sqrt2 for k < r(k).
// Odd sector: (|k> - |r(k)>)/sqrt2 for k < r(k).
// Orbits are enumerated in ascending order of their smaller member, so the
// non-palindromic orbits share the same ordering in both sectors.
class ParityBlocks {
public:
    explicit ParityBlocks(const SpinBasis& basis);

    int n_sites() const { return n_sites_; }
    Index dimension() const { return dimension_; }
    Index even_dim() const { return static_cast<Index>(even_members_.size()); }
    Index odd_dim() const { return static_cast<Index>(odd_members_.size()); }
    Index sector_dim(Sector s) const;

    struct Orbit {
        BasisIndex first;   // smaller member
        BasisIndex second;  // equals first for a palindrome
    };
    const Orbit& orbit(Sector s, Index i) const;

    // Coordinates of a full-space vector in a sector (projection onto the
    // sector basis), and the embedding back into the full space.
    VectorXcd to_sector(const VectorXcd& full, Sector s) const;
    VectorXcd from_sector(const VectorXcd& part, Sector s) const;
    void add_from_sector(const VectorXcd& part, Sector s, VectorXcd& full) const;

    // Restriction P^T A P of a full-space real matrix to a sector.
    MatrixXd restrict(const MatrixXd& a, Sector s) const;
    MatrixXcd restrict(const MatrixXcd& a, Sector s) const;

    // Dense orthogonal transform, even columns first then odd columns.
    // Intended for small chains and checks; O(D^2) memory.
    MatrixXd transform() const;

    // Sector columns of transform() for one sector (D x sector_dim).
    MatrixXd sector_columns(Sector s) const;

private:
    int n_sites_;
    Index dimension_;
    std::vector<Orbit> even_members_;
    std::vector<Orbit> odd_members_;
};

ParityBlocks build_parity_blocks(const SpinBasis& basis);

// (Pi v)_k = v_{r(k)}
VectorXcd apply_parity(const VectorXcd& v, const SpinBasis& basis);

struct ParityResolved {
    MatrixXcd vectors;        // orthonormal rotation of the input subspace
    std::vector<int> labels;  // +1 / -1 per column
};

// Rotates a set of (degenerate) orthonormal vectors so that each one is a
// parity eigenstate, by diagonalizing Pi restricted to their span.
ParityResolved resolve_degenerate_parity(const MatrixXcd& vectors, const SpinBasis& basis,
                                         double tol = 1e-9);

}  // namespace rydfloq
