#include "rydfloq/basis.hpp"
#include "rydfloq/error.hpp"
#include "rydfloq/model.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rydfloq;

namespace {

DriveParams params(int n, double delta, double v0) {
    DriveParams p;
    p.n_sites = n;
    p.detuning = delta;
    p.nn_interaction = v0;
    return p;
}

MatrixXd reflection(const SpinBasis& b) {
    const Index d = b.dimension();
    MatrixXd pi = MatrixXd::Zero(d, d);
    for (BasisIndex k = 0; k < d; ++k) pi(b.reflect(k), k) = 1.0;
    return pi;
}

// Brute-force <k|H_2|k> from occupation numbers.
double h2_entry(const DriveParams& p, BasisIndex k) {
    const InteractionMatrix v(p);
    double e = 0.0;
    for (int j = 0; j < p.n_sites; ++j) {
        if (!SpinBasis::occupied(k, j)) continue;
        e += p.detuning;
        for (int l = j + 1; l < p.n_sites; ++l)
            if (SpinBasis::occupied(k, l)) e += v(j, l);
    }
    return e;
}

}  // namespace

TEST_CASE("parameter validation") {
    DriveParams p = params(4, 1.0, 2.0);
    CHECK_NOTHROW(p.validate());
    CHECK(p.period() == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(p.shifted_detuning() == doctest::Approx(3.0));
    p.half_period = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = params(0, 1.0, 2.0);
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = params(3, 1.0, 2.0);
    p.law = InteractionLaw::power(-1.0);
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    const DriveParams q = DriveParams::from_shifted(6, 5.0, 2.0, 1.5);
    CHECK(q.detuning == doctest::Approx(3.0));
    CHECK(q.half_period == doctest::Approx(1.5));
}

TEST_CASE("interaction laws") {
    const InteractionMatrix vdw(5, 2.0, InteractionLaw::van_der_waals());
    CHECK(vdw(0, 1) == doctest::Approx(2.0));
    CHECK(vdw(0, 2) == doctest::Approx(2.0 / 64.0));
    CHECK(vdw(3, 1) == doctest::Approx(2.0 / 64.0));
    CHECK(vdw(2, 2) == 0.0);
    const InteractionMatrix pw(5, 2.0, InteractionLaw::power(3.0));
    CHECK(pw(0, 4) == doctest::Approx(2.0 / 64.0));
    const InteractionMatrix nn(5, 2.0, InteractionLaw::nearest_neighbor());
    CHECK(nn(1, 2) == 2.0);
    CHECK(nn(1, 3) == 0.0);
    const InteractionMatrix all(5, 2.0, InteractionLaw::all_to_all());
    CHECK(all(0, 4) == 2.0);
    CHECK(all(4, 4) == 0.0);
    CHECK(parse_interaction_law("vdw").is_van_der_waals());
    CHECK(parse_interaction_law("power:6").is_van_der_waals());
    CHECK(parse_interaction_law("power:2.5").alpha == doctest::Approx(2.5));
    CHECK(parse_interaction_law("nn").kind == InteractionLaw::Kind::nearest_neighbor);
    CHECK(parse_interaction_law("all").kind == InteractionLaw::Kind::all_to_all);
    CHECK(parse_interaction_law(InteractionLaw::power(2.5).describe()).alpha == doctest::Approx(2.5));
    CHECK_THROWS_AS(parse_interaction_law("yukawa"), InvalidArgument);
    CHECK_THROWS_AS(parse_interaction_law("power:x"), InvalidArgument);
}

TEST_CASE("diagonal of H2") {
    const DriveParams p2 = params(2, 0.7, 2.0);
    const VectorXd h2 = build_h2_diagonal(p2);
    const SpinBasis b2(2);
    CHECK(h2[b2.parse("ss")] == doctest::Approx(2 * 0.7 + 2.0));
    CHECK(h2[b2.parse("gg")] == 0.0);
    const DriveParams p3 = params(3, 0.7, 2.0);
    const SpinBasis b3(3);
    CHECK(build_h2_diagonal(p3)[b3.parse("sgs")] == doctest::Approx(2 * 0.7 + 2.0 / 64.0).epsilon(1e-14));
    for (auto law : {InteractionLaw::van_der_waals(), InteractionLaw::power(1.5), InteractionLaw::nearest_neighbor(),
                     InteractionLaw::all_to_all()}) {
        DriveParams p = params(7, -0.3, 1.7);
        p.law = law;
        const VectorXd h = build_h2_diagonal(p);
        for (BasisIndex k = 0; k < h.size(); ++k) REQUIRE(h[k] == doctest::Approx(h2_entry(p, k)).epsilon(1e-13));
    }
}

TEST_CASE("nearest-neighbour law is vdW truncated at distance one") {
    DriveParams nn = params(8, 1.3, 2.0);
    nn.law = InteractionLaw::nearest_neighbor();
    const VectorXd h = build_h2_diagonal(nn);
    const SpinBasis b(8);
    for (BasisIndex k = 0; k < b.dimension(); ++k) {
        double e = 0.0;
        for (int j = 0; j < 8; ++j) {
            if (!SpinBasis::occupied(k, j)) continue;
            e += 1.3;
            if (j + 1 < 8 && SpinBasis::occupied(k, j + 1)) e += 2.0;
        }
        REQUIRE(h[k] == doctest::Approx(e).epsilon(1e-15));
    }
}

TEST_CASE("drive Hamiltonian") {
    DriveParams p1 = params(1, 0.0, 2.0);
    const MatrixXd h = build_h1_matrix(p1, 1.0);
    CHECK(h(0, 0) == 0.0);
    CHECK(h(1, 1) == 0.0);
    CHECK(h(0, 1) == 0.5);
    CHECK(h(1, 0) == 0.5);
    const MatrixXd h2 = build_h1_matrix(params(2, 0.4, 2.0), 1.3);
    const SpinBasis b2(2);
    CHECK(h2(b2.parse("gg"), b2.parse("ss")) == 0.0);
    const DriveParams p = params(6, 0.4, 2.0);
    const MatrixXd m = build_h1_matrix(p, 1.3);
    for (Index r = 0; r < m.rows(); ++r) {
        double s = 0.0;
        for (Index c = 0; c < m.cols(); ++c)
            if (c != r) s += std::abs(m(r, c));
        REQUIRE(s == doctest::Approx(6 * 1.3 / 2));
    }
    CHECK(linalg::max_abs(MatrixXd(m - m.transpose())) < 1e-14);
}

TEST_CASE("averaged Hamiltonian") {
    const MatrixXd a1 = averaged_hamiltonian(params(1, 0.0, 2.0));
    CHECK(a1(0, 1) == 0.25);
    CHECK(a1(0, 0) == 0.0);
    const DriveParams p = params(5, 0.9, 2.0);
    const MatrixXd a = averaged_hamiltonian(p);
    const MatrixXd expect = 0.5 * build_h1_matrix(p, p.rabi_high) + 0.5 * MatrixXd(build_h2_diagonal(p).asDiagonal());
    CHECK(linalg::max_abs(MatrixXd(a - expect)) < 1e-15);
    const Index all = (Index{1} << 5) - 1;
    CHECK(a(all, all) == doctest::Approx(all_rydberg_energy(p)).epsilon(1e-13));

    std::mt19937_64 rng(5);
    const VectorXcd psi = testing::random_state(32, rng);
    const VectorXcd direct = a.cast<cplx>() * psi;
    CHECK((apply_averaged_hamiltonian(p, build_h2_diagonal(p), psi) - direct).norm() < 1e-13);
}

TEST_CASE("Hamiltonians commute with the reflection") {
    for (int n = 2; n <= 8; ++n) {
        DriveParams p = params(n, 0.37, 2.0);
        p.rabi_low = 0.05;
        const SpinBasis b(n);
        const MatrixXd pi = reflection(b);
        const MatrixXd h1 = build_h1_matrix(p, p.rabi_high);
        const MatrixXd h2 = build_h2_diagonal(p).asDiagonal();
        const MatrixXd ha = averaged_hamiltonian(p);
        for (const MatrixXd* h : {&h1, &h2, &ha}) REQUIRE(linalg::max_abs(MatrixXd(*h * pi - pi * *h)) < 1e-12);
    }
}

TEST_CASE("sector blocks of the drive Hamiltonian") {
    const DriveParams p = params(7, 0.37, 2.0);
    const SpinBasis b(7);
    const ParityBlocks blocks(b);
    const MatrixXd h = build_h1_matrix(p, 0.8);
    for (Sector s : {Sector::even, Sector::odd}) {
        const MatrixXd cols = blocks.sector_columns(s);
        const MatrixXd expect = cols.transpose() * h * cols;
        CHECK(linalg::max_abs(MatrixXd(build_h1_sector(p, 0.8, blocks, s) - expect)) < 1e-13);
    }
}

TEST_CASE("harmonic numbers") {
    CHECK(harmonic_number(6, kInfiniteCount) == doctest::Approx(std::pow(std::numbers::pi, 6) / 945.0).epsilon(1e-14));
    CHECK(harmonic_number(6, kInfiniteCount) == doctest::Approx(1.017).epsilon(1e-3));
    CHECK(harmonic_number(6, 1) == 1.0);
    CHECK(harmonic_number(5, 3) == doctest::Approx(1.0 + 1.0 / 32 + 1.0 / 243).epsilon(1e-15));
    CHECK(harmonic_number(3, 0) == 0.0);
    CHECK_THROWS_AS(harmonic_number(1, kInfiniteCount), InvalidArgument);
    CHECK_THROWS_AS(harmonic_number(0, 4), InvalidArgument);
}

TEST_CASE("all-Rydberg energy") {
    CHECK(all_rydberg_energy(params(2, 0.3, 2.0)) == doctest::Approx(2 * 0.3 + 2.0));
    for (int n = 3; n <= 14; ++n) {
        const DriveParams p = params(n, -0.6, 2.0);
        const Index all = (Index{1} << n) - 1;
        REQUIRE(all_rydberg_energy(p) == doctest::Approx(h2_entry(p, static_cast<BasisIndex>(all))).epsilon(1e-12));
    }
    const DriveParams p14 = DriveParams::from_shifted(14, 7.0, 2.0, std::numbers::pi);
    // Per-site excess over Delta_0: the vdW tail L_6(13) - 1 minus the
    // finite-chain deficit L_5(13) / 14, which is the larger of the two.
    const double residual = all_rydberg_energy(p14) / 14 - 7.0;
    const double tail = residual + 2.0 * harmonic_number(5, 13) / 14;
    CHECK(tail > 0.0);
    CHECK(tail <= (harmonic_number(6, kInfiniteCount) - 1.0) * 2.0);
    CHECK(residual < 0.0);
    DriveParams nn = params(4, 0.3, 2.0);
    nn.law = InteractionLaw::nearest_neighbor();
    CHECK_THROWS_AS(all_rydberg_energy(nn), InvalidArgument);
}
