#include "rydfloq/error.hpp"
#include "rydfloq/floquet.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace rydfloq;

namespace {

constexpr double kPi = std::numbers::pi;

DriveParams chain(int n, double delta0, double v0 = 2.0, double tau = kPi) {
    return DriveParams::from_shifted(n, delta0, v0, tau);
}

double circular_distance(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
}

// Largest distance from each phase of `a` to its nearest partner in `b`,
// for two ascending lists of equal length.
double phase_mismatch(VectorXd a, VectorXd b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        double best = 1e300;
        for (Index j = 0; j < b.size(); ++j) best = std::min(best, circular_distance(a[i], b[j]));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

TEST_CASE("single atom pi pulse") {
    DriveParams p;
    p.n_sites = 1;
    p.detuning = 0.0;
    p.nn_interaction = 0.0;
    p.half_period = kPi;
    const MatrixXcd u = floquet_unitary(p);
    MatrixXcd expect(2, 2);
    expect << 0.0, cplx(0.0, -1.0), cplx(0.0, -1.0), 0.0;
    CHECK(linalg::max_abs(MatrixXcd(u - expect)) < 1e-14);
    const auto spec = eigenphase_spectrum(u, Sector::full, SpinBasis(1));
    REQUIRE(spec.size() == 2);
    CHECK(spec.phases[0] == doctest::Approx(kPi / 2).epsilon(1e-13));
    CHECK(spec.phases[1] == doctest::Approx(3 * kPi / 2).epsilon(1e-13));
}

TEST_CASE("Floquet operator is unitary") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        DriveParams p = chain(8, 6.0 * u01(rng), 3.0 * u01(rng), 0.2 + 3.0 * u01(rng));
        p.rabi_low = 0.1 * u01(rng);
        CHECK(linalg::unitarity_defect(floquet_unitary(p)) < 1e-12);
    }
}

TEST_CASE("undriven chain gives diagonal phases") {
    DriveParams p = chain(5, 4.3);
    p.rabi_high = 0.0;
    const MatrixXcd u = floquet_unitary(p);
    const VectorXd h2 = build_h2_diagonal(p);
    MatrixXcd expect = MatrixXcd::Zero(32, 32);
    for (Index k = 0; k < 32; ++k) expect(k, k) = std::polar(1.0, -2.0 * p.half_period * h2[k]);
    CHECK(linalg::max_abs(MatrixXcd(u - expect)) < 1e-12);

    VectorXd folded(32);
    for (Index k = 0; k < 32; ++k) folded[k] = eigenphase(std::polar(1.0, -h2[k] * p.period()));
    std::sort(folded.data(), folded.data() + 32);
    const auto spec = eigenphase_spectrum(u, Sector::full, SpinBasis(5), {false, false});
    CHECK(phase_mismatch(spec.phases, folded) < 1e-12);
}

TEST_CASE("eigenphase branch") {
    CHECK(eigenphase(cplx(1.0, 0.0)) == 0.0);
    CHECK(eigenphase(cplx(0.0, -1.0)) == doctest::Approx(kPi / 2));
    CHECK(eigenphase(cplx(-1.0, 0.0)) == doctest::Approx(kPi));
    CHECK(eigenphase(cplx(1.0, 1e-18)) >= 0.0);
    CHECK(eigenphase(cplx(1.0, 1e-18)) < 2.0 * kPi);
    const auto id = eigenphase_spectrum(MatrixXcd::Identity(8, 8), Sector::full, SpinBasis(3));
    CHECK(id.phases.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("non-unitary input is rejected") {
    MatrixXcd m = MatrixXcd::Identity(4, 4);
    m(0, 0) = 2.0;
    CHECK_THROWS_AS(eigenphase_spectrum(m, Sector::full, SpinBasis(2)), NumericalError);
    CHECK_THROWS_AS(eigenphase_spectrum(m, Sector::full, SpinBasis(3)), InvalidArgument);
}

TEST_CASE("eigenpairs and reconstruction") {
    DriveParams p = chain(7, 5.3);
    p.rabi_low = 0.05;
    const MatrixXcd u = floquet_unitary(p);
    const SpinBasis b(7);
    const auto spec = eigenphase_spectrum(u, Sector::full, b);
    const MatrixXcd v = spec.vectors.to_dense();
    CHECK(linalg::unitarity_defect(v) < 1e-9);
    for (Index k = 1; k < spec.size(); ++k) REQUIRE(spec.phases[k] >= spec.phases[k - 1]);
    CHECK(spec.phases.minCoeff() >= 0.0);
    CHECK(spec.phases.maxCoeff() < 2.0 * kPi);
    VectorXcd lam(spec.size());
    for (Index k = 0; k < spec.size(); ++k) lam[k] = std::polar(1.0, -spec.phases[k]);
    for (Index k = 0; k < spec.size(); ++k) REQUIRE((u * v.col(k) - lam[k] * v.col(k)).norm() < 1e-9);
    CHECK(linalg::max_abs(MatrixXcd(v * lam.asDiagonal() * v.adjoint() - u)) < 1e-8);
}

TEST_CASE("full spectrum is the union of the sector spectra") {
    for (int n : {4, 7, 10}) {
        DriveParams p = chain(n, 4.6);
        const MatrixXcd u = floquet_unitary(p);
        const SpinBasis b(n);
        const auto full = eigenphase_spectrum(u, Sector::full, b, {false, false});
        const auto even = floquet_spectrum(p, Sector::even, false);
        const auto odd = floquet_spectrum(p, Sector::odd, false);
        VectorXd both(even.size() + odd.size());
        both << even.phases, odd.phases;
        std::sort(both.data(), both.data() + both.size());
        CHECK(phase_mismatch(full.phases, both) < 1e-9);
    }
}

TEST_CASE("structured sector solver matches the Schur route") {
    for (double rabi_low : {0.0, 0.05}) {
        DriveParams p = chain(8, 6.93);
        p.rabi_low = rabi_low;
        const SpinBasis b(8);
        const ParityBlocks blocks(b);
        for (Sector s : {Sector::even, Sector::odd}) {
            const MatrixXcd us = floquet_unitary_sector(p, blocks, s);
            const auto ref = eigenphase_spectrum(floquet_unitary(p), s, b, {false, false});
            const auto fast = floquet_spectrum(p, s, true);
            CHECK(phase_mismatch(ref.phases, fast.phases) < 1e-9);
            const MatrixXcd v = fast.vectors.to_dense();
            CHECK(linalg::unitarity_defect(v) < 1e-9);
            double resid = 0.0;
            for (Index k = 0; k < fast.size(); ++k)
                resid = std::max(resid, (us * v.col(k) - std::polar(1.0, -fast.phases[k]) * v.col(k)).norm());
            CHECK(resid < 1e-9);
            CHECK(fast.parity_labels.size() == static_cast<std::size_t>(fast.size()));
        }
    }
}

TEST_CASE("parity labels of the full spectrum") {
    const DriveParams p = chain(6, 5.0);
    const SpinBasis b(6);
    const ParityBlocks blocks(b);
    const auto spec = eigenphase_spectrum(floquet_unitary(p), Sector::full, b, {true, true});
    const MatrixXcd v = spec.vectors.to_dense();
    int even = 0;
    for (Index k = 0; k < spec.size(); ++k) {
        const int label = spec.parity_labels[static_cast<std::size_t>(k)];
        REQUIRE((apply_parity(v.col(k), b) - static_cast<double>(label) * v.col(k)).norm() < 1e-8);
        even += label == 1;
    }
    CHECK(even == blocks.even_dim());
}

TEST_CASE("global phase shifts the spectrum rigidly") {
    const DriveParams p = chain(6, 3.7);
    const MatrixXcd u = floquet_unitary(p);
    const SpinBasis b(6);
    const double shift = 0.83;
    const auto a = eigenphase_spectrum(u, Sector::even, b, {false, false});
    const auto c = eigenphase_spectrum(MatrixXcd(std::polar(1.0, -shift) * u), Sector::even, b, {false, false});
    VectorXd moved = a.phases.array() + shift;
    for (Index k = 0; k < moved.size(); ++k) moved[k] = std::fmod(moved[k], 2.0 * kPi);
    std::sort(moved.data(), moved.data() + moved.size());
    CHECK(phase_mismatch(moved, c.phases) < 1e-10);
}

TEST_CASE("sector sizes of the twelve-site spectrum") {
    const DriveParams p = chain(12, 6.0);
    CHECK(floquet_spectrum(p, Sector::even, false).size() == 2080);
    CHECK(floquet_spectrum(p, Sector::odd, false).size() == 2016);
}

TEST_CASE("undriven phase variance") {
    DriveParams p;
    p.n_sites = 6;
    p.nn_interaction = 0.0;
    p.detuning = 1.0;  // Delta T = 2 pi
    CHECK(std::isinf(undriven_phase_variance(p, 1.0)));
    CHECK_THROWS_AS(undriven_phase_variance(p, 0.0), InvalidArgument);

    std::vector<double> grid, var;
    for (int i = 0; i <= 60; ++i) {
        grid.push_back(3.0 + 0.05 * i);
        var.push_back(folded_phase_variance(chain(10, grid.back())));
    }
    const double i0 = *std::min_element(var.begin(), var.end());
    double top = 0.0;
    std::vector<double> peaks;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double iv = i0 / var[i];
        top = std::max(top, iv);
        const bool left = i == 0 || var[i] < var[i - 1];
        const bool right = i + 1 == grid.size() || var[i] < var[i + 1];
        if (left && right) peaks.push_back(grid[i]);
    }
    CHECK(top == doctest::Approx(1.0));
    for (double target : {3.0, 4.0, 5.0, 6.0}) {
        bool found = false;
        for (double x : peaks) found = found || std::abs(x - target) <= 0.05 + 1e-12;
        CHECK_MESSAGE(found, "no variance minimum near " << target);
    }
}

TEST_CASE("eigenphase histograms") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    VectorXd flat(200000);
    for (auto& x : flat) x = angle(rng);
    const auto h = eigenphase_histogram(flat, 32);
    const double uniform = 1.0 / (2.0 * kPi);
    CHECK((h.density.array() - uniform).abs().maxCoeff() < 0.05 * uniform);
    CHECK(h.density.sum() * (2.0 * kPi / 32) == doctest::Approx(1.0));
    CHECK_THROWS_AS(eigenphase_histogram(flat, 4), InvalidArgument);

    auto phases = [](const DriveParams& p) {
        const auto e = floquet_spectrum(p, Sector::even, false);
        const auto o = floquet_spectrum(p, Sector::odd, false);
        VectorXd all(e.size() + o.size());
        all << e.phases, o.phases;
        return all;
    };
    CHECK(count_histogram_modes(eigenphase_histogram(phases(chain(10, 5.0)), 64)) == 1);
    CHECK(count_histogram_modes(eigenphase_histogram(phases(chain(10, 5.5)), 64)) >= 2);
}
