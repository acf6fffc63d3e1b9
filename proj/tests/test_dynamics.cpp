#include "rydfloq/dynamics.hpp"
#include "rydfloq/error.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rydfloq;

namespace {

constexpr double kPi = std::numbers::pi;

DriveParams chain(int n, double delta, double v0 = 2.0) {
    DriveParams p;
    p.n_sites = n;
    p.detuning = delta;
    p.nn_interaction = v0;
    p.half_period = kPi;
    return p;
}

const ObservableSeries& find(const std::vector<ObservableSeries>& all, const std::string& tag) {
    for (const auto& s : all)
        if (s.tag == tag) return s;
    FAIL("missing series " << tag);
    return all.front();
}

}  // namespace

TEST_CASE("initial states") {
    for (int n : {1, 3, 6}) {
        const SpinBasis b(n);
        const VectorXcd phi0 = initial_state(InitialKind::phi0, b);
        CHECK(phi0[0] == cplx(1.0, 0.0));
        CHECK(phi0.norm() == doctest::Approx(1.0));
        CHECK(sz_expectation(phi0, b) == doctest::Approx(-1.0));
        CHECK(sz_expectation(initial_state(InitialKind::all_rydberg, b), b) == doctest::Approx(1.0));
    }
    const SpinBasis b2(2);
    const VectorXcd phi1 = initial_state("phi1", b2);
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(phi1[b2.parse("gg")] - h) < 1e-15);
    CHECK(std::abs(phi1[b2.parse("sg")] - h) < 1e-15);
    CHECK(std::abs(phi1[b2.parse("gs")]) == 0.0);
    for (int n : {2, 6, 10}) {
        const SpinBasis b(n);
        CHECK(sz_expectation(initial_state("phi1", b), b) == doctest::Approx(-0.5));
    }
    const SpinBasis b3(3);
    CHECK(std::abs(initial_state("sgs", b3)[5]) == doctest::Approx(1.0));
    CHECK_THROWS_AS(initial_state("sgx", b3), InvalidArgument);
    CHECK_THROWS_AS(initial_state(InitialKind::custom, b3, "ss"), InvalidArgument);
}

TEST_CASE("single-site magnetization") {
    const SpinBasis b(4);
    const VectorXcd psi = initial_state("sggs", b);
    CHECK(site_sz(psi, b, 1) == doctest::Approx(1.0));
    CHECK(site_sz(psi, b, 2) == doctest::Approx(-1.0));
    CHECK(site_sz(psi, b, 4) == doctest::Approx(1.0));
    CHECK(sz_expectation(psi, b) == doctest::Approx(0.0));
    CHECK_THROWS_AS(site_sz(psi, b, 5), InvalidArgument);
}

TEST_CASE("entanglement entropy") {
    const SpinBasis b2(2);
    VectorXcd bell = VectorXcd::Zero(4);
    bell[b2.parse("gs")] = 1.0 / std::sqrt(2.0);
    bell[b2.parse("sg")] = 1.0 / std::sqrt(2.0);
    CHECK(entanglement_entropy(bell, 1, b2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    const SpinBasis b(6);
    CHECK(entanglement_entropy(initial_state("phi1", b), 3, b) == doctest::Approx(0.0));
    CHECK(entanglement_entropy(initial_state("sgsggs", b), 2, b) == doctest::Approx(0.0));
    CHECK_THROWS_AS(entanglement_entropy(bell, 0, b2), InvalidArgument);
    CHECK_THROWS_AS(entanglement_entropy(bell, 2, b2), InvalidArgument);

    std::mt19937_64 rng(4);
    const SpinBasis b7(7);
    for (int trial = 0; trial < 5; ++trial) {
        const VectorXcd psi = testing::random_state(128, rng);
        // The leftmost 7 - cut sites of the mirrored state are the complement
        // of the leftmost `cut` sites of psi.
        const VectorXcd mirrored = apply_parity(psi, b7);
        for (int cut = 1; cut < 7; ++cut) {
            const double s = entanglement_entropy(psi, cut, b7);
            REQUIRE(s >= 0.0);
            REQUIRE(s <= std::min(cut, 7 - cut) * std::log(2.0) + 1e-12);
            REQUIRE(std::abs(s - entanglement_entropy(mirrored, 7 - cut, b7)) < 1e-10);
        }
    }
}

TEST_CASE("Page value") {
    CHECK(page_value(14, 7) == doctest::Approx(7 * std::log(2.0) - 0.5).epsilon(1e-14));
    CHECK(page_value(14, 7) == doctest::Approx(4.35203).epsilon(1e-6));
    CHECK(page_value(12, 6) == doctest::Approx(3.65888).epsilon(1e-6));
    CHECK(page_value(2, 1) == doctest::Approx(0.19315).epsilon(1e-5));
    CHECK_THROWS_AS(page_value(14, 3), InvalidArgument);
    CHECK_THROWS_AS(page_value(7, 3), InvalidArgument);
}

TEST_CASE("observable tags") {
    CHECK(parse_observable("sz").kind == ObservableKind::sz);
    CHECK(parse_observable("energy_avg").kind == ObservableKind::energy_avg);
    CHECK(parse_observable("entropy_half").kind == ObservableKind::entropy);
    CHECK(parse_observable("entropy_half").site == 0);
    CHECK(parse_observable("entropy:3").site == 3);
    CHECK(parse_observable("autocorr:2").kind == ObservableKind::autocorr);
    CHECK(parse_observable("autocorr_global").kind == ObservableKind::autocorr_global);
    CHECK(parse_observable("edge").kind == ObservableKind::edge);
    CHECK(parse_observable("norm").kind == ObservableKind::norm);
    CHECK_THROWS_AS(parse_observable("magnetization"), InvalidArgument);
    CHECK_THROWS_AS(parse_observable("entropy:x"), InvalidArgument);
    CHECK(parse_observable(parse_observable("entropy:3").tag(8)).site == 3);
}

TEST_CASE("sample times") {
    CHECK(sample_times(0, 5) == std::vector<long>{0});
    CHECK(sample_times(10, 4) == std::vector<long>{0, 4, 8, 10});
    CHECK(sample_times(6, 3) == std::vector<long>{0, 3, 6});
    CHECK_THROWS_AS(sample_times(-1, 1), InvalidArgument);
    CHECK_THROWS_AS(sample_times(5, 0), InvalidArgument);
}

TEST_CASE("single atom flips every period") {
    DriveParams p = chain(1, 0.0, 0.0);
    const SpinBasis b(1);
    const auto s = stroboscopic_evolve(floquet_unitary(p), p, initial_state("phi0", b), 2,
                                       {parse_observable("sz")});
    REQUIRE(s[0].values.size() == 3);
    CHECK(s[0].values[0] == doctest::Approx(-1.0));
    CHECK(s[0].values[1] == doctest::Approx(1.0));
    CHECK(s[0].values[2] == doctest::Approx(-1.0));
    const auto zero = stroboscopic_evolve(floquet_unitary(p), p, initial_state("phi0", b), 0,
                                          {parse_observable("sz")});
    CHECK(zero[0].values.size() == 1);
}

TEST_CASE("spectral and dense evolution agree") {
    const DriveParams p = chain(8, 4.93);
    const SpinBasis b(8);
    const DenseEvolver dense(floquet_unitary(p), 8);
    const SpectralEvolver parity(p);
    const SpectralEvolver full(p, false);
    const std::vector<long> times{0, 1, 2, 7, 50, 333};
    std::vector<VectorXcd> init{initial_state("phi1", b), initial_state("sggsgsgg", b)};
    std::vector<std::vector<VectorXcd>> ref;
    dense.evolve(init, times, [&](long, const std::vector<VectorXcd>& st) { ref.push_back(st); });
    for (const Evolver* ev : {static_cast<const Evolver*>(&parity), static_cast<const Evolver*>(&full)}) {
        std::size_t i = 0;
        ev->evolve(init, times, [&](long t, const std::vector<VectorXcd>& st) {
            CHECK(t == times[i]);
            for (std::size_t j = 0; j < st.size(); ++j) CHECK((st[j] - ref[i][j]).norm() < 1e-8);
            ++i;
        });
        CHECK(i == times.size());
    }
    CHECK_THROWS_AS(parity.spectrum(Sector::full), InvalidArgument);
    CHECK_THROWS_AS(dense.evolve(init, {3, 2}, [](long, const std::vector<VectorXcd>&) {}), InvalidArgument);
}

TEST_CASE("norm is conserved over long runs") {
    const DriveParams p = chain(8, 4.93);
    const SpectralEvolver ev(p);
    const auto s = run_dynamics(ev, p, initial_state("phi1", SpinBasis(8)), sample_times(10000, 500),
                                {parse_observable("norm")});
    for (double v : s[0].values) REQUIRE(std::abs(v - 1.0) < 1e-9);
}

TEST_CASE("undriven chain conserves the averaged energy") {
    DriveParams p = chain(6, 1.3);
    p.rabi_high = 0.0;
    const SpinBasis b(6);
    std::mt19937_64 rng(1);
    const auto s = stroboscopic_evolve(floquet_unitary(p), p, testing::random_state(64, rng), 20,
                                       {parse_observable("energy_avg")});
    for (double v : s[0].values) CHECK(v == doctest::Approx(s[0].values[0]).epsilon(1e-12));
}

TEST_CASE("correlators start at one") {
    const DriveParams p = chain(6, 4.93);
    const SpinBasis b(6);
    const SpectralEvolver ev(p);
    const VectorXcd phi0 = initial_state("phi0", b);
    CHECK(edge_correlator(ev, phi0, {0}).values[0] == doctest::Approx(1.0));
    for (int j = 1; j <= 6; ++j) CHECK(autocorrelation(ev, phi0, j, {0}).values[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(autocorrelation(ev, phi0, 7, {0}), InvalidArgument);

    const auto all = run_dynamics(ev, p, phi0, sample_times(40, 10),
                                  {parse_observable("edge"), parse_observable("autocorr:2"),
                                   parse_observable("autocorr_global")});
    const auto direct = autocorrelation(ev, phi0, 2, sample_times(40, 10));
    for (std::size_t i = 0; i < direct.values.size(); ++i)
        CHECK(find(all, "autocorr:2").values[i] == doctest::Approx(direct.values[i]).epsilon(1e-10));
    // <phi0| S_z(0) S_z(0) |phi0> with S_z = (1/N) sum sigma^z equals 1 for phi0.
    CHECK(find(all, "autocorr_global").values[0] == doctest::Approx(1.0));
}

TEST_CASE("window averages") {
    ObservableSeries s;
    s.period = {0, 1, 2, 3, 4};
    s.values = {9.0, 1.0, 2.0, 3.0, 9.0};
    const auto w = window_average(s, 1, 3);
    CHECK(w.count == 3);
    CHECK(w.mean == doctest::Approx(2.0));
    CHECK(w.stddev == doctest::Approx(1.0));
    CHECK_THROWS_AS(window_average(s, 10, 20), InvalidArgument);
}

TEST_CASE("Mazur bound") {
    const DriveParams p = chain(5, 4.3);
    const SpinBasis b(5);
    const auto spec = eigenphase_spectrum(floquet_unitary(p), Sector::full, b);
    CHECK(mazur_bound(MatrixXcd::Identity(32, 32), spec) == doctest::Approx(1.0));

    FloquetSpectrum frame;
    frame.vectors = Eigenbasis::dense(testing::fourier_frame(8));
    frame.phases = VectorXd::Zero(8);
    const SpinBasis b3(3);
    const MatrixXcd sz1 = sigma_z_diagonal(b3, 1).cast<cplx>().asDiagonal();
    CHECK(mazur_bound(sz1, frame) < 1e-12);

    // Sector route equals the dense route for a diagonal operator.
    const ParityBlocks blocks(b);
    const SpectralEvolver ev(p);
    const VectorXd a = sigma_z_diagonal(b, 1);
    const double sectors = mazur_bound(a, {&ev.spectrum(Sector::even), &ev.spectrum(Sector::odd)}, blocks);
    const auto labelled = eigenphase_spectrum(floquet_unitary(p), Sector::full, b, {true, true});
    CHECK(sectors == doctest::Approx(mazur_bound(MatrixXcd(a.cast<cplx>().asDiagonal()), labelled)).epsilon(1e-9));
}

TEST_CASE("long-time autocorrelation respects the Mazur bound") {
    for (double delta : {3.53, 4.93}) {
        const DriveParams p = chain(8, delta);
        const SpinBasis b(8);
        const ParityBlocks blocks(b);
        const SpectralEvolver ev(p);
        const auto c = autocorrelation(ev, initial_state("phi0", b), 1, sample_times(4000, 4));
        const auto w = window_average(c, 1000, 4000);
        const double bound = mazur_bound(sigma_z_diagonal(b, 1), {&ev.spectrum(Sector::even), &ev.spectrum(Sector::odd)}, blocks);
        CHECK(w.mean >= bound - 3.0 * w.stddev);
    }
}

TEST_CASE("principal-component projections") {
    const DriveParams p = chain(6, 4.93);
    const SpinBasis b(6);
    const ParityBlocks blocks(b);
    const SpectralEvolver ev(p);
    const auto& spec = ev.spectrum(Sector::even);

    const auto k = pca_projections(initial_state("sggggs", b), spec, blocks);
    CHECK(k.basis_weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(k.basis_weights[b.parse("sggggs")] == doctest::Approx(1.0));

    const VectorXcd eig = blocks.from_sector(spec.vectors.column(7), Sector::even);
    const auto e = pca_projections(eig, spec, blocks);
    CHECK(e.eigen_weights[7] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(e.eigen_weights.sum() == doctest::Approx(1.0).epsilon(1e-9));

    std::mt19937_64 rng(3);
    const VectorXcd psi = blocks.from_sector(testing::random_state(blocks.even_dim(), rng), Sector::even);
    const auto r = pca_projections(psi, spec, blocks);
    CHECK(std::abs(r.eigen_weights.sum() - 1.0) < 1e-9);
    CHECK(std::abs(r.basis_weights.sum() - 1.0) < 1e-9);
    FloquetSpectrum rephased = spec;
    MatrixXcd v = spec.vectors.to_dense();
    for (Index c = 0; c < v.cols(); ++c) v.col(c) *= std::polar(1.0, 0.1 * c);
    rephased.vectors = Eigenbasis::dense(v);
    CHECK((pca_projections(psi, rephased, blocks).eigen_weights - r.eigen_weights).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigenstate entropies") {
    DriveParams p = chain(6, 1.1);
    p.rabi_high = 0.0;
    const SpinBasis b(6);
    const ParityBlocks blocks(b);
    const auto product = eigenstate_entropy_map(eigenphase_spectrum(floquet_unitary(p), Sector::full, b), blocks);
    CHECK(product.entropies.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(product.low_fraction == 1.0);
    const auto map = eigenstate_entropy_map(floquet_spectrum(p, Sector::odd), blocks);
    // Undriven odd-sector eigenstates are (|k> - |r(k)>)/sqrt2, entangled
    // at most ln 2 across the middle.
    for (Index i = 0; i < map.entropies.size(); ++i) CHECK(map.entropies[i] <= std::log(2.0) + 1e-9);
    const auto chaotic = eigenstate_entropy_map(floquet_spectrum(chain(10, 4.93), Sector::even), ParityBlocks(SpinBasis(10)));
    const auto cold = eigenstate_entropy_map(floquet_spectrum(chain(10, 3.53), Sector::even), ParityBlocks(SpinBasis(10)));
    CHECK(chaotic.low_fraction < cold.low_fraction);
    CHECK(chaotic.entropies.mean() > cold.entropies.mean());
}
