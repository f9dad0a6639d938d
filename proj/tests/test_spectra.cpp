#include "doctest.h"
#include "sunfact/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "sunfact/families.hpp"

using namespace sunfact;

namespace {

ModelSpec random_spec(int n, int N, unsigned seed, bool with_V) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    VectorXd eps(n);
    for (int i = 0; i < n; ++i) eps(i) = dist(rng);
    MatrixXd U(n, n), V = MatrixXd::Zero(n, n), W = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            U(i, j) = U(j, i) = dist(rng);
            if (i != j) {
                if (with_V) V(i, j) = V(j, i) = dist(rng);
                W(i, j) = W(j, i) = dist(rng);
            }
        }
    return make_spec(n, N, eps, U, V, W,
                     make_graph(GraphKind::ring_first_neighbor, N));
}

}  // namespace

TEST_CASE("single entry matrix") {
    HamiltonianMatrix H;
    H.dim = H.full_dim = 1;
    H.data = MatrixXd::Constant(1, 1, 3.5);
    SpectrumResult s = eigensolve(H);
    CHECK(s.eigenvalues.size() == 1);
    CHECK(s.eigenvalues(0) == doctest::Approx(3.5));
    CHECK(s.gap == 0.0);
    CHECK(s.gs_band == std::vector<int>{0});
}

TEST_CASE("input validation") {
    HamiltonianMatrix H;
    H.dim = H.full_dim = 2;
    H.data = MatrixXd::Zero(2, 2);
    H.data(0, 1) = 1.0;  // asymmetric
    CHECK_THROWS_AS(eigensolve(H), ConfigError);
    H.data(1, 0) = 1.0;
    CHECK_THROWS_AS(eigensolve(H, false, 0), ConfigError);
    CHECK_NOTHROW(eigensolve(H));
}

TEST_CASE("diagonal model gives the sorted site energy sums") {
    VectorXd eps(2);
    eps << 0.2, -0.1;
    MatrixXd Z = MatrixXd::Zero(2, 2);
    ModelSpec s = make_spec(2, 2, eps, Z, Z, Z,
                            make_graph(GraphKind::ring_first_neighbor, 2));
    SpectrumResult sp = eigensolve(build_full(s));
    VectorXd expect(4);
    expect << -0.2, 0.1, 0.1, 0.4;
    CHECK((sp.eigenvalues - expect).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(sp.gap == doctest::Approx(0.3));
}

TEST_CASE("truncation keeps the lowest levels") {
    ModelSpec s = random_spec(2, 4, 21, true);
    HamiltonianMatrix H = build_full(s);
    SpectrumResult full = eigensolve(H);
    SpectrumResult head = eigensolve(H, false, 5);
    CHECK(head.eigenvalues.size() == 5);
    CHECK((head.eigenvalues - full.eigenvalues.head(5)).cwiseAbs().maxCoeff() <
          1e-14);
    CHECK(head.gap == doctest::Approx(full.gap));
}

TEST_CASE("sector merge reproduces the full spectrum") {
    for (unsigned seed : {31u, 32u, 33u}) {
        ModelSpec s = random_spec(3, 3, seed, true);
        VectorXd full = eigensolve(build_full(s)).eigenvalues;
        SpectrumResult merged = sector_spectrum(s, SectorKind::parity);
        REQUIRE(merged.eigenvalues.size() == full.size());
        CHECK((merged.eigenvalues - full).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(merged.sectors.size() == static_cast<size_t>(full.size()));
    }
    // occupation blocks in the V = 0 case
    ModelSpec s = random_spec(3, 3, 34, false);
    VectorXd full = eigensolve(build_full(s)).eigenvalues;
    SpectrumResult merged = sector_spectrum(s, SectorKind::occupation);
    CHECK((merged.eigenvalues - full).cwiseAbs().maxCoeff() < 1e-10);

    ModelSpec with_v = random_spec(3, 3, 35, true);
    CHECK_THROWS_AS(sector_spectrum(with_v, SectorKind::occupation),
                    ConfigError);
}

TEST_CASE("sector eigenvectors live in the full space") {
    ModelSpec s = random_spec(2, 3, 36, true);
    SpectrumResult sp = sector_spectrum(s, SectorKind::parity, true);
    REQUIRE(sp.eigenvectors.has_value());
    CHECK(sp.eigenvectors->rows() == 8);
    HamiltonianMatrix H = build_full(s);
    for (int c = 0; c < 3; ++c) {
        VectorXd v = sp.eigenvectors->col(c);
        CHECK(std::abs(v.norm() - 1.0) < 1e-10);
        CHECK((H.data * v - sp.eigenvalues(c) * v).cwiseAbs().maxCoeff() <
              1e-9);
    }
}

TEST_CASE("uniform coupling point has five equally spaced levels") {
    ModelSpec s = heisenberg_eps_spec(0.0, 4);
    SpectrumResult sp = eigensolve(build_full(s));
    std::map<int, int> mult;
    for (int i = 0; i < sp.eigenvalues.size(); ++i) {
        double e = sp.eigenvalues(i);
        int bucket = static_cast<int>(std::llround(e));
        CHECK(std::abs(e - bucket) < 1e-10);
        mult[bucket]++;
    }
    REQUIRE(mult.size() == 5);
    CHECK(mult[-2] == 35);
    CHECK(mult[-1] == 110);
    CHECK(mult[0] == 60);
    CHECK(mult[1] == 50);
    CHECK(mult[2] == 1);
    CHECK(sp.gs_band.size() == 35);
}

TEST_CASE("excitations close at the factorization point") {
    SpectrumResult sp = sector_spectrum(band_vw_spec(1.0, 4),
                                        SectorKind::parity);
    VectorXd dE = excitation_energies(sp, 3);
    CHECK(dE.size() == 3);
    CHECK(dE.maxCoeff() < 1e-9);
    CHECK(static_cast<int>(sp.gs_band.size()) == 4);
}

TEST_CASE("crossing scan finds the four-level closing") {
    auto family = [](double t) { return band_vw_spec(t, 4); };
    SweepResult sweep = find_crossings(family, 0.8, 1.2, 4,
                                       SectorKind::parity, 41, 6, 2);
    REQUIRE(sweep.events.size() == 1);
    const CrossingEvent& ev = sweep.events[0];
    CHECK(std::abs(ev.param - 1.0) < 1e-6);
    CHECK(ev.kind == CrossingKind::factorization_crossing);
    CHECK(ev.multiplicity >= 4);
    CHECK(ev.sector_before.str() == "+++");
    CHECK(ev.sector_after.str() == "+--");
    CHECK(sweep.points.size() == 41);
    CHECK(sweep.points[0].levels.size() == 6);

    // grid refinement does not move or duplicate the event
    SweepResult fine = find_crossings(family, 0.8, 1.2, 4,
                                      SectorKind::parity, 81, 6, 2);
    REQUIRE(fine.events.size() == 1);
    CHECK(std::abs(fine.events[0].param - ev.param) < 1e-6);
}

TEST_CASE("parallel map covers every index once and rethrows") {
    std::vector<int> hits(257, 0);
    std::atomic<int> total{0};
    parallel_for_indices(257, 4, [&](int i) {
        hits[i]++;
        total++;
    });
    CHECK(total == 257);
    CHECK(std::all_of(hits.begin(), hits.end(),
                      [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for_indices(8, 2,
                                         [](int i) {
                                             if (i == 5)
                                                 throw ConfigError("boom");
                                         }),
                    ConfigError);
}
