#include "doctest.h"
#include "sunfact/entanglement.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "sunfact/factorization.hpp"
#include "sunfact/families.hpp"
#include "sunfact/projection.hpp"

using namespace sunfact;

namespace {

VectorXcd random_state(std::int64_t dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    VectorXcd psi(dim);
    for (std::int64_t i = 0; i < dim; ++i)
        psi(i) = std::complex<double>(dist(rng), dist(rng));
    psi /= psi.norm();
    return psi;
}

Eigen::MatrixXcd trace_out_second(const DensityMatrix& rho, int n) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                out(a, b) += rho.data(a + n * c, b + n * c);
    return out;
}

}  // namespace

TEST_CASE("product states carry no entanglement") {
    VectorXd f(3);
    f << 0.8, 0.5, std::sqrt(1 - 0.64 - 0.25);
    VectorXcd psi = product_state(f, 3);
    DensityMatrix rho = reduce(psi, {1}, 3, 3);
    CHECK(entropy(rho) < 1e-10);
    CHECK(rho.eigenvalues(rho.eigenvalues.size() - 1) ==
          doctest::Approx(1.0));
    CHECK(negativity(reduce(psi, {0, 2}, 3, 3), 3) < 1e-10);
    CHECK(mutual_information(psi, 0, 1, 3, 3) < 1e-9);
}

TEST_CASE("maximally entangled pair") {
    VectorXcd bell(4);
    bell << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
    DensityMatrix rho = reduce(bell, {0}, 2, 2);
    CHECK(rho.eigenvalues(0) == doctest::Approx(0.5));
    CHECK(rho.eigenvalues(1) == doctest::Approx(0.5));
    CHECK(entropy(rho) == doctest::Approx(1.0));

    DensityMatrix pair = reduce(bell, {0, 1}, 2, 2);
    CHECK(entropy(pair) < 1e-10);  // pure global state
    CHECK(negativity(pair, 2) == doctest::Approx(0.5));
    CHECK(mutual_information(bell, 0, 1, 2, 2) == doctest::Approx(2.0));
}

TEST_CASE("reduction argument validation") {
    VectorXcd psi = random_state(8, 41);
    CHECK_THROWS_AS(reduce(psi, {}, 2, 3), ConfigError);
    CHECK_THROWS_AS(reduce(psi, {0, 0}, 2, 3), ConfigError);
    CHECK_THROWS_AS(reduce(psi, {3}, 2, 3), ConfigError);
    CHECK_THROWS_AS(reduce(2.0 * psi, {0}, 2, 3), ConfigError);
    CHECK_THROWS_AS(reduce(psi, {0}, 2, 4), ConfigError);
    CHECK_THROWS_AS(mutual_information(psi, 1, 1, 2, 3), ConfigError);
}

TEST_CASE("partial trace consistency and subadditivity") {
    for (unsigned seed : {42u, 43u, 44u}) {
        VectorXcd psi = random_state(81, seed);  // n = 3, N = 4
        for (int p = 0; p < 4; ++p)
            for (int q = 0; q < 4; ++q) {
                if (p == q) continue;
                DensityMatrix pair = reduce(psi, {p, q}, 3, 4);
                DensityMatrix site = reduce(psi, {p}, 3, 4);
                CHECK((trace_out_second(pair, 3) - site.data)
                          .cwiseAbs()
                          .maxCoeff() < 1e-12);
                CHECK(entropy(pair) <=
                      entropy(site) + entropy(reduce(psi, {q}, 3, 4)) + 1e-10);
                // transposing either site gives the same negativity
                CHECK(std::abs(negativity(pair, 3) -
                               negativity(reduce(psi, {q, p}, 3, 4), 3)) <
                      1e-10);
            }
    }
}

TEST_CASE("occupations") {
    VectorXd f(3);
    f << 0.6, 0.0, 0.8;
    VectorXcd psi = product_state(f, 3);
    auto occ = occupations(psi, 3, 3);
    REQUIRE(occ.size() == 3);
    for (int p = 0; p < 3; ++p) {
        CHECK(occ[p](0) == doctest::Approx(0.36));
        CHECK(occ[p](1) == doctest::Approx(0.0));
        CHECK(occ[p](2) == doctest::Approx(0.64));
        CHECK((occ[p] - site_occupations(psi, p, 3, 3)).cwiseAbs().maxCoeff() <
              1e-14);
    }

    // basis configuration gives indicator vectors
    VectorXcd basis = VectorXcd::Zero(9);
    basis(config_to_index({1, 0}, 3)) = 1.0;
    CHECK(site_occupations(basis, 0, 3, 2)(1) == doctest::Approx(1.0));
    CHECK(site_occupations(basis, 1, 3, 2)(0) == doctest::Approx(1.0));
}

TEST_CASE("pair spectrum is the descending reduced spectrum") {
    VectorXcd psi = random_state(16, 45);
    VectorXd sp = pair_spectrum(psi, 0, 1, 2, 4);
    REQUIRE(sp.size() == 4);
    CHECK(sp(0) >= sp(1));
    CHECK(sp(1) >= sp(2));
    CHECK(sp(2) >= sp(3));
    CHECK(std::abs(sp.sum() - 1.0) < 1e-10);
    DensityMatrix rho = reduce(psi, {0, 1}, 2, 4);
    CHECK(std::abs(sp(0) - rho.eigenvalues(3)) < 1e-12);
}

TEST_CASE("occupation jump at the crossing matches the closed form") {
    FactorizationSolution sol = solve_uniform(band_vw_spec(1.0, 4));
    SectorLabel low, high;
    low.kind = high.kind = SectorKind::parity;
    low.parity = {1, 1, 1};
    high.parity = {1, -1, -1};

    VectorXd occ_low, occ_high;
    for (const SectorLabel* sig : {&low, &high}) {
        ProjectedState ps = parity_project(sol.f, 4, *sig);
        VectorXd from_state = site_occupations(ps.vector, 0, 3, 4);
        VectorXd closed = projected_occupations_n3(sol.f, 4, *sig);
        CHECK((from_state - closed).cwiseAbs().maxCoeff() < 1e-10);
        if (sig == &low)
            occ_low = from_state;
        else
            occ_high = from_state;
    }
    CHECK((occ_low - occ_high).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("pair negativity of projected states shrinks with system size") {
    VectorXcd f(2);
    f << std::cos(0.4), std::sin(0.4);
    SectorLabel even;
    even.kind = SectorKind::parity;
    even.parity = {1, 1};

    auto pair_neg = [&](int N) {
        ProjectedState ps = parity_project(f, N, even);
        return negativity(reduce(ps.vector, {0, 1}, 2, N), 2);
    };
    double n4 = pair_neg(4);
    double n8 = pair_neg(8);
    CHECK(n8 < n4);
    CHECK(n4 > 1e-4);  // genuinely entangled at small N
}
