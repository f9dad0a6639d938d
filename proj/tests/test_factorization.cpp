#include "doctest.h"
#include "sunfact/factorization.hpp"
#include "sunfact/families.hpp"

#include <cmath>

using namespace sunfact;

namespace {
// lowest pair energy of the three-level ladder at the crossing coupling,
// frozen from an independent diagonalization of the 3x3 pair matrix
const double kE2c = -1.2576860524351452;
}  // namespace

TEST_CASE("pair matrix assembly") {
    VectorXd eps(2), Ud(2);
    eps << -0.5, 0.5;
    Ud << 0.1, 0.2;
    MatrixXd V = MatrixXd::Zero(2, 2);
    V(0, 1) = V(1, 0) = 0.4;
    MatrixXd M = build_M(eps, Ud, V);
    CHECK(M(0, 0) == doctest::Approx(-1.1));
    CHECK(M(1, 1) == doctest::Approx(0.8));
    CHECK(M(0, 1) == doctest::Approx(-0.4));
    CHECK_THROWS_AS(build_M(eps, VectorXd::Zero(3), V), ConfigError);
}

TEST_CASE("three-level ladder at the crossing coupling") {
    ModelSpec s = band_vw_spec(1.0, 2);
    FactorizationSolution sol = solve_uniform(s);

    CHECK(std::abs(sol.E2 - kE2c) < 5e-13);
    CHECK(std::abs(band_vw_E2c() - kE2c) < 5e-13);

    CHECK(std::abs(sol.f_squared.sum() - 1.0) < 1e-12);
    CHECK(sol.f_squared.minCoeff() > 0.0);
    CHECK(sol.f_squared(0) > sol.f_squared(1));
    CHECK(sol.f_squared(1) > sol.f_squared(2));

    MatrixXd M = build_M(s.epsilon, s.U.diagonal(), s.V);
    CHECK((M * sol.f_squared - sol.E2 * sol.f_squared).cwiseAbs().maxCoeff() <
          1e-12);

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j)
                CHECK(sol.T_required(i, j) ==
                      doctest::Approx(s.epsilon(i) + s.epsilon(j) - sol.E2));

    CHECK(sol.is_gs);
    CHECK(sol.sufficiency);
    CHECK_FALSE(sol.continuous_set);
    CHECK(sol.degeneracy == 4);
    CHECK(sol.total_energy == doctest::Approx(kE2c));  // r_total = 2 for a pair

    FactorizationSolution ring4 = solve_uniform(band_vw_spec(1.0, 4));
    CHECK(ring4.total_energy == doctest::Approx(2.0 * kE2c));
    CHECK(std::abs(ring4.E2 - sol.E2) < 1e-15);  // pair problem is N independent
}

TEST_CASE("ground state conditions on explicit splits") {
    MatrixXd W = MatrixXd::Zero(2, 2), U = MatrixXd::Zero(2, 2);
    W(0, 1) = W(1, 0) = 0.3;
    auto [gs, suf] = check_gs_conditions(W, U);
    CHECK(gs);
    CHECK(suf);

    W(0, 1) = W(1, 0) = -0.3;
    CHECK_FALSE(check_gs_conditions(W, U).first);

    W(0, 1) = W(1, 0) = 0.0;
    U(0, 0) = U(1, 1) = 0.5;
    U(0, 1) = U(1, 0) = 1.0;  // above the diagonal mean
    CHECK_FALSE(check_gs_conditions(W, U).second);
    U(0, 1) = U(1, 0) = 0.5;
    CHECK(check_gs_conditions(W, U).second);
}

TEST_CASE("onsite energies recovered from pair couplings for n = 3") {
    VectorXd eps(3);
    eps << -1.0, 0.0, 0.8;
    const double E2 = -5.0;
    auto [Ud, T] = factorization_v0(eps, E2);
    CHECK(Ud(0) == doctest::Approx(3.0));
    CHECK(Ud(1) == doctest::Approx(5.0));
    CHECK(Ud(2) == doctest::Approx(6.6));
    CHECK(T(0, 1) == doctest::Approx(4.0));
    CHECK(T(0, 2) == doctest::Approx(4.8));
    CHECK(T(1, 2) == doctest::Approx(5.8));
    CHECK(T(0, 0) == 0.0);

    VectorXd back = solve_onsite_energies_n3(T, E2);
    CHECK((back - eps).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(solve_onsite_energies_n3(MatrixXd::Zero(2, 2), E2),
                    ConfigError);
}

TEST_CASE("uniform pair-matrix family with V = 0 is fully degenerate") {
    VectorXd eps(3);
    eps << -1.0, 0.0, 0.8;
    auto [Ud, T] = factorization_v0(eps, -5.0);
    FactorizationSolution sol =
        solve_uniform(eps, Ud, MatrixXd::Zero(3, 3), 4, 4.0);
    CHECK(std::abs(sol.E2 + 5.0) < 1e-12);
    CHECK(sol.continuous_set);
    CHECK(sol.degeneracy == 15);  // multiset count C(6,2)
    CHECK(sol.total_energy == doctest::Approx(-10.0));
    CHECK(sol.is_gs);
}

TEST_CASE("anisotropic spin couplings: factorizing field and angle") {
    auto [b, ct] = xyz_factorizing_field(1.0, 0.5, 0.0);
    CHECK(b == doctest::Approx(std::sqrt(0.5)));
    CHECK(ct == doctest::Approx(std::sqrt(0.5)));

    auto [b2, ct2] = xyz_factorizing_field(1.0, 1.0, 0.0);
    CHECK(b2 == doctest::Approx(1.0));
    CHECK(ct2 == doctest::Approx(1.0));

    auto [b3, ct3] = xyz_factorizing_field(1.0, 0.5, 0.5);
    CHECK(b3 == 0.0);
    CHECK(ct3 == 0.0);

    CHECK_THROWS_AS(xyz_factorizing_field(1.0, 0.5, 0.7), ConfigError);
}

TEST_CASE("two-level reduction reproduces the spin-model closed forms") {
    const double cases[3][3] = {
        {1.0, 0.7, 0.2}, {2.0, 1.5, -0.5}, {1.0, 0.5, 0.0}};
    for (const auto& J : cases) {
        const double Jx = J[0], Jy = J[1], Jz = J[2];
        auto [b, ct] = xyz_factorizing_field(Jx, Jy, Jz);
        VectorXd eps(2), Ud(2);
        eps << -b / 2, b / 2;
        Ud << Jz / 2, Jz / 2;
        MatrixXd V = MatrixXd::Zero(2, 2);
        V(0, 1) = V(1, 0) = (Jx - Jy) / 2;
        FactorizationSolution sol = solve_uniform(eps, Ud, V, 4);

        double E2_expect = -Jz / 2 - std::sqrt(b * b + V(0, 1) * V(0, 1));
        CHECK(std::abs(sol.E2 - E2_expect) < 1e-12);
        CHECK(std::abs(sol.E2 - (Jz - Jx - Jy) / 2) < 1e-12);
        CHECK(std::abs((sol.f_squared(0) - sol.f_squared(1)) - ct) < 1e-12);
        // W_12 = T_12 - U_12 with U_12 = -Jz/2 recovers (Jx + Jy)/2
        CHECK(std::abs(sol.T_required(0, 1) + Jz / 2 - (Jx + Jy) / 2) < 1e-12);
        CHECK(sol.is_gs);
        CHECK(sol.degeneracy == 2);
    }
}

TEST_CASE("ground state degeneracy counting") {
    CHECK(degeneracy_count(3, 4, false) == 4);
    CHECK(degeneracy_count(4, 2, false) == 7);
    CHECK(degeneracy_count(4, 3, false) == 8);
    CHECK(degeneracy_count(5, 3, false) == 15);
    CHECK(degeneracy_count(3, 4, true) == 15);
    CHECK(degeneracy_count(4, 4, true) == 35);
    CHECK(degeneracy_count(2, 6, false) == 2);
    CHECK_THROWS_AS(degeneracy_count(1, 4, false), ConfigError);
}

TEST_CASE("product state amplitudes in the standard basis") {
    VectorXd f(2);
    f << 0.6, 0.8;
    VectorXcd psi = product_state(f, 2);
    CHECK(std::abs(psi(0) - 0.36) < 1e-15);
    CHECK(std::abs(psi(1) - 0.48) < 1e-15);
    CHECK(std::abs(psi(2) - 0.48) < 1e-15);
    CHECK(std::abs(psi(3) - 0.64) < 1e-15);
    CHECK(std::abs(psi.squaredNorm() - 1.0) < 1e-14);

    VectorXd bad(2);
    bad << 1.0, 1.0;
    CHECK_THROWS_AS(product_state(bad, 2), ConfigError);
}

TEST_CASE("factorized product state is an exact eigenstate at the crossing") {
    ModelSpec s = band_vw_spec(1.0, 4);
    FactorizationSolution sol = solve_uniform(s);
    HamiltonianMatrix H = build_full(s);

    for (const VectorXcd& g : parity_flip_family(sol.f)) {
        auto [energy, residual] = verify_eigenstate(H, product_state(g, 4));
        CHECK(residual < 1e-9);
        CHECK(std::abs(energy - 2.0 * kE2c) < 1e-9);
    }
}

TEST_CASE("sign flip family sizes") {
    VectorXcd f(3);
    f << 0.8, 0.5, std::sqrt(1 - 0.64 - 0.25);
    CHECK(parity_flip_family(f).size() == 4);

    VectorXcd g(3);
    g << 0.6, 0.8, 0.0;
    CHECK(parity_flip_family(g).size() == 2);

    VectorXcd h(2);
    h << 0.6, 0.8;
    CHECK(parity_flip_family(h).size() == 2);
}
