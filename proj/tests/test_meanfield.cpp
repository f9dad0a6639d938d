#include "doctest.h"
#include "sunfact/meanfield.hpp"

#include <cmath>
#include <random>

#include "sunfact/factorization.hpp"
#include "sunfact/families.hpp"

using namespace sunfact;

namespace {
const double kE2c = -1.2576860524351452;

ModelSpec random_attractive(int n, int N, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> pos(0.0, 1.0);
    std::uniform_real_distribution<double> any(-1.0, 1.0);
    VectorXd eps(n);
    for (int i = 0; i < n; ++i) eps(i) = any(rng);
    MatrixXd U(n, n), V = MatrixXd::Zero(n, n), W = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            U(i, j) = U(j, i) = pos(rng);
            if (i != j) {
                V(i, j) = V(j, i) = pos(rng);
                W(i, j) = W(j, i) = pos(rng);
            }
        }
    return make_spec(n, N, eps, U, V, W,
                     make_graph(GraphKind::ring_first_neighbor, N));
}
}  // namespace

TEST_CASE("mean field is exact at the factorization point") {
    ModelSpec s = band_vw_spec(1.0, 4);
    MeanFieldSolution mf = mf_solve(s);
    FactorizationSolution exact = solve_uniform(s);

    CHECK(std::abs(mf.energy - 2.0 * kE2c) < 1e-9);
    CHECK(std::abs(mf.lambda - kE2c) < 1e-9);
    CHECK((mf.f_squared - exact.f_squared).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(mf.occupied == std::vector<int>{0, 1, 2});
    CHECK_FALSE(mf.used_fallback);
    CHECK_FALSE(mf.warning_attractive);
}

TEST_CASE("closed form agrees with projected gradient descent") {
    for (unsigned seed = 1; seed <= 8; ++seed) {
        int n = 3 + static_cast<int>(seed % 2);
        ModelSpec s = random_attractive(n, 4, seed);
        MeanFieldSolution mf = mf_solve(s);
        VectorXd brute = mf_minimize_bruteforce(s);
        double e_brute = mf_energy(brute, s);
        CHECK(mf.energy <= e_brute + 1e-8);
        CHECK(std::abs(mf.energy - e_brute) < 1e-8);
        CHECK(std::abs(mf.energy - mf_energy(mf.f_squared, s)) < 1e-10);
        // stationarity over the populated levels
        VectorXd res = mf.M_tilde * mf.f_squared;
        for (int i : mf.occupied)
            CHECK(std::abs(res(i) - mf.lambda) < 1e-9);
    }
}

TEST_CASE("population onsets of the three-level ladder family") {
    auto family = [](double t) { return band_vw_spec(t, 4); };
    auto transitions = mf_transition_points(family, 0.0, 1.0, 64);
    REQUIRE(transitions.size() == 2);
    CHECK(std::abs(transitions[0].param - 0.43189602133348715) < 2e-6);
    CHECK(transitions[0].levels_added == std::vector<int>{1});
    CHECK(transitions[0].levels_removed.empty());
    CHECK(std::abs(transitions[1].param - 0.6456548955790005) < 2e-6);
    CHECK(transitions[1].levels_added == std::vector<int>{2});
}

TEST_CASE("self interaction keeps a single level populated") {
    VectorXd eps(2);
    eps << 0.0, 0.3;
    MatrixXd U = MatrixXd::Zero(2, 2), Z = MatrixXd::Zero(2, 2);
    U(0, 0) = 0.2;
    ModelSpec s = make_spec(2, 4, eps, U, Z, Z,
                            make_graph(GraphKind::ring_first_neighbor, 4));
    MeanFieldSolution mf = mf_solve(s);
    CHECK(mf.occupied == std::vector<int>{0});
    CHECK(mf.f_squared(0) == doctest::Approx(1.0));
    CHECK(mf.energy == doctest::Approx(-0.4));
    CHECK(std::abs(mf.lambda - mf.M_tilde(0, 0)) < 1e-12);
}

TEST_CASE("degenerate coupling matrix falls back to subset search") {
    // all entries of eps + eps - J coincide, so f^2 is free: any simplex
    // point gives the same energy and the full support is preferred
    ModelSpec s = heisenberg_eps_spec(0.0, 4);
    MeanFieldSolution mf = mf_solve(s);
    CHECK(mf.used_fallback);
    CHECK(mf.energy == doctest::Approx(-2.0));
    CHECK(std::abs(mf.lambda + 1.0) < 1e-9);
    CHECK(mf.occupied.size() == 4);
}

TEST_CASE("repulsive entries raise the warning flag") {
    ModelSpec s = random_attractive(3, 4, 5);
    s.W(0, 1) = s.W(1, 0) = -0.2;
    CHECK(mf_solve(s).warning_attractive);
    CHECK_FALSE(mf_solve(random_attractive(3, 4, 5)).warning_attractive);
}

TEST_CASE("edge scaling is a no-op on a uniform ring") {
    ModelSpec s = random_attractive(3, 5, 6);
    s.edge_scaling = false;
    MeanFieldSolution plain = mf_solve(s);
    s.edge_scaling = true;
    MeanFieldSolution scaled = mf_solve(s);
    CHECK(std::abs(plain.energy - scaled.energy) < 1e-12);
    CHECK((plain.f_squared - scaled.f_squared).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("energy functional validates its input") {
    ModelSpec s = random_attractive(3, 4, 7);
    VectorXd bad = VectorXd::Constant(3, 0.5);
    CHECK_THROWS_AS(mf_energy(bad, s), ConfigError);
    CHECK_THROWS_AS(mf_energy(VectorXd::Constant(2, 0.5), s), ConfigError);
}
