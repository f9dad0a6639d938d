#pragma once
#include <complex>
#include <vector>

#include "sunfact/hamiltonian.hpp"
#include "sunfact/model.hpp"

namespace sunfact {

struct FactorizationSolution {
    double E2 = 0.0;          // lowest eigenvalue of M
    VectorXd f_squared;       // normalized to sum |f2_i| = 1 (unit sum when all >= 0)
    VectorXcd f;              // sqrt(f2_i), purely imaginary for negative entries
    MatrixXd T_required;      // off-diagonal eps_i + eps_j - E2, zero diagonal
    bool is_gs = false;       // W_ij >= 0 for the default split
    bool sufficiency = false; // U_ij <= (U_ii + U_jj)/2 for the default split
    bool continuous_set = false;  // degenerate lowest eigenvalue of M
    long degeneracy = 0;
    double total_energy = 0.0;  // E = E2/2 * sum_p r_p (NaN when graph unknown)
};

MatrixXd build_M(const VectorXd& epsilon, const VectorXd& U_diag,
                 const MatrixXd& V);

// Core solver; degeneracy uses N, total_energy uses r_total when supplied.
FactorizationSolution solve_uniform(const VectorXd& epsilon,
                                    const VectorXd& U_diag, const MatrixXd& V,
                                    int N,
                                    double r_total =
                                        std::numeric_limits<double>::quiet_NaN());
FactorizationSolution solve_uniform(const ModelSpec& spec);

// (is_gs, sufficiency) for an explicit U/W split.
std::pair<bool, bool> check_gs_conditions(const MatrixXd& W, const MatrixXd& U);

// eps_i = (T_ij + T_ik - T_jk + E2)/2 for n = 3.
VectorXd solve_onsite_energies_n3(const MatrixXd& T, double E2);

// V = 0 family: U_ii = 2 eps_i - E2, T_ij = (U_ii + U_jj)/2.
std::pair<VectorXd, MatrixXd> factorization_v0(const VectorXd& epsilon,
                                               double E2);

// |b| = sqrt((Jy-Jz)(Jx-Jz)), cos(theta) = sqrt((Jy-Jz)/(Jx-Jz)).
std::pair<double, double> xyz_factorizing_field(double Jx, double Jy, double Jz);

long degeneracy_count(int n, int N, bool v_zero);

VectorXcd product_state(const VectorXcd& f, int N);
VectorXcd product_state(const VectorXd& f, int N);

// (energy, residual): <psi|H|psi> and ||H psi - E psi||_2.
std::pair<double, double> verify_eigenstate(const HamiltonianMatrix& H,
                                            const VectorXcd& psi);

// All 2^{n-1} sign patterns modulo global phase; duplicates from zero entries
// collapse.
std::vector<VectorXcd> parity_flip_family(const VectorXcd& f);

}  // namespace sunfact
