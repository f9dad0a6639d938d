#pragma once
#include <functional>
#include <vector>

#include "sunfact/model.hpp"

namespace sunfact {

struct MeanFieldSolution {
    VectorXd f_squared;         // >= 0, sums to 1
    std::vector<int> occupied;  // levels with f^2 > 0
    double energy = 0.0;
    double lambda = 0.0;        // Lagrange multiplier; equals E2 at factorization
    MatrixXd M_tilde;           // eps_i + eps_j - J_ij with J = U + V + W
    bool warning_attractive = false;  // some coupling negative
    bool used_fallback = false;       // singular active-set system
};

MeanFieldSolution mf_solve(const ModelSpec& spec);
double mf_energy(const VectorXd& f_squared, const ModelSpec& spec);

// Deterministic projected-gradient minimizer over the simplex (oracle and
// fallback path); returns the best f^2 found.
VectorXd mf_minimize_bruteforce(const ModelSpec& spec, int random_restarts = 16,
                                unsigned seed = 12345);

struct MfTransition {
    double param = 0.0;
    std::vector<int> levels_added;  // newly populated levels, 0-based
    std::vector<int> levels_removed;
};

// Grid scan of the occupied set with bisection (1e-6) on each change.
std::vector<MfTransition> mf_transition_points(
    const std::function<ModelSpec(double)>& family, double from, double to,
    int coarse_steps = 64);

}  // namespace sunfact
