#pragma once
#include <vector>

#include "sunfact/factorization.hpp"
#include "sunfact/model.hpp"

namespace sunfact {

struct ProjectedState {
    VectorXcd vector;  // unit norm
    SectorLabel label;
    VectorXcd source_f;
    double weight = 0.0;  // squared projection weight before renormalizing
};

// Amplitude masking of the uniform product state onto one parity sector.
ProjectedState parity_project(const VectorXcd& f, int N,
                              const SectorLabel& sigma);

// Closed form occupations of the n = 3 parity projected state,
// u_j = 1 - 2|f_j|^2.
VectorXd projected_occupations_n3(const VectorXcd& f, int N,
                                  const SectorLabel& sigma);

// Occupations by brute-force projection, any n.
VectorXd projected_occupations(const VectorXcd& f, int N,
                               const SectorLabel& sigma);

// Equal-amplitude superposition of all configs with the given level counts.
ProjectedState symmetric_state(const std::vector<int>& occupations, int n,
                               int N);

// First-order level splitting dE = sum_i deps_i * N * <n_i>_sigma.
double perturbative_splitting(const VectorXcd& f, int N,
                              const SectorLabel& sigma,
                              const VectorXd& delta_eps);

// Projections of the product state onto every nonempty occupation sector;
// phases fixed so members coincide with symmetric_state for full-rank f.
std::vector<ProjectedState> number_projected_family(const VectorXcd& f, int N);

// u (x) u (x) ... (x) u applied site-wise.
VectorXcd apply_local_unitary(const VectorXcd& state,
                              const Eigen::MatrixXcd& u, int n, int N);

}  // namespace sunfact
