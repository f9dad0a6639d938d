#pragma once
#include <vector>

#include "sunfact/model.hpp"

namespace sunfact {

struct DensityMatrix {
    std::vector<int> sites;  // ordered subset of [0, N)
    std::int64_t dim = 0;    // n^{|sites|}
    Eigen::MatrixXcd data;   // Hermitian, unit trace, PSD up to noise
    VectorXd eigenvalues;    // ascending, cached
};

DensityMatrix reduce(const VectorXcd& state, const std::vector<int>& sites,
                     int n, int N);

// Von Neumann entropy in bits; eigenvalues in (-1e-10, 0) clip to zero,
// anything more negative is an upstream bug.
double entropy(const DensityMatrix& rho);

// Partial transpose on the first-listed site; returns -sum(negative eigs),
// asserted equal to (trace-norm - 1)/2.
double negativity(const DensityMatrix& rho_pq, int n);

double mutual_information(const VectorXcd& state, int p, int q, int n, int N);

// Diagonal of each site's reduced matrix in the standard basis.
std::vector<VectorXd> occupations(const VectorXcd& state, int n, int N);
VectorXd site_occupations(const VectorXcd& state, int site, int n, int N);

// All n^2 eigenvalues of the pair state, descending.
VectorXd pair_spectrum(const VectorXcd& state, int p, int q, int n, int N);

}  // namespace sunfact
