#include "sunfact/factorization.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace sunfact {

using std::complex;

MatrixXd build_M(const VectorXd& epsilon, const VectorXd& U_diag,
                 const MatrixXd& V) {
    const int n = static_cast<int>(epsilon.size());
    if (U_diag.size() != n || V.rows() != n || V.cols() != n)
        throw ConfigError("build_M dimension mismatch");
    MatrixXd M = -V;
    for (int i = 0; i < n; ++i) M(i, i) = 2.0 * epsilon(i) - U_diag(i);
    return M;
}

static VectorXcd f_from_squares(const VectorXd& f2) {
    VectorXcd f(f2.size());
    for (int i = 0; i < f2.size(); ++i) {
        if (f2(i) >= 0.0)
            f(i) = complex<double>(std::sqrt(f2(i)), 0.0);
        else
            f(i) = complex<double>(0.0, std::sqrt(-f2(i)));
    }
    return f;
}

FactorizationSolution solve_uniform(const VectorXd& epsilon,
                                    const VectorXd& U_diag, const MatrixXd& V,
                                    int N, double r_total) {
    const int n = static_cast<int>(epsilon.size());
    MatrixXd M = build_M(epsilon, U_diag, V);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
    if (es.info() != Eigen::Success)
        throw InternalError("eigensolve of the pair matrix failed");

    FactorizationSolution sol;
    sol.E2 = es.eigenvalues()(0);
    if (n > 1) {
        double gap = es.eigenvalues()(1) - es.eigenvalues()(0);
        sol.continuous_set = gap <= 1e-9 * std::max(1.0, std::abs(sol.E2));
    }

    VectorXd f2 = es.eigenvectors().col(0);
    double norm1 = f2.cwiseAbs().sum();
    if (norm1 < 1e-300)
        throw InternalError("pair matrix eigenvector is numerically zero");
    f2 /= norm1;  // unit sum of |f2_i|, the physical normalization of f
    Eigen::Index imax;
    f2.cwiseAbs().maxCoeff(&imax);
    if (f2(imax) < 0.0) f2 = -f2;
    // entries below eigensolver noise are exact zeros of the model family
    for (int i = 0; i < n; ++i)
        if (std::abs(f2(i)) < 1e-14) f2(i) = 0.0;
    sol.f_squared = f2;
    sol.f = f_from_squares(f2);

    sol.T_required = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) sol.T_required(i, j) = epsilon(i) + epsilon(j) - sol.E2;

    // Default split U_ij = 0, W_ij = T_required.
    MatrixXd Usplit = MatrixXd::Zero(n, n);
    Usplit.diagonal() = U_diag;
    auto [is_gs, sufficiency] = check_gs_conditions(sol.T_required, Usplit);
    sol.is_gs = is_gs;
    sol.sufficiency = sufficiency;

    bool v_zero = V.cwiseAbs().maxCoeff() == 0.0;
    sol.degeneracy = degeneracy_count(n, N, v_zero);
    sol.total_energy = std::isnan(r_total)
                           ? std::numeric_limits<double>::quiet_NaN()
                           : 0.5 * sol.E2 * r_total;
    return sol;
}

FactorizationSolution solve_uniform(const ModelSpec& spec) {
    spec.validate();
    return solve_uniform(spec.epsilon, spec.U.diagonal(), spec.V, spec.N,
                         spec.graph.r_total);
}

std::pair<bool, bool> check_gs_conditions(const MatrixXd& W, const MatrixXd& U) {
    const int n = static_cast<int>(W.rows());
    bool is_gs = true, sufficiency = true;
    const double tol = 1e-12;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (W(i, j) < -tol) is_gs = false;
            if (U(i, j) > 0.5 * (U(i, i) + U(j, j)) + tol) sufficiency = false;
        }
    return {is_gs, sufficiency};
}

VectorXd solve_onsite_energies_n3(const MatrixXd& T, double E2) {
    if (T.rows() != 3 || T.cols() != 3)
        throw ConfigError("onsite energy recovery needs a 3x3 coupling matrix");
    VectorXd eps(3);
    // eps_i = (T_ij + T_ik - T_jk + E2) / 2 with {i,j,k} a permutation of {1,2,3}
    eps(0) = 0.5 * (T(0, 1) + T(0, 2) - T(1, 2) + E2);
    eps(1) = 0.5 * (T(0, 1) + T(1, 2) - T(0, 2) + E2);
    eps(2) = 0.5 * (T(0, 2) + T(1, 2) - T(0, 1) + E2);
    return eps;
}

std::pair<VectorXd, MatrixXd> factorization_v0(const VectorXd& epsilon,
                                               double E2) {
    const int n = static_cast<int>(epsilon.size());
    VectorXd U_diag(n);
    for (int i = 0; i < n; ++i) U_diag(i) = 2.0 * epsilon(i) - E2;
    MatrixXd T = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) T(i, j) = 0.5 * (U_diag(i) + U_diag(j));
    return {U_diag, T};
}

std::pair<double, double> xyz_factorizing_field(double Jx, double Jy,
                                                double Jz) {
    if (!(Jz <= Jy && Jy <= Jx))
        throw ConfigError("couplings must satisfy Jz <= Jy <= Jx");
    double b = std::sqrt((Jy - Jz) * (Jx - Jz));
    double cos_theta = (Jx == Jz) ? 0.0 : std::sqrt((Jy - Jz) / (Jx - Jz));
    return {b, cos_theta};
}

static long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long result = 1;
    for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

long degeneracy_count(int n, int N, bool v_zero) {
    if (n < 2 || N < 1) throw ConfigError("degeneracy needs n >= 2, N >= 1");
    if (v_zero) return binomial(N + n - 1, n - 1);
    if (N >= n - 1) return 1L << (n - 1);
    long d = 0;
    for (int k = 0; k <= N; ++k) d += binomial(n - 1, k);
    return d;
}

VectorXcd product_state(const VectorXcd& f, int N) {
    const int n = static_cast<int>(f.size());
    double norm2 = f.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-12)
        throw ConfigError("product state coefficients must have unit norm");
    const std::int64_t dim = pow_ll(n, N);
    VectorXcd psi(dim);
    std::vector<int> levels(N, 0);
    for (std::int64_t g = 0; g < dim; ++g) {
        complex<double> amp = 1.0;
        for (int p = 0; p < N; ++p) amp *= f(levels[p]);
        psi(g) = amp;
        for (int p = 0; p < N; ++p) {
            if (++levels[p] < n) break;
            levels[p] = 0;
        }
    }
    return psi;
}

VectorXcd product_state(const VectorXd& f, int N) {
    return product_state(VectorXcd(f.cast<complex<double>>()), N);
}

std::pair<double, double> verify_eigenstate(const HamiltonianMatrix& H,
                                            const VectorXcd& psi) {
    if (psi.size() != H.dim) throw ConfigError("state length does not match dim");
    if (std::abs(psi.squaredNorm() - 1.0) > 1e-10)
        throw ConfigError("state must have unit norm");
    VectorXcd Hpsi = apply(H, psi);
    double energy = std::real(psi.dot(Hpsi));
    double residual = (Hpsi - energy * psi).norm();
    return {energy, residual};
}

std::vector<VectorXcd> parity_flip_family(const VectorXcd& f) {
    const int n = static_cast<int>(f.size());
    std::vector<VectorXcd> out;
    std::vector<VectorXcd> canon;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        VectorXcd g = f;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) g(i) = -g(i);
        // canonical global phase: first entry above noise made positive real axis
        VectorXcd c = g;
        for (int i = 0; i < n; ++i) {
            if (std::abs(c(i)) > 1e-14) {
                complex<double> phase = c(i) / std::abs(c(i));
                c /= phase;
                break;
            }
        }
        bool duplicate = false;
        for (const auto& seen : canon)
            if ((seen - c).norm() < 1e-12) {
                duplicate = true;
                break;
            }
        if (!duplicate) {
            canon.push_back(c);
            out.push_back(g);
        }
    }
    return out;
}

}  // namespace sunfact
