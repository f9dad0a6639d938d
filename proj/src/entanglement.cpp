#include "sunfact/entanglement.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sunfact/errors.hpp"

namespace sunfact {

static void check_unit_norm(const VectorXcd& state) {
    if (std::abs(state.squaredNorm() - 1.0) > 1e-10)
        throw ConfigError("state must have unit norm");
}

DensityMatrix reduce(const VectorXcd& state, const std::vector<int>& sites,
                     int n, int N) {
    check_unit_norm(state);
    if (sites.empty()) throw ConfigError("site subset must be nonempty");
    std::vector<bool> seen(N, false);
    for (int s : sites) {
        if (s < 0 || s >= N) throw ConfigError("site index out of range");
        if (seen[s]) throw ConfigError("site subset has duplicates");
        seen[s] = true;
    }
    const int m = static_cast<int>(sites.size());
    if (pow_ll(n, 2 * m) > kDefaultDimCap)
        throw CapError("reduced matrix dimension exceeds cap");
    const std::int64_t dim = pow_ll(n, N);
    if (state.size() != dim)
        throw ConfigError("state length is not n^N");

    std::vector<int> env;
    for (int s = 0; s < N; ++s)
        if (!seen[s]) env.push_back(s);

    const std::int64_t dk = pow_ll(n, m);
    const std::int64_t de = pow_ll(n, N - m);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dk, de);
    std::vector<int> levels(N);
    for (std::int64_t g = 0; g < dim; ++g) {
        std::int64_t rest = g;
        for (int p = 0; p < N; ++p) {
            levels[p] = static_cast<int>(rest % n);
            rest /= n;
        }
        std::int64_t a = 0, e = 0;
        for (int k = m - 1; k >= 0; --k) a = a * n + levels[sites[k]];
        for (int k = static_cast<int>(env.size()) - 1; k >= 0; --k)
            e = e * n + levels[env[k]];
        M(a, e) = state(g);
    }

    DensityMatrix rho;
    rho.sites = sites;
    rho.dim = dk;
    rho.data = M * M.adjoint();

    double trace = rho.data.trace().real();
    if (std::abs(trace - 1.0) > 1e-10)
        throw InternalError("reduced matrix trace drift");
    if ((rho.data - rho.data.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw InternalError("reduced matrix lost hermiticity");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.data,
                                                       Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw InternalError("reduced matrix eigensolve failed");
    rho.eigenvalues = es.eigenvalues();
    if (rho.eigenvalues(0) < -1e-10)
        throw InternalError("reduced matrix has a negative eigenvalue");
    return rho;
}

double entropy(const DensityMatrix& rho) {
    double s = 0.0;
    for (int i = 0; i < rho.eigenvalues.size(); ++i) {
        double l = rho.eigenvalues(i);
        if (l < -1e-10)
            throw InternalError("entropy of a non positive matrix");
        if (l > 1e-12) s -= l * std::log2(l);
    }
    return s;
}

double negativity(const DensityMatrix& rho_pq, int n) {
    if (rho_pq.sites.size() != 2 || rho_pq.dim != n * n)
        throw ConfigError("negativity needs a two site density matrix");
    Eigen::MatrixXcd pt(rho_pq.dim, rho_pq.dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int ip = 0; ip < n; ++ip)
                for (int jp = 0; jp < n; ++jp)
                    pt(i + n * j, ip + n * jp) =
                        rho_pq.data(ip + n * j, i + n * jp);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt,
                                                       Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw InternalError("partial transpose eigensolve failed");
    double neg = 0.0, abs_sum = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double l = es.eigenvalues()(i);
        if (l < 0.0) neg -= l;
        abs_sum += std::abs(l);
    }
    double dual = 0.5 * (abs_sum - 1.0);
    if (std::abs(neg - dual) > 1e-10)
        throw InternalError("negativity formulas disagree");
    return neg;
}

double mutual_information(const VectorXcd& state, int p, int q, int n, int N) {
    if (p == q) throw ConfigError("mutual information needs two distinct sites");
    double sp = entropy(reduce(state, {p}, n, N));
    double sq = entropy(reduce(state, {q}, n, N));
    double spq = entropy(reduce(state, {p, q}, n, N));
    return sp + sq - spq;
}

static bool definite_parity(const VectorXcd& state, int n, int N) {
    VectorXd p = VectorXd::Zero(n);
    const std::int64_t dim = state.size();
    for (std::int64_t g = 0; g < dim; ++g) {
        double w = std::norm(state(g));
        if (w == 0.0) continue;
        BasisConfig c = index_to_config(g, n, N);
        std::vector<int> count(n, 0);
        for (int lv : c.levels) ++count[lv];
        for (int i = 0; i < n; ++i)
            p(i) += (count[i] % 2 == 0 ? w : -w);
    }
    for (int i = 0; i < n; ++i)
        if (std::abs(std::abs(p(i)) - 1.0) > 1e-8) return false;
    return true;
}

VectorXd site_occupations(const VectorXcd& state, int site, int n, int N) {
    DensityMatrix rho = reduce(state, {site}, n, N);
    if (definite_parity(state, n, N)) {
        Eigen::MatrixXcd off = rho.data;
        off.diagonal().setZero();
        if (off.cwiseAbs().maxCoeff() > 1e-10)
            throw InternalError(
                "definite parity state has off diagonal site matrix");
    }
    return rho.data.diagonal().real();
}

std::vector<VectorXd> occupations(const VectorXcd& state, int n, int N) {
    std::vector<VectorXd> out;
    out.reserve(N);
    for (int p = 0; p < N; ++p)
        out.push_back(site_occupations(state, p, n, N));
    return out;
}

VectorXd pair_spectrum(const VectorXcd& state, int p, int q, int n, int N) {
    DensityMatrix rho = reduce(state, {p, q}, n, N);
    VectorXd asc = rho.eigenvalues;
    return asc.reverse();
}

}  // namespace sunfact
