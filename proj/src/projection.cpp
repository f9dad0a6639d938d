#include "sunfact/projection.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "sunfact/errors.hpp"
#include "sunfact/hamiltonian.hpp"

namespace sunfact {

static void check_sigma(const VectorXcd& f, int N, const SectorLabel& sigma) {
    const int n = static_cast<int>(f.size());
    if (sigma.kind != SectorKind::parity)
        throw ConfigError("projection label must be a parity label");
    if (static_cast<int>(sigma.parity.size()) != n)
        throw ConfigError("parity label length must be n");
    int prod = 1;
    for (int s : sigma.parity) prod *= s;
    if (prod != (N % 2 == 0 ? 1 : -1))
        throw ConfigError("parity label violates prod sigma_i = (-1)^N");
}

ProjectedState parity_project(const VectorXcd& f, int N,
                              const SectorLabel& sigma) {
    check_sigma(f, N, sigma);
    const int n = static_cast<int>(f.size());
    VectorXcd psi = product_state(f, N);
    const std::int64_t dim = psi.size();

    double weight = 0.0;
    for (std::int64_t g = 0; g < dim; ++g) {
        BasisConfig c = index_to_config(g, n, N);
        if (sector_of(c, n, SectorKind::parity) == sigma)
            weight += std::norm(psi(g));
        else
            psi(g) = 0.0;
    }
    if (weight < 1e-14)
        throw EmptySectorError("projection onto sector " + sigma.str() +
                               " is empty");
    ProjectedState out;
    out.vector = psi / std::sqrt(weight);
    out.label = sigma;
    out.source_f = f;
    out.weight = weight;
    return out;
}

VectorXd projected_occupations(const VectorXcd& f, int N,
                               const SectorLabel& sigma) {
    ProjectedState ps = parity_project(f, N, sigma);
    const int n = static_cast<int>(f.size());
    VectorXd occ = VectorXd::Zero(n);
    const std::int64_t dim = ps.vector.size();
    for (std::int64_t g = 0; g < dim; ++g) {
        double w = std::norm(ps.vector(g));
        if (w == 0.0) continue;
        occ(static_cast<int>(g % n)) += w;  // level at the first site
    }
    return occ;
}

VectorXd projected_occupations_n3(const VectorXcd& f, int N,
                                  const SectorLabel& sigma) {
    if (f.size() != 3)
        throw ConfigError("closed form projected occupations need n = 3");
    check_sigma(f, N, sigma);
    if (std::abs(f.squaredNorm() - 1.0) > 1e-12)
        throw ConfigError("f must have unit norm");

    VectorXd u(3);
    for (int j = 0; j < 3; ++j) u(j) = 1.0 - 2.0 * std::norm(f(j));
    double den = 1.0;
    for (int j = 0; j < 3; ++j)
        den += sigma.parity[j] * std::pow(u(j), N);
    if (den < 4e-14)
        throw EmptySectorError("projection onto sector " + sigma.str() +
                               " is empty");
    VectorXd occ(3);
    for (int i = 0; i < 3; ++i) {
        double num = 1.0;
        for (int j = 0; j < 3; ++j) {
            double sgn = (i == j) ? -1.0 : 1.0;
            num += sgn * sigma.parity[j] * std::pow(u(j), N - 1);
        }
        occ(i) = std::norm(f(i)) * num / den;
    }
    return occ;
}

ProjectedState symmetric_state(const std::vector<int>& occ, int n, int N) {
    if (static_cast<int>(occ.size()) != n)
        throw ConfigError("occupation list length must be n");
    int total = 0;
    for (int c : occ) {
        if (c < 0) throw ConfigError("occupations must be nonnegative");
        total += c;
    }
    if (total != N) throw ConfigError("occupations must sum to N");

    double log_count = std::lgamma(N + 1.0);
    for (int c : occ) log_count -= std::lgamma(c + 1.0);
    std::int64_t expected = std::llround(std::exp(log_count));

    const std::int64_t dim = pow_ll(n, N);
    std::vector<std::int64_t> members;
    for (std::int64_t g = 0; g < dim; ++g) {
        BasisConfig c = index_to_config(g, n, N);
        std::vector<int> count(n, 0);
        for (int lv : c.levels) ++count[lv];
        bool match = true;
        for (int i = 0; i < n; ++i)
            if (count[i] != occ[i]) {
                match = false;
                break;
            }
        if (match) members.push_back(g);
    }
    if (static_cast<std::int64_t>(members.size()) != expected)
        throw InternalError("symmetric state support count mismatch");

    ProjectedState out;
    out.vector = VectorXcd::Zero(dim);
    double amp = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (std::int64_t g : members) out.vector(g) = amp;
    out.label.kind = SectorKind::occupation;
    out.label.occupation = occ;
    out.weight = 1.0;
    return out;
}

double perturbative_splitting(const VectorXcd& f, int N,
                              const SectorLabel& sigma,
                              const VectorXd& delta_eps) {
    const int n = static_cast<int>(f.size());
    if (delta_eps.size() != n)
        throw ConfigError("delta_eps length must be n");
    VectorXd occ = (n == 3) ? projected_occupations_n3(f, N, sigma)
                            : projected_occupations(f, N, sigma);
    return N * delta_eps.dot(occ);
}

std::vector<ProjectedState> number_projected_family(const VectorXcd& f, int N) {
    const int n = static_cast<int>(f.size());
    VectorXcd psi = product_state(f, N);
    const std::int64_t dim = psi.size();

    auto sectors = enumerate_sectors(n, N, SectorKind::occupation);
    std::vector<ProjectedState> out;
    for (const auto& [label, members] : sectors) {
        VectorXcd proj = VectorXcd::Zero(dim);
        double weight = 0.0;
        for (std::int64_t g : members) {
            proj(g) = psi(g);
            weight += std::norm(psi(g));
        }
        if (weight < 1e-14) continue;
        proj /= std::sqrt(weight);
        // cancel the common monomial phase so members line up with the
        // symmetric states for full rank f
        std::complex<double> phase(0.0, 0.0);
        double best = 0.0;
        for (std::int64_t g = 0; g < dim; ++g)
            if (std::abs(proj(g)) > best) {
                best = std::abs(proj(g));
                phase = proj(g) / std::abs(proj(g));
            }
        if (best > 0.0) proj /= phase;

        ProjectedState ps;
        ps.vector = std::move(proj);
        ps.label = label;
        ps.source_f = f;
        ps.weight = weight;
        out.push_back(std::move(ps));
    }
    return out;
}

VectorXcd apply_local_unitary(const VectorXcd& state,
                              const Eigen::MatrixXcd& u, int n, int N) {
    if (u.rows() != n || u.cols() != n)
        throw ConfigError("unitary must be n by n");
    if ((u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n))
            .cwiseAbs()
            .maxCoeff() > 1e-10)
        throw ConfigError("matrix is not unitary");
    const std::int64_t dim = pow_ll(n, N);
    if (state.size() != dim) throw ConfigError("state length is not n^N");

    VectorXcd cur = state;
    std::int64_t stride = 1;
    for (int p = 0; p < N; ++p) {
        VectorXcd next = VectorXcd::Zero(dim);
        for (std::int64_t g = 0; g < dim; ++g) {
            if (cur(g) == std::complex<double>(0.0, 0.0)) continue;
            int a = static_cast<int>((g / stride) % n);
            std::int64_t base = g - a * stride;
            for (int b = 0; b < n; ++b) next(base + b * stride) += u(b, a) * cur(g);
        }
        cur = std::move(next);
        stride *= n;
    }
    return cur;
}

}  // namespace sunfact
