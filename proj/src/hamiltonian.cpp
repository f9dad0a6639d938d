#include "sunfact/hamiltonian.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "sunfact/io.hpp"

namespace sunfact {

std::vector<std::pair<SectorLabel, std::vector<std::int64_t>>>
enumerate_sectors(int n, int N, SectorKind kind) {
    std::map<std::string, std::pair<SectorLabel, std::vector<std::int64_t>>> buckets;
    const std::int64_t dim = pow_ll(n, N);
    std::vector<int> levels(N, 0);
    for (std::int64_t g = 0; g < dim; ++g) {
        BasisConfig c;
        c.index = g;
        c.levels = levels;
        SectorLabel label = sector_of(c, n, kind);
        auto& bucket = buckets[label.str()];
        bucket.first = label;
        bucket.second.push_back(g);
        // odometer increment avoids re-deriving digits each step
        for (int p = 0; p < N; ++p) {
            if (++levels[p] < n) break;
            levels[p] = 0;
        }
    }
    std::vector<std::pair<SectorLabel, std::vector<std::int64_t>>> out;
    out.reserve(buckets.size());
    for (auto& [key, value] : buckets) out.push_back(std::move(value));
    return out;
}

// Shared element filler: builds the restriction of H to the rows in
// basis_map (identity map for the full space).
static void fill_elements(const ModelSpec& spec,
                          const std::vector<std::int64_t>& basis_map,
                          MatrixXd& H) {
    const int n = spec.n, N = spec.N;
    const auto& r = spec.graph.r;
    const auto& r_row = spec.graph.r_row;

    std::unordered_map<std::int64_t, std::int64_t> local;
    local.reserve(basis_map.size() * 2);
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(basis_map.size()); ++a)
        local.emplace(basis_map[a], a);

    std::vector<std::int64_t> stride(N);
    stride[0] = 1;
    for (int p = 1; p < N; ++p) stride[p] = stride[p - 1] * n;

    for (std::int64_t a = 0; a < static_cast<std::int64_t>(basis_map.size()); ++a) {
        const std::int64_t g = basis_map[a];
        BasisConfig cfg = index_to_config(g, n, N);
        const std::vector<int>& lv = cfg.levels;

        double diag = 0.0;
        for (int p = 0; p < N; ++p)
            diag += (spec.edge_scaling ? r_row(p) : 1.0) * spec.epsilon(lv[p]);

        for (int p = 0; p < N; ++p) {
            for (int q = p + 1; q < N; ++q) {
                const double rpq = r(p, q);
                if (rpq == 0.0) continue;
                const int ip = lv[p], iq = lv[q];
                diag -= rpq * spec.U(ip, iq);
                if (ip == iq) {
                    // pair promotion (j,j) -> (i,i)
                    for (int i = 0; i < n; ++i) {
                        if (i == ip) continue;
                        const double v = spec.V(i, ip);
                        if (v == 0.0) continue;
                        std::int64_t t = g + (i - ip) * (stride[p] + stride[q]);
                        auto it = local.find(t);
                        if (it != local.end()) H(it->second, a) += -rpq * v;
                    }
                } else {
                    // occupancy interchange (i,j) -> (j,i)
                    const double w = spec.W(ip, iq);
                    if (w != 0.0) {
                        std::int64_t t = g + (iq - ip) * stride[p] + (ip - iq) * stride[q];
                        auto it = local.find(t);
                        if (it != local.end()) H(it->second, a) += -rpq * w;
                    }
                }
            }
        }
        H(a, a) += diag;
    }
}

HamiltonianMatrix build_full(const ModelSpec& spec, std::int64_t cap) {
    spec.validate();
    const std::int64_t dim = spec.dim();
    if (dim > cap)
        throw CapError("dimension " + std::to_string(dim) + " exceeds cap " +
                       std::to_string(cap));
    HamiltonianMatrix H;
    H.dim = dim;
    H.full_dim = dim;
    H.data = MatrixXd::Zero(dim, dim);
    std::vector<std::int64_t> all(dim);
    for (std::int64_t g = 0; g < dim; ++g) all[g] = g;
    fill_elements(spec, all, H.data);
    return H;
}

HamiltonianMatrix build_sector(const ModelSpec& spec, const SectorLabel& sector,
                               std::int64_t cap) {
    spec.validate();
    if (spec.dim() > cap)
        throw CapError("dimension " + std::to_string(spec.dim()) +
                       " exceeds cap " + std::to_string(cap));
    if (sector.kind == SectorKind::occupation) {
        if (spec.V.cwiseAbs().maxCoeff() != 0.0)
            throw ConfigError("occupation sectors require V = 0");
        if (static_cast<int>(sector.occupation.size()) != spec.n)
            throw ConfigError("occupation label length must be n");
        int total = 0;
        for (int c : sector.occupation) total += c;
        if (total != spec.N)
            throw ConfigError("occupation label must sum to N");
    } else {
        if (static_cast<int>(sector.parity.size()) != spec.n)
            throw ConfigError("parity label length must be n");
        int prod = 1;
        for (int s : sector.parity) prod *= s;
        if (prod != (spec.N % 2 == 0 ? 1 : -1))
            throw ConfigError("parity label violates prod sigma_i = (-1)^N");
    }

    std::vector<std::int64_t> members;
    const std::int64_t dim = spec.dim();
    for (std::int64_t g = 0; g < dim; ++g) {
        BasisConfig c = index_to_config(g, spec.n, spec.N);
        if (sector_of(c, spec.n, sector.kind) == sector) members.push_back(g);
    }
    return build_in_basis(spec, std::move(members), sector);
}

HamiltonianMatrix build_in_basis(const ModelSpec& spec,
                                 std::vector<std::int64_t> basis_map,
                                 std::optional<SectorLabel> label) {
    HamiltonianMatrix H;
    H.dim = static_cast<std::int64_t>(basis_map.size());
    H.full_dim = spec.dim();
    H.sector = std::move(label);
    H.data = MatrixXd::Zero(H.dim, H.dim);
    fill_elements(spec, basis_map, H.data);
    H.basis_map = std::move(basis_map);
    return H;
}

ModelSpec alternating_gauge(const ModelSpec& spec, int level) {
    if (level < 0 || level >= spec.n) throw ConfigError("level out of range");
    if (!spec.graph.bipartite())
        throw ConfigError("alternating gauge requires a bipartite coupling graph");
    ModelSpec out = spec;
    for (int j = 0; j < spec.n; ++j) {
        if (j == level) continue;
        out.V(level, j) = -out.V(level, j);
        out.V(j, level) = -out.V(j, level);
        out.W(level, j) = -out.W(level, j);
        out.W(j, level) = -out.W(j, level);
    }
    return out;
}

VectorXcd apply(const HamiltonianMatrix& H, const VectorXcd& v) {
    if (v.size() != H.dim) throw ConfigError("state length does not match dim");
    VectorXcd out(H.dim);
    out.real() = H.data * v.real();
    out.imag() = H.data * v.imag();
    return out;
}

VectorXd apply(const HamiltonianMatrix& H, const VectorXd& v) {
    if (v.size() != H.dim) throw ConfigError("state length does not match dim");
    return H.data * v;
}

std::string matrix_dump(const HamiltonianMatrix& H) {
    std::ostringstream os;
    os << H.dim << "\n";
    for (std::int64_t i = 0; i < H.dim; ++i)
        for (std::int64_t j = 0; j < H.dim; ++j)
            if (H.data(i, j) != 0.0)
                os << i << " " << j << " " << format_double(H.data(i, j)) << "\n";
    return os.str();
}

}  // namespace sunfact
