#pragma once
#include <map>
#include <optional>
#include <vector>

#include "sunfact/model.hpp"

namespace sunfact {

struct HamiltonianMatrix {
    std::int64_t dim = 0;
    std::int64_t full_dim = 0;  // n^N of the originating model
    MatrixXd data;              // real symmetric
    std::optional<SectorLabel> sector;
    std::optional<std::vector<std::int64_t>> basis_map;  // global indices of sector rows
};

// Groups all basis configs by sector label; ordering is deterministic.
std::vector<std::pair<SectorLabel, std::vector<std::int64_t>>>
enumerate_sectors(int n, int N, SectorKind kind);

HamiltonianMatrix build_full(const ModelSpec& spec,
                             std::int64_t cap = kDefaultDimCap);
HamiltonianMatrix build_sector(const ModelSpec& spec, const SectorLabel& sector,
                               std::int64_t cap = kDefaultDimCap);

// Restriction of H to an explicit basis subset (rows of basis_map).
HamiltonianMatrix build_in_basis(const ModelSpec& spec,
                                 std::vector<std::int64_t> basis_map,
                                 std::optional<SectorLabel> label = std::nullopt);

// Sign gauge f_i -> (-1)^p f_i on one sublattice: flips V and W on the given
// level's row/column. Requires a bipartite graph; spectra are unchanged.
ModelSpec alternating_gauge(const ModelSpec& spec, int level);

VectorXcd apply(const HamiltonianMatrix& H, const VectorXcd& v);
VectorXd apply(const HamiltonianMatrix& H, const VectorXd& v);

// Text dump: "dim" header then "row col value" triples of nonzeros.
std::string matrix_dump(const HamiltonianMatrix& H);

}  // namespace sunfact
