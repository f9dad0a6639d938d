#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sunfact/errors.hpp"

namespace sunfact {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXcd;

inline constexpr std::int64_t kDefaultDimCap = 65536;

// ----------------------------- coupling graph --------------------------------

enum class GraphKind { ring_first_neighbor, open_chain, all_to_all, custom };

struct CouplingGraph {
    int N = 0;
    MatrixXd r;        // symmetric, nonnegative, zero diagonal
    VectorXd r_row;    // r_p = sum_q r_pq
    double r_total = 0.0;

    bool bipartite(std::vector<int>* coloring = nullptr) const;
};

GraphKind graph_kind_from_string(const std::string& s);
std::string to_string(GraphKind k);

// ring: r_pq = 1/2 for |p-q| = 1 mod N (N=2 collapses to a single unit pair),
// open_chain: same weights without the wrap link, all_to_all: 1/(N-1).
CouplingGraph make_graph(GraphKind kind, int N,
                         const std::optional<MatrixXd>& custom = std::nullopt);

// ----------------------------- model spec ------------------------------------

struct ModelSpec {
    int n = 0;  // local levels
    int N = 0;  // sites
    VectorXd epsilon;          // length n
    MatrixXd U, V, W;          // n x n symmetric; V, W zero diagonal
    CouplingGraph graph;
    bool edge_scaling = false;  // site energies eps_i^p = r_p * eps_i

    std::int64_t dim() const;  // n^N
    void validate() const;     // throws ConfigError
};

ModelSpec make_spec(int n, int N, VectorXd epsilon, MatrixXd U, MatrixXd V,
                    MatrixXd W, CouplingGraph graph, bool edge_scaling = false);

// ----------------------------- basis indexing --------------------------------

// Little-endian mixed radix: index = sum_p levels[p] * n^p.
struct BasisConfig {
    std::vector<int> levels;
    std::int64_t index = 0;
};

std::int64_t pow_ll(int n, int N);
BasisConfig index_to_config(std::int64_t index, int n, int N);
std::int64_t config_to_index(const std::vector<int>& levels, int n);

// ----------------------------- sector labels ---------------------------------

enum class SectorKind { parity, occupation };

struct SectorLabel {
    SectorKind kind = SectorKind::parity;
    std::vector<int> parity;      // length n of +-1, prod sigma_i = (-1)^N
    std::vector<int> occupation;  // length n, sums to N

    bool operator==(const SectorLabel& o) const;
    std::string str() const;  // "+--" or "2,1,0" style, 1-based level order
};

SectorLabel sector_of(const BasisConfig& config, int n, SectorKind kind);

// ----------------------------- JSON config I/O -------------------------------

ModelSpec load_spec_json(const std::string& path);
ModelSpec parse_spec_json(const std::string& text);
std::string spec_to_json(const ModelSpec& spec);

}  // namespace sunfact
