#include "sunfact/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sunfact {

using json = nlohmann::json;

// ----------------------------- coupling graph --------------------------------

bool CouplingGraph::bipartite(std::vector<int>* coloring) const {
    std::vector<int> color(N, -1);
    std::deque<int> queue;
    for (int start = 0; start < N; ++start) {
        if (color[start] != -1) continue;
        color[start] = 0;
        queue.push_back(start);
        while (!queue.empty()) {
            int p = queue.front();
            queue.pop_front();
            for (int q = 0; q < N; ++q) {
                if (r(p, q) == 0.0) continue;
                if (color[q] == -1) {
                    color[q] = 1 - color[p];
                    queue.push_back(q);
                } else if (color[q] == color[p]) {
                    return false;
                }
            }
        }
    }
    if (coloring) *coloring = std::move(color);
    return true;
}

GraphKind graph_kind_from_string(const std::string& s) {
    if (s == "ring_first_neighbor" || s == "ring") return GraphKind::ring_first_neighbor;
    if (s == "open_chain" || s == "chain") return GraphKind::open_chain;
    if (s == "all_to_all") return GraphKind::all_to_all;
    if (s == "custom") return GraphKind::custom;
    throw ConfigError("unknown graph kind '" + s + "'");
}

std::string to_string(GraphKind k) {
    switch (k) {
        case GraphKind::ring_first_neighbor: return "ring_first_neighbor";
        case GraphKind::open_chain: return "open_chain";
        case GraphKind::all_to_all: return "all_to_all";
        case GraphKind::custom: return "custom";
    }
    return "?";
}

static CouplingGraph finish_graph(int N, MatrixXd r) {
    CouplingGraph g;
    g.N = N;
    g.r = std::move(r);
    g.r_row = g.r.rowwise().sum();
    g.r_total = g.r_row.sum();
    return g;
}

CouplingGraph make_graph(GraphKind kind, int N,
                         const std::optional<MatrixXd>& custom) {
    if (N < 2) throw ConfigError("coupling graph needs N >= 2");
    MatrixXd r = MatrixXd::Zero(N, N);
    switch (kind) {
        case GraphKind::ring_first_neighbor:
            if (N == 2) {
                r(0, 1) = r(1, 0) = 1.0;  // single pair, unit strength
            } else {
                for (int p = 0; p < N; ++p) {
                    int q = (p + 1) % N;
                    r(p, q) += 0.5;
                    r(q, p) += 0.5;
                }
            }
            break;
        case GraphKind::open_chain:
            for (int p = 0; p + 1 < N; ++p) {
                r(p, p + 1) = r(p + 1, p) = 0.5;
            }
            break;
        case GraphKind::all_to_all:
            r.setConstant(1.0 / (N - 1));
            r.diagonal().setZero();
            break;
        case GraphKind::custom: {
            if (!custom) throw ConfigError("custom graph requires a matrix");
            const MatrixXd& c = *custom;
            if (c.rows() != N || c.cols() != N)
                throw ConfigError("custom graph matrix must be N x N");
            if (!c.isApprox(c.transpose(), 0.0))
                throw ConfigError("custom graph matrix must be symmetric");
            for (int p = 0; p < N; ++p) {
                if (c(p, p) != 0.0)
                    throw ConfigError("custom graph matrix must have zero diagonal");
                for (int q = 0; q < N; ++q) {
                    if (!(c(p, q) >= 0.0))
                        throw ConfigError("custom graph entries must be nonnegative");
                }
            }
            r = c;
            break;
        }
    }
    return finish_graph(N, std::move(r));
}

// ----------------------------- model spec ------------------------------------

std::int64_t ModelSpec::dim() const { return pow_ll(n, N); }

static void check_symmetric(const MatrixXd& m, const std::string& name, int n) {
    if (m.rows() != n || m.cols() != n)
        throw ConfigError(name + " must be " + std::to_string(n) + "x" +
                          std::to_string(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!std::isfinite(m(i, j)))
                throw ConfigError(name + "[" + std::to_string(i + 1) + "][" +
                                  std::to_string(j + 1) + "] is not finite");
            if (m(i, j) != m(j, i))
                throw ConfigError(name + " is not symmetric at entry (" +
                                  std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ")");
        }
}

void ModelSpec::validate() const {
    if (n < 2) throw ConfigError("n must be >= 2");
    if (N < 2) throw ConfigError("N must be >= 2");
    if (epsilon.size() != n) throw ConfigError("epsilon must have length n");
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(epsilon(i)))
            throw ConfigError("epsilon[" + std::to_string(i + 1) + "] is not finite");
    check_symmetric(U, "U", n);
    check_symmetric(V, "V", n);
    check_symmetric(W, "W", n);
    for (int i = 0; i < n; ++i) {
        if (V(i, i) != 0.0)
            throw ConfigError("V must have zero diagonal (V[" +
                              std::to_string(i + 1) + "][" + std::to_string(i + 1) +
                              "] != 0)");
        if (W(i, i) != 0.0)
            throw ConfigError("W must have zero diagonal (W[" +
                              std::to_string(i + 1) + "][" + std::to_string(i + 1) +
                              "] != 0)");
    }
    if (graph.N != N) throw ConfigError("graph size does not match N");
    if ((graph.r_row - graph.r.rowwise().sum()).cwiseAbs().maxCoeff() > 1e-12)
        throw ConfigError("graph row sums are stale");
}

ModelSpec make_spec(int n, int N, VectorXd epsilon, MatrixXd U, MatrixXd V,
                    MatrixXd W, CouplingGraph graph, bool edge_scaling) {
    ModelSpec s;
    s.n = n;
    s.N = N;
    s.epsilon = std::move(epsilon);
    s.U = std::move(U);
    s.V = std::move(V);
    s.W = std::move(W);
    s.graph = std::move(graph);
    s.edge_scaling = edge_scaling;
    s.validate();
    return s;
}

// ----------------------------- basis indexing --------------------------------

std::int64_t pow_ll(int n, int N) {
    std::int64_t d = 1;
    for (int p = 0; p < N; ++p) d *= n;
    return d;
}

BasisConfig index_to_config(std::int64_t index, int n, int N) {
    if (index < 0 || index >= pow_ll(n, N))
        throw ConfigError("basis index out of range");
    BasisConfig c;
    c.index = index;
    c.levels.resize(N);
    std::int64_t rem = index;
    for (int p = 0; p < N; ++p) {
        c.levels[p] = static_cast<int>(rem % n);
        rem /= n;
    }
    return c;
}

std::int64_t config_to_index(const std::vector<int>& levels, int n) {
    std::int64_t idx = 0, stride = 1;
    for (int l : levels) {
        if (l < 0 || l >= n) throw ConfigError("level out of range");
        idx += l * stride;
        stride *= n;
    }
    return idx;
}

// ----------------------------- sector labels ---------------------------------

bool SectorLabel::operator==(const SectorLabel& o) const {
    return kind == o.kind && parity == o.parity && occupation == o.occupation;
}

std::string SectorLabel::str() const {
    std::string s;
    if (kind == SectorKind::parity) {
        for (int v : parity) s += (v > 0 ? '+' : '-');
    } else {
        for (size_t i = 0; i < occupation.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(occupation[i]);
        }
    }
    return s;
}

SectorLabel sector_of(const BasisConfig& config, int n, SectorKind kind) {
    std::vector<int> count(n, 0);
    for (int l : config.levels) ++count[l];
    SectorLabel label;
    label.kind = kind;
    if (kind == SectorKind::parity) {
        label.parity.resize(n);
        for (int i = 0; i < n; ++i) label.parity[i] = (count[i] % 2 == 0) ? 1 : -1;
    } else {
        label.occupation = std::move(count);
    }
    return label;
}

// ----------------------------- JSON config I/O -------------------------------

static MatrixXd matrix_from_json(const json& j, const std::string& name, int n,
                                 bool zero_diagonal) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw ConfigError(name + " must be an array of " + std::to_string(n) +
                          " rows");
    MatrixXd m = MatrixXd::Zero(n, n);
    std::vector<std::vector<bool>> given(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        const json& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) > n)
            throw ConfigError(name + " row " + std::to_string(i + 1) +
                              " must have at most n entries");
        for (int k = 0; k < static_cast<int>(row.size()); ++k) {
            if (!row[k].is_number())
                throw ConfigError(name + "[" + std::to_string(i + 1) + "][" +
                                  std::to_string(k + 1) + "] must be a number");
            m(i, k) = row[k].get<double>();
            given[i][k] = true;
        }
    }
    // Upper-triangular shorthand: mirror the given half, reject conflicts.
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (given[i][k] && given[k][i] && m(i, k) != m(k, i))
                throw ConfigError(name + " has conflicting entries at (" +
                                  std::to_string(i + 1) + "," +
                                  std::to_string(k + 1) + ")");
            if (given[i][k] && !given[k][i]) m(k, i) = m(i, k);
        }
    if (zero_diagonal)
        for (int i = 0; i < n; ++i)
            if (m(i, i) != 0.0)
                throw ConfigError(name + " must have zero diagonal");
    return m;
}

ModelSpec parse_spec_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    for (const auto& key : {"n", "N", "epsilon"})
        if (!j.contains(key))
            throw ConfigError(std::string("config missing key '") + key + "'");

    int n = j.at("n").get<int>();
    int N = j.at("N").get<int>();
    if (n < 2) throw ConfigError("n must be >= 2");
    if (N < 2) throw ConfigError("N must be >= 2");

    VectorXd epsilon(n);
    const json& je = j.at("epsilon");
    if (!je.is_array() || static_cast<int>(je.size()) != n)
        throw ConfigError("epsilon must be an array of n numbers");
    for (int i = 0; i < n; ++i) epsilon(i) = je[i].get<double>();

    auto matrix_or_zero = [&](const char* key, bool zero_diag) {
        if (!j.contains(key)) return MatrixXd(MatrixXd::Zero(n, n));
        return matrix_from_json(j.at(key), key, n, zero_diag);
    };
    MatrixXd U = matrix_or_zero("U", false);
    MatrixXd V = matrix_or_zero("V", true);
    MatrixXd W = matrix_or_zero("W", true);

    GraphKind kind = GraphKind::ring_first_neighbor;
    std::optional<MatrixXd> custom;
    if (j.contains("graph")) {
        const json& jg = j.at("graph");
        if (!jg.is_object() || !jg.contains("kind"))
            throw ConfigError("graph must be an object with a 'kind'");
        kind = graph_kind_from_string(jg.at("kind").get<std::string>());
        if (kind == GraphKind::custom) {
            if (!jg.contains("custom"))
                throw ConfigError("graph kind 'custom' requires 'custom' matrix");
            const json& jc = jg.at("custom");
            MatrixXd c(N, N);
            if (!jc.is_array() || static_cast<int>(jc.size()) != N)
                throw ConfigError("graph.custom must be an N x N array");
            for (int p = 0; p < N; ++p) {
                if (static_cast<int>(jc[p].size()) != N)
                    throw ConfigError("graph.custom must be an N x N array");
                for (int q = 0; q < N; ++q) c(p, q) = jc[p][q].get<double>();
            }
            custom = std::move(c);
        }
    }
    bool edge_scaling = j.value("edge_scaling", false);

    return make_spec(n, N, std::move(epsilon), std::move(U), std::move(V),
                     std::move(W), make_graph(kind, N, custom), edge_scaling);
}

ModelSpec load_spec_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec_json(ss.str());
}

std::string spec_to_json(const ModelSpec& spec) {
    json j;
    j["n"] = spec.n;
    j["N"] = spec.N;
    j["epsilon"] = std::vector<double>(spec.epsilon.data(),
                                       spec.epsilon.data() + spec.n);
    auto mat = [&](const MatrixXd& m) {
        std::vector<std::vector<double>> rows(spec.n, std::vector<double>(spec.n));
        for (int i = 0; i < spec.n; ++i)
            for (int k = 0; k < spec.n; ++k) rows[i][k] = m(i, k);
        return rows;
    };
    j["U"] = mat(spec.U);
    j["V"] = mat(spec.V);
    j["W"] = mat(spec.W);
    json jg;
    // r is always emitted verbatim so round-trips preserve custom graphs.
    jg["kind"] = "custom";
    std::vector<std::vector<double>> rows(spec.N, std::vector<double>(spec.N));
    for (int p = 0; p < spec.N; ++p)
        for (int q = 0; q < spec.N; ++q) rows[p][q] = spec.graph.r(p, q);
    jg["custom"] = rows;
    j["graph"] = jg;
    j["edge_scaling"] = spec.edge_scaling;
    return j.dump(2);
}

}  // namespace sunfact
