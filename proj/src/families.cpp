#include "sunfact/families.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "sunfact/errors.hpp"

namespace sunfact {

double band_vw_E2c() {
    // lowest eigenvalue of 2*diag(eps) - V at the critical coupling 2/5
    static const double value = [] {
        VectorXd eps(3);
        eps << -0.5, 0.0, 0.5;
        MatrixXd M = (2.0 * eps).asDiagonal();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) M(i, j) -= 0.4;
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(M, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }();
    return value;
}

static ModelSpec band_vw_from_graph(double t, CouplingGraph graph) {
    const double e2c = band_vw_E2c();
    VectorXd eps(3);
    eps << -0.5, 0.0, 0.5;
    MatrixXd U = MatrixXd::Zero(3, 3);
    MatrixXd V = MatrixXd::Zero(3, 3);
    MatrixXd W = MatrixXd::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            V(i, j) = t * 0.4;
            W(i, j) = t * (eps(i) + eps(j) - e2c);
        }
    int N = graph.N;
    return make_spec(3, N, eps, U, V, W, std::move(graph), true);
}

ModelSpec band_vw_spec(double t, int N, GraphKind graph) {
    return band_vw_from_graph(t, make_graph(graph, N));
}

static VectorXd ladder_eps(int n) {
    if (n != 3 && n != 4)
        throw ConfigError("ladder profile is defined for n = 3 or 4");
    VectorXd eps(n);
    if (n == 3)
        eps << -1.0, 0.0, 0.8;
    else
        eps << -1.0, 0.0, 0.8, 2.2;
    return eps;
}

static ModelSpec band_w_from_graph(double t, int n, CouplingGraph graph) {
    VectorXd eps = ladder_eps(n);
    MatrixXd U = MatrixXd::Zero(n, n);
    MatrixXd V = MatrixXd::Zero(n, n);
    MatrixXd W = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) U(i, i) = t * (2.0 * eps(i) + 5.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) W(i, j) = t * (eps(i) + eps(j) + 5.0);
    int N = graph.N;
    return make_spec(n, N, eps, U, V, W, std::move(graph), true);
}

ModelSpec band_w_spec(double t, int n, int N, GraphKind graph) {
    return band_w_from_graph(t, n, make_graph(graph, N));
}

static ModelSpec heisenberg_eps_from_graph(double t, CouplingGraph graph) {
    const int n = 4;
    VectorXd eps = t * ladder_eps(n);
    MatrixXd U = MatrixXd::Zero(n, n);
    MatrixXd V = MatrixXd::Zero(n, n);
    MatrixXd W = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) U(i, i) = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) W(i, j) = 1.0;
    int N = graph.N;
    return make_spec(n, N, eps, U, V, W, std::move(graph), true);
}

ModelSpec heisenberg_eps_spec(double t, int N, GraphKind graph) {
    return heisenberg_eps_from_graph(t, make_graph(graph, N));
}

std::function<ModelSpec(double)> make_family(const ModelSpec& base,
                                             const std::string& path) {
    base.validate();
    auto colon = path.find(':');
    if (colon == std::string::npos)
        throw ConfigError("parameter path must look like scale:V or lerp:name");
    std::string head = path.substr(0, colon);
    std::string tail = path.substr(colon + 1);

    if (head == "scale") {
        if (tail == "V")
            return [base](double t) {
                ModelSpec s = base;
                s.V = t * base.V;
                return s;
            };
        if (tail == "W")
            return [base](double t) {
                ModelSpec s = base;
                s.W = t * base.W;
                return s;
            };
        if (tail == "U")
            return [base](double t) {
                ModelSpec s = base;
                s.U = t * base.U;
                return s;
            };
        if (tail == "epsilon")
            return [base](double t) {
                ModelSpec s = base;
                s.epsilon = t * base.epsilon;
                return s;
            };
        throw ConfigError("unknown scale target '" + tail + "'");
    }
    if (head == "lerp") {
        if (tail == "band_vw")
            return [g = base.graph](double t) { return band_vw_from_graph(t, g); };
        if (tail == "band_w")
            return [g = base.graph, n = base.n](double t) {
                return band_w_from_graph(t, n, g);
            };
        if (tail == "heisenberg_eps")
            return [g = base.graph](double t) {
                return heisenberg_eps_from_graph(t, g);
            };
        throw ConfigError("unknown lerp recipe '" + tail + "'");
    }
    throw ConfigError("unknown parameter path '" + path + "'");
}

}  // namespace sunfact
