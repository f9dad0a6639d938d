#include "sunfact/meanfield.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sunfact {

// The closed form below is derived for edge-scaled site energies
// eps_i^p = r_p eps_i; without edge scaling the single-site sum carries N
// instead of r, which is the same stationarity problem with eps -> (N/r) eps.
static VectorXd effective_epsilon(const ModelSpec& spec) {
    double r = spec.graph.r_total;
    double A = spec.edge_scaling ? r : static_cast<double>(spec.N);
    return (A / r) * spec.epsilon;
}

static MatrixXd coupling_sum(const ModelSpec& spec) {
    return spec.U + spec.V + spec.W;
}

static MatrixXd m_tilde(const VectorXd& eps_eff, const MatrixXd& J) {
    const int n = static_cast<int>(eps_eff.size());
    MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = eps_eff(i) + eps_eff(j) - J(i, j);
    return M;
}

double mf_energy(const VectorXd& f_squared, const ModelSpec& spec) {
    spec.validate();
    const int n = spec.n;
    if (f_squared.size() != n) throw ConfigError("f_squared must have length n");
    double sum = f_squared.sum();
    if (std::abs(sum - 1.0) > 1e-10 || f_squared.minCoeff() < -1e-12)
        throw ConfigError("f_squared must be a probability vector");

    const double r = spec.graph.r_total;
    VectorXd eps_eff = effective_epsilon(spec);
    MatrixXd J = coupling_sum(spec);

    double direct = r * (eps_eff.dot(f_squared) -
                         0.5 * f_squared.dot(J * f_squared));
    MatrixXd Mt = m_tilde(eps_eff, J);
    double quadratic = 0.5 * r * f_squared.dot(Mt * f_squared);
    double scale = std::max({1.0, std::abs(direct), std::abs(quadratic)});
    if (std::abs(direct - quadratic) > 1e-12 * scale)
        throw InternalError("mean-field energy forms disagree");
    return direct;
}

// ------------------------- simplex projection (PG) ---------------------------

static VectorXd project_simplex(VectorXd x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> u(x.data(), x.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = 0.0;
    for (int j = 0; j < n; ++j) {
        css += u[j];
        double t = (css - 1.0) / (j + 1);
        if (u[j] - t > 0.0) theta = t;
    }
    for (int i = 0; i < n; ++i) x(i) = std::max(0.0, x(i) - theta);
    return x;
}

// Minimizes (r/2) x^T Mt x over the simplex from one start.
static VectorXd pg_descend(const MatrixXd& Mt, VectorXd x, int max_iters) {
    double L = Mt.cwiseAbs().rowwise().sum().maxCoeff();
    if (L <= 0.0) L = 1.0;
    const double step = 1.0 / L;
    for (int it = 0; it < max_iters; ++it) {
        VectorXd g = Mt * x;
        VectorXd next = project_simplex(x - step * g);
        if ((next - x).lpNorm<Eigen::Infinity>() < 1e-15) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

static double quad_energy(const MatrixXd& Mt, const VectorXd& x, double r) {
    return 0.5 * r * x.dot(Mt * x);
}

VectorXd mf_minimize_bruteforce(const ModelSpec& spec, int random_restarts,
                                unsigned seed) {
    spec.validate();
    const int n = spec.n;
    const double r = spec.graph.r_total;
    MatrixXd Mt = m_tilde(effective_epsilon(spec), coupling_sum(spec));

    std::vector<VectorXd> starts;
    starts.push_back(VectorXd::Constant(n, 1.0 / n));
    for (int i = 0; i < n; ++i) starts.push_back(VectorXd::Unit(n, i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            VectorXd x = VectorXd::Zero(n);
            x(i) = x(j) = 0.5;
            starts.push_back(x);
        }
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < random_restarts; ++k) {
        VectorXd x(n);
        for (int i = 0; i < n; ++i) x(i) = -std::log(1.0 - uni(rng));
        x /= x.sum();
        starts.push_back(x);
    }

    VectorXd best;
    double best_e = std::numeric_limits<double>::infinity();
    for (auto& s : starts) {
        VectorXd x = pg_descend(Mt, s, 200000);
        double e = quad_energy(Mt, x, r);
        if (best.size() == 0 ||
            e < best_e - 1e-13 * std::max(1.0, std::abs(best_e))) {
            best_e = e;
            best = x;
        }
    }
    return best;
}

// ------------------------------- closed form ---------------------------------

static std::vector<int> occupied_of(const VectorXd& f2) {
    std::vector<int> occ;
    for (int i = 0; i < f2.size(); ++i)
        if (f2(i) > 1e-12) occ.push_back(i);
    return occ;
}

// Deterministic subset preference: larger active set first, then lex smaller.
static bool prefer_subset(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
}

static MeanFieldSolution fallback_solve(const ModelSpec& spec,
                                        const MatrixXd& Mt, double r) {
    const int n = spec.n;
    MeanFieldSolution best;
    best.energy = std::numeric_limits<double>::infinity();
    best.used_fallback = true;
    std::vector<int> best_subset;

    auto consider = [&](const std::vector<int>& subset, const VectorXd& x_sub) {
        VectorXd f2 = VectorXd::Zero(n);
        for (size_t k = 0; k < subset.size(); ++k)
            f2(subset[k]) = std::max(0.0, x_sub(static_cast<int>(k)));
        double s = f2.sum();
        if (s <= 0.0) return;
        f2 /= s;
        double e = quad_energy(Mt, f2, r);
        bool better = e < best.energy - 1e-12 * std::max(1.0, std::abs(e));
        bool tie = std::abs(e - best.energy) <= 1e-12 * std::max(1.0, std::abs(e));
        std::vector<int> occ = occupied_of(f2);
        if (better || (tie && prefer_subset(occ, best_subset))) {
            best.energy = e;
            best.f_squared = f2;
            best_subset = occ;
        }
    };

    if (n <= 12) {
        std::vector<std::vector<int>> subsets;
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::vector<int> subset;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) subset.push_back(i);
            subsets.push_back(std::move(subset));
        }
        std::sort(subsets.begin(), subsets.end(), prefer_subset);
        for (const auto& subset : subsets) {
            const int m = static_cast<int>(subset.size());
            if (m == 1) {
                consider(subset, VectorXd::Ones(1));
                continue;
            }
            MatrixXd Msub(m, m);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) Msub(a, b) = Mt(subset[a], subset[b]);
            VectorXd x = pg_descend(Msub, VectorXd::Constant(m, 1.0 / m), 200000);
            consider(subset, x);
        }
    } else {
        for (int i = 0; i < n; ++i)
            consider({i}, VectorXd::Ones(1));
        VectorXd x = mf_minimize_bruteforce(spec);
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        consider(all, x);
    }

    best.occupied = occupied_of(best.f_squared);
    best.M_tilde = Mt;
    VectorXd active_res = Mt * best.f_squared;
    double lam = 0.0;
    for (int i : best.occupied) lam += active_res(i);
    best.lambda = best.occupied.empty() ? 0.0 : lam / best.occupied.size();
    return best;
}

// The active-set loop below drops the most negative component and repeats,
// which can stall on a saddle when M_tilde is indefinite. Sweeping every level
// subset keeps the stationary point of lowest energy instead.
static void improve_by_face_sweep(MeanFieldSolution& sol, const MatrixXd& Mt,
                                  double r) {
    const int n = static_cast<int>(Mt.rows());
    if (n > 12) return;
    bool found = false;
    double best_e = 0.0, best_lambda = 0.0;
    VectorXd best_f2;
    std::vector<int> best_occ;

    auto offer = [&](double e, double lambda, const VectorXd& f2) {
        std::vector<int> occ;
        for (int i = 0; i < n; ++i)
            if (f2(i) > 1e-12) occ.push_back(i);
        double scale = std::max(1.0, std::abs(e));
        bool better = !found || e < best_e - 1e-12 * scale;
        bool tie = found && std::abs(e - best_e) <= 1e-12 * scale;
        if (better || (tie && prefer_subset(occ, best_occ))) {
            found = true;
            best_e = e;
            best_lambda = lambda;
            best_f2 = f2;
            best_occ = occ;
        }
    };

    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> subset;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) subset.push_back(i);
        const int m = static_cast<int>(subset.size());
        if (m == 1) {
            VectorXd f2 = VectorXd::Zero(n);
            f2(subset[0]) = 1.0;
            double lambda = Mt(subset[0], subset[0]);
            offer(0.5 * r * lambda, lambda, f2);
            continue;
        }
        MatrixXd Msub(m, m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) Msub(a, b) = Mt(subset[a], subset[b]);
        Eigen::FullPivLU<MatrixXd> lu(Msub);
        lu.setThreshold(1e-11);
        if (!lu.isInvertible()) continue;
        VectorXd x = lu.solve(VectorXd::Ones(m));
        double s = x.sum();
        if (std::abs(s) < 1e-11 * std::max(1.0, x.cwiseAbs().maxCoeff()))
            continue;
        x /= s;
        if (x.minCoeff() < -1e-12) continue;
        VectorXd f2 = VectorXd::Zero(n);
        for (int a = 0; a < m; ++a) f2(subset[a]) = std::max(0.0, x(a));
        f2 /= f2.sum();
        offer(0.5 * r / s, 1.0 / s, f2);
    }

    if (found && best_e < sol.energy - 1e-12 * std::max(1.0, std::abs(sol.energy))) {
        sol.energy = best_e;
        sol.lambda = best_lambda;
        sol.f_squared = best_f2;
        sol.occupied = best_occ;
    }
}

MeanFieldSolution mf_solve(const ModelSpec& spec) {
    spec.validate();
    const int n = spec.n;
    const double r = spec.graph.r_total;
    VectorXd eps_eff = effective_epsilon(spec);
    MatrixXd J = coupling_sum(spec);
    MatrixXd Mt = m_tilde(eps_eff, J);

    bool negative = spec.U.minCoeff() < 0.0 || spec.V.minCoeff() < 0.0 ||
                    spec.W.minCoeff() < 0.0;

    std::vector<int> active(n);
    std::iota(active.begin(), active.end(), 0);

    while (true) {
        const int m = static_cast<int>(active.size());
        if (m == 1) {
            // trivial solution: best single level
            int arg = 0;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < n; ++i) {
                double e = eps_eff(i) - 0.5 * spec.U(i, i);
                if (e < best - 1e-15) {
                    best = e;
                    arg = i;
                }
            }
            MeanFieldSolution sol;
            sol.f_squared = VectorXd::Zero(n);
            sol.f_squared(arg) = 1.0;
            sol.occupied = {arg};
            sol.M_tilde = Mt;
            sol.lambda = Mt(arg, arg);
            sol.energy = quad_energy(Mt, sol.f_squared, r);
            sol.warning_attractive = negative;
            improve_by_face_sweep(sol, Mt, r);
            return sol;
        }

        MatrixXd Msub(m, m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) Msub(a, b) = Mt(active[a], active[b]);
        Eigen::FullPivLU<MatrixXd> lu(Msub);
        lu.setThreshold(1e-11);
        if (!lu.isInvertible()) {
            MeanFieldSolution sol = fallback_solve(spec, Mt, r);
            sol.warning_attractive = negative;
            return sol;
        }
        VectorXd x = lu.solve(VectorXd::Ones(m));
        double s = x.sum();  // v^T Msub^{-1} v
        if (std::abs(s) < 1e-11 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
            MeanFieldSolution sol = fallback_solve(spec, Mt, r);
            sol.warning_attractive = negative;
            return sol;
        }
        VectorXd f2_sub = x / s;

        int drop = -1;
        double most_negative = -1e-12;
        for (int a = 0; a < m; ++a)
            if (f2_sub(a) < most_negative) {
                most_negative = f2_sub(a);
                drop = a;
            }
        if (drop >= 0) {
            active.erase(active.begin() + drop);
            continue;
        }

        MeanFieldSolution sol;
        sol.f_squared = VectorXd::Zero(n);
        for (int a = 0; a < m; ++a)
            sol.f_squared(active[a]) = std::max(0.0, f2_sub(a));
        sol.f_squared /= sol.f_squared.sum();
        sol.occupied = occupied_of(sol.f_squared);
        sol.M_tilde = Mt;
        sol.lambda = 1.0 / s;
        sol.energy = 0.5 * r * sol.lambda;
        sol.warning_attractive = negative;
        improve_by_face_sweep(sol, Mt, r);
        return sol;
    }
}

std::vector<MfTransition> mf_transition_points(
    const std::function<ModelSpec(double)>& family, double from, double to,
    int coarse_steps) {
    if (!(to > from)) throw ConfigError("transition scan needs to > from");
    if (coarse_steps < 2) throw ConfigError("transition scan needs >= 2 steps");

    auto occ_at = [&](double t) { return mf_solve(family(t)).occupied; };

    std::vector<MfTransition> events;
    double prev_t = from;
    std::vector<int> prev_occ = occ_at(from);
    for (int k = 1; k <= coarse_steps; ++k) {
        double t = from + (to - from) * k / coarse_steps;
        std::vector<int> occ = occ_at(t);
        if (occ != prev_occ) {
            double lo = prev_t, hi = t;
            std::vector<int> occ_lo = prev_occ;
            while (hi - lo > 1e-6) {
                double mid = 0.5 * (lo + hi);
                if (occ_at(mid) == occ_lo)
                    lo = mid;
                else
                    hi = mid;
            }
            MfTransition ev;
            ev.param = 0.5 * (lo + hi);
            std::vector<int> occ_hi = occ_at(hi);
            std::set_difference(occ_hi.begin(), occ_hi.end(), occ_lo.begin(),
                                occ_lo.end(), std::back_inserter(ev.levels_added));
            std::set_difference(occ_lo.begin(), occ_lo.end(), occ_hi.begin(),
                                occ_hi.end(),
                                std::back_inserter(ev.levels_removed));
            events.push_back(std::move(ev));
        }
        prev_t = t;
        prev_occ = std::move(occ);
    }
    return events;
}

}  // namespace sunfact
