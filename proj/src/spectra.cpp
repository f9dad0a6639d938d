#include "sunfact/spectra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "sunfact/errors.hpp"

namespace sunfact {

// relative tolerance for "levels coincide" on the scale max(1, |E0|)
static const double kDegenTol = 1e-7;

static std::vector<int> band_indices(const VectorXd& ev) {
    std::vector<int> band;
    if (ev.size() == 0) return band;
    const double tol = kDegenTol * std::max(1.0, std::abs(ev(0)));
    for (int i = 0; i < ev.size(); ++i) {
        if (ev(i) - ev(0) <= tol)
            band.push_back(i);
        else
            break;
    }
    return band;
}

SpectrumResult eigensolve(const HamiltonianMatrix& H, bool want_vectors,
                          std::optional<int> k) {
    if (H.dim <= 0 || H.data.rows() != H.dim || H.data.cols() != H.dim)
        throw ConfigError("eigensolve needs a square matrix");
    double scale = std::max(1.0, H.data.cwiseAbs().maxCoeff());
    if ((H.data - H.data.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ConfigError("eigensolve requires a symmetric matrix");

    Eigen::SelfAdjointEigenSolver<MatrixXd> es;
    es.compute(H.data, want_vectors ? Eigen::ComputeEigenvectors
                                    : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw InternalError("symmetric eigensolver failed to converge");
    VectorXd ev = es.eigenvalues();

    if (want_vectors) {
        const MatrixXd& V = es.eigenvectors();
        double recon = (V * ev.asDiagonal() * V.transpose() - H.data)
                           .cwiseAbs()
                           .maxCoeff();
        if (recon > 1e-9 * scale)
            throw InternalError("eigendecomposition reconstruction drift");
        double ortho = (V.transpose() * V -
                        MatrixXd::Identity(H.dim, H.dim))
                           .cwiseAbs()
                           .maxCoeff();
        if (ortho > 1e-10)
            throw InternalError("eigenvector orthonormality drift");
    }

    SpectrumResult out;
    if (ev.size() >= 2) out.gap = ev(1) - ev(0);
    std::vector<int> band = band_indices(ev);

    int keep = static_cast<int>(ev.size());
    if (k.has_value()) {
        if (*k < 1) throw ConfigError("k must be positive");
        keep = std::min<int>(keep, *k);
    }
    out.eigenvalues = ev.head(keep);
    for (int b : band)
        if (b < keep) out.gs_band.push_back(b);
    if (H.sector) out.sectors.assign(keep, *H.sector);

    if (want_vectors) {
        if (H.basis_map) {
            MatrixXd full = MatrixXd::Zero(H.full_dim, keep);
            for (std::int64_t row = 0; row < H.dim; ++row)
                full.row((*H.basis_map)[row]) =
                    es.eigenvectors().row(row).head(keep);
            out.eigenvectors = std::move(full);
        } else {
            out.eigenvectors = es.eigenvectors().leftCols(keep);
        }
    }
    return out;
}

SpectrumResult sector_spectrum(const ModelSpec& spec, SectorKind kind,
                               bool want_vectors, std::int64_t cap) {
    spec.validate();
    if (spec.dim() > cap)
        throw CapError("dimension " + std::to_string(spec.dim()) +
                       " exceeds cap " + std::to_string(cap));
    if (kind == SectorKind::occupation &&
        spec.V.cwiseAbs().maxCoeff() != 0.0)
        throw ConfigError("occupation sectors require V = 0");

    auto sectors = enumerate_sectors(spec.n, spec.N, kind);

    struct Entry {
        double value;
        int sector_idx;
        int col;
    };
    std::vector<Entry> entries;
    std::vector<SpectrumResult> parts(sectors.size());
    for (size_t s = 0; s < sectors.size(); ++s) {
        HamiltonianMatrix Hs =
            build_in_basis(spec, sectors[s].second, sectors[s].first);
        parts[s] = eigensolve(Hs, want_vectors);
        for (int i = 0; i < parts[s].eigenvalues.size(); ++i)
            entries.push_back({parts[s].eigenvalues(i),
                               static_cast<int>(s), i});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) {
                         return a.value < b.value;
                     });

    SpectrumResult out;
    const std::int64_t dim = spec.dim();
    out.eigenvalues.resize(dim);
    out.sectors.reserve(dim);
    if (want_vectors) out.eigenvectors = MatrixXd::Zero(dim, dim);
    for (std::int64_t i = 0; i < dim; ++i) {
        const Entry& e = entries[i];
        out.eigenvalues(i) = e.value;
        out.sectors.push_back(sectors[e.sector_idx].first);
        if (want_vectors)
            out.eigenvectors->col(i) =
                parts[e.sector_idx].eigenvectors->col(e.col);
    }
    if (dim >= 2) out.gap = out.eigenvalues(1) - out.eigenvalues(0);
    out.gs_band = band_indices(out.eigenvalues);

    if (want_vectors && kind == SectorKind::parity) {
        // diagonal parity expectations must reproduce the labels exactly
        for (std::int64_t i = 0; i < dim; ++i) {
            const auto& col = out.eigenvectors->col(i);
            VectorXd p = VectorXd::Zero(spec.n);
            for (std::int64_t g = 0; g < dim; ++g) {
                double w = col(g) * col(g);
                if (w == 0.0) continue;
                BasisConfig c = index_to_config(g, spec.n, spec.N);
                SectorLabel l = sector_of(c, spec.n, SectorKind::parity);
                for (int lv = 0; lv < spec.n; ++lv) p(lv) += w * l.parity[lv];
            }
            for (int lv = 0; lv < spec.n; ++lv)
                if (std::abs(p(lv) - out.sectors[i].parity[lv]) > 1e-8)
                    throw InternalError("parity label mismatch in sector merge");
        }
    }
    return out;
}

VectorXd excitation_energies(const SpectrumResult& s, int count) {
    if (count < 0 || count >= s.eigenvalues.size())
        throw ConfigError("excitation count must be below the spectrum size");
    VectorXd out(count);
    for (int i = 1; i <= count; ++i)
        out(i - 1) = s.eigenvalues(i) - s.eigenvalues(0);
    return out;
}

// ------------------------------ sweeps ---------------------------------------

namespace {

struct PointData {
    std::vector<VectorXd> sector_values;  // ascending, per sector
    int gs_sector = 0;
};

using SectorList = std::vector<std::pair<SectorLabel, std::vector<std::int64_t>>>;

PointData evaluate_point(const ModelSpec& spec, const SectorList& sectors) {
    PointData pd;
    pd.sector_values.resize(sectors.size());
    double best = std::numeric_limits<double>::infinity();
    for (size_t s = 0; s < sectors.size(); ++s) {
        HamiltonianMatrix Hs =
            build_in_basis(spec, sectors[s].second, sectors[s].first);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(Hs.data,
                                                   Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw InternalError("symmetric eigensolver failed to converge");
        pd.sector_values[s] = es.eigenvalues();
        if (pd.sector_values[s](0) < best) {
            best = pd.sector_values[s](0);
            pd.gs_sector = static_cast<int>(s);
        }
    }
    return pd;
}

double sector_minimum(const ModelSpec& spec, const SectorList& sectors,
                      int s) {
    HamiltonianMatrix Hs =
        build_in_basis(spec, sectors[s].second, sectors[s].first);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Hs.data, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw InternalError("symmetric eigensolver failed to converge");
    return es.eigenvalues()(0);
}

}  // namespace

void parallel_for_indices(int count, int threads,
                          const std::function<void(int)>& fn) {
    if (threads <= 0) {
        unsigned hc = std::thread::hardware_concurrency();
        threads = hc > 0 ? static_cast<int>(hc) : 1;
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

SweepResult find_crossings(const std::function<ModelSpec(double)>& family,
                           double from, double to, int band_size,
                           SectorKind kind, int coarse_steps, int keep_levels,
                           int threads, const std::string& param_name) {
    if (!(to > from)) throw ConfigError("sweep range is empty");
    if (coarse_steps < 2) throw ConfigError("sweep needs at least 2 grid points");
    if (band_size < 1) throw ConfigError("band_size must be positive");

    ModelSpec probe = family(from);
    probe.validate();
    SectorList sectors = enumerate_sectors(probe.n, probe.N, kind);
    const int L = keep_levels > 0 ? keep_levels : band_size;

    SweepResult res;
    res.param_name = param_name;
    res.grid.resize(coarse_steps);
    for (int i = 0; i < coarse_steps; ++i)
        res.grid[i] = from + (to - from) * i / (coarse_steps - 1);

    std::vector<PointData> data(coarse_steps);
    parallel_for_indices(coarse_steps, threads, [&](int i) {
        data[i] = evaluate_point(family(res.grid[i]), sectors);
    });

    res.points.resize(coarse_steps);
    for (int i = 0; i < coarse_steps; ++i) {
        struct Entry {
            double value;
            int sector_idx;
        };
        std::vector<Entry> merged;
        for (size_t s = 0; s < sectors.size(); ++s) {
            const VectorXd& vals = data[i].sector_values[s];
            int take = std::min<int>(L, static_cast<int>(vals.size()));
            for (int j = 0; j < take; ++j)
                merged.push_back({vals(j), static_cast<int>(s)});
        }
        std::stable_sort(merged.begin(), merged.end(),
                         [](const Entry& a, const Entry& b) {
                             return a.value < b.value;
                         });
        int keep = std::min<int>(L, static_cast<int>(merged.size()));
        SweepPoint& pt = res.points[i];
        pt.param = res.grid[i];
        pt.levels.resize(keep);
        for (int j = 0; j < keep; ++j) {
            pt.levels(j) = merged[j].value;
            pt.sectors.push_back(sectors[merged[j].sector_idx].first);
        }
        if (keep >= 2) pt.gap = pt.levels(1) - pt.levels(0);
    }

    const double param_scale =
        std::max({1.0, std::abs(from), std::abs(to)});
    for (int i = 0; i + 1 < coarse_steps; ++i) {
        int sL = data[i].gs_sector;
        int sR = data[i + 1].gs_sector;
        if (sL == sR) continue;
        double lo = res.grid[i], hi = res.grid[i + 1];
        for (int it = 0; it < 40 && hi - lo > 1e-8 * param_scale; ++it) {
            double mid = 0.5 * (lo + hi);
            ModelSpec spec = family(mid);
            double gL = sector_minimum(spec, sectors, sL);
            double gR = sector_minimum(spec, sectors, sR);
            if (gL <= gR)
                lo = mid;
            else
                hi = mid;
        }
        CrossingEvent ev;
        ev.param = 0.5 * (lo + hi);
        ev.sector_before = sectors[sL].first;
        ev.sector_after = sectors[sR].first;

        PointData at = evaluate_point(family(ev.param), sectors);
        std::vector<double> all;
        for (const auto& vals : at.sector_values)
            for (int j = 0; j < vals.size(); ++j) all.push_back(vals(j));
        std::sort(all.begin(), all.end());
        double tol = kDegenTol * std::max(1.0, std::abs(all[0]));
        int mult = 0;
        for (double v : all)
            if (v - all[0] <= tol)
                ++mult;
            else
                break;
        ev.multiplicity = mult;
        ev.kind = mult >= band_size ? CrossingKind::factorization_crossing
                                    : CrossingKind::parity_transition;

        if (!res.events.empty() &&
            std::abs(res.events.back().param - ev.param) < 1e-6 * param_scale) {
            // a grid point sitting on the crossing splits the event in two;
            // keep the outer sectors
            res.events.back().sector_after = ev.sector_after;
            continue;
        }
        res.events.push_back(std::move(ev));
    }
    return res;
}

}  // namespace sunfact
