#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sunfact/hamiltonian.hpp"
#include "sunfact/model.hpp"

namespace sunfact {

struct SpectrumResult {
    VectorXd eigenvalues;  // ascending
    std::vector<SectorLabel> sectors;  // per eigenvalue; empty if unlabeled
    std::optional<MatrixXd> eigenvectors;  // columns, full-space indexing
    double gap = 0.0;                      // E1 - E0
    std::vector<int> gs_band;              // indices of the lowest D levels
};

SpectrumResult eigensolve(const HamiltonianMatrix& H, bool want_vectors = false,
                          std::optional<int> k = std::nullopt);

// Per-sector diagonalization merged with labels; agrees with the full solve.
SpectrumResult sector_spectrum(const ModelSpec& spec, SectorKind kind,
                               bool want_vectors = false,
                               std::int64_t cap = kDefaultDimCap);

VectorXd excitation_energies(const SpectrumResult& s, int count);

enum class CrossingKind { factorization_crossing, parity_transition };

struct CrossingEvent {
    double param = 0.0;
    CrossingKind kind = CrossingKind::parity_transition;
    int multiplicity = 0;           // band levels coincident at the event
    SectorLabel sector_before, sector_after;
};

struct SweepPoint {
    double param = 0.0;
    VectorXd levels;  // lowest k merged eigenvalues
    std::vector<SectorLabel> sectors;
    double gap = 0.0;
};

struct SweepResult {
    std::string param_name;
    std::vector<double> grid;
    std::vector<SweepPoint> points;
    std::vector<CrossingEvent> events;
};

// Scans per-sector band minima on a coarse grid, bisects each ground-sector
// change to 1e-8 relative resolution, classifies full-band coincidences as
// factorization crossings.
SweepResult find_crossings(const std::function<ModelSpec(double)>& family,
                           double from, double to, int band_size,
                           SectorKind kind = SectorKind::parity,
                           int coarse_steps = 201, int keep_levels = 0,
                           int threads = 0,
                           const std::string& param_name = "param");

// Parallel map over [0, count); results land wherever fn stores them, ordered
// by index. threads <= 0 picks the hardware count.
void parallel_for_indices(int count, int threads,
                          const std::function<void(int)>& fn);

}  // namespace sunfact
