#include "sunfact/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sunfact/entanglement.hpp"
#include "sunfact/errors.hpp"
#include "sunfact/factorization.hpp"
#include "sunfact/families.hpp"
#include "sunfact/io.hpp"
#include "sunfact/meanfield.hpp"
#include "sunfact/model.hpp"
#include "sunfact/projection.hpp"
#include "sunfact/spectra.hpp"

namespace sunfact {
namespace {

using nlohmann::json;

struct GlobalOpts {
    std::int64_t cap = kDefaultDimCap;
    int threads = 0;
    unsigned seed = 12345;
    std::string out_dir = ".";
};

std::string join_out(const GlobalOpts& gl, const std::string& name) {
    if (!name.empty() && name.front() == '/') return name;
    std::filesystem::create_directories(gl.out_dir);
    return gl.out_dir + "/" + name;
}

// occupation labels contain commas; keep CSV cells delimiter-free
std::string csv_label(const SectorLabel& l) {
    std::string s = l.str();
    std::replace(s.begin(), s.end(), ',', ';');
    return s;
}

json vec_to_json(const VectorXd& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json mat_to_json(const MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json events_to_json(const std::vector<CrossingEvent>& events) {
    json arr = json::array();
    for (const auto& ev : events) {
        arr.push_back({{"param", ev.param},
                       {"kind", ev.kind == CrossingKind::factorization_crossing
                                    ? "factorization_crossing"
                                    : "parity_transition"},
                       {"multiplicity", ev.multiplicity},
                       {"sector_before", ev.sector_before.str()},
                       {"sector_after", ev.sector_after.str()}});
    }
    return json{{"events", arr}};
}

struct CheckList {
    json arr = json::array();
    bool all = true;

    void add(const std::string& name, bool pass, double value, double expected,
             double tol) {
        arr.push_back({{"name", name},
                       {"pass", pass},
                       {"value", value},
                       {"expected", expected},
                       {"tolerance", tol}});
        all = all && pass;
    }
    void near(const std::string& name, double value, double expected,
              double tol) {
        add(name, std::abs(value - expected) <= tol, value, expected, tol);
    }
};

void write_checks(const GlobalOpts& gl, const std::string& figure,
                  const CheckList& checks, std::ostream& os) {
    json j{{"figure", figure},
           {"checks", checks.arr},
           {"all_pass", checks.all}};
    write_file_atomic(join_out(gl, "checks.json"), j.dump(2) + "\n");
    os << figure << ": checks " << (checks.all ? "pass" : "FAIL") << "\n";
}

// ----------------------------- sweep emission --------------------------------

void write_sweep_csv(const SweepResult& res, int levels,
                     const std::string& path, bool to_file,
                     std::ostream& os) {
    CsvWriter csv;
    csv.header.push_back(res.param_name);
    for (int i = 0; i < levels; ++i) csv.header.push_back("E" + std::to_string(i));
    for (int i = 0; i < levels; ++i)
        csv.header.push_back("sector" + std::to_string(i));
    csv.header.push_back("gap");
    for (const auto& pt : res.points) {
        std::vector<std::string> row;
        row.push_back(format_double(pt.param));
        for (int i = 0; i < levels; ++i)
            row.push_back(i < pt.levels.size() ? format_double(pt.levels(i))
                                               : "");
        for (int i = 0; i < levels; ++i)
            row.push_back(i < static_cast<int>(pt.sectors.size())
                              ? csv_label(pt.sectors[i])
                              : "");
        row.push_back(format_double(pt.gap));
        csv.add_row(row);
    }
    if (to_file) {
        write_file_atomic(path, csv.str());
        write_file_atomic(path + ".events.json",
                          events_to_json(res.events).dump(2) + "\n");
    } else {
        os << csv.str();
    }
}

// ----------------------------- entangle rows ---------------------------------

struct EntangleRow {
    double S_site = 0.0;
    std::vector<double> negativities;
    std::vector<double> mutual_infos;
    VectorXd occ;
    VectorXd pair4;
};

EntangleRow entangle_observables(const VectorXcd& gs, int n, int N,
                                 const std::vector<int>& dists) {
    EntangleRow row;
    row.S_site = entropy(reduce(gs, {0}, n, N));
    for (int d : dists) {
        row.negativities.push_back(negativity(reduce(gs, {0, d}, n, N), n));
        row.mutual_infos.push_back(mutual_information(gs, 0, d, n, N));
    }
    row.occ = site_occupations(gs, 0, n, N);
    VectorXd full = pair_spectrum(gs, 0, 1, n, N);
    row.pair4 = full.head(std::min<int>(4, static_cast<int>(full.size())));
    return row;
}

VectorXcd ground_vector(const SpectrumResult& sp) {
    return sp.eigenvectors->col(0).cast<std::complex<double>>();
}

// --------------------------- subcommand: factorize ---------------------------

json factorize_json(const ModelSpec& spec) {
    FactorizationSolution sol = solve_uniform(spec);
    VectorXd fr(sol.f.size()), fi(sol.f.size());
    for (int i = 0; i < sol.f.size(); ++i) {
        fr(i) = sol.f(i).real();
        fi(i) = sol.f(i).imag();
    }
    return json{{"E2", sol.E2},
                {"f_squared", vec_to_json(sol.f_squared)},
                {"f_real", vec_to_json(fr)},
                {"f_imag", vec_to_json(fi)},
                {"T_required", mat_to_json(sol.T_required)},
                {"is_gs", sol.is_gs},
                {"sufficiency", sol.sufficiency},
                {"continuous_set", sol.continuous_set},
                {"degeneracy", sol.degeneracy},
                {"total_energy", sol.total_energy}};
}

// --------------------------- subcommand: meanfield ----------------------------

json meanfield_json(const MeanFieldSolution& sol) {
    json occ = json::array();
    for (int lv : sol.occupied) occ.push_back(lv + 1);
    return json{{"f_squared", vec_to_json(sol.f_squared)},
                {"occupied", occ},
                {"energy", sol.energy},
                {"lambda", sol.lambda},
                {"warning_attractive", sol.warning_attractive},
                {"used_fallback", sol.used_fallback}};
}

json transitions_to_json(const std::vector<MfTransition>& transitions) {
    json arr = json::array();
    for (const auto& tr : transitions) {
        json added = json::array(), removed = json::array();
        for (int lv : tr.levels_added) added.push_back(lv + 1);
        for (int lv : tr.levels_removed) removed.push_back(lv + 1);
        arr.push_back({{"param", tr.param},
                       {"levels_added", added},
                       {"levels_removed", removed}});
    }
    return json{{"transitions", arr}};
}

// ------------------------------- reproduce ------------------------------------

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

const CrossingEvent* closest_event(const std::vector<CrossingEvent>& events,
                                   double target) {
    const CrossingEvent* best = nullptr;
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& ev : events) {
        double d = std::abs(ev.param - target);
        if (d < dist) {
            dist = d;
            best = &ev;
        }
    }
    return best;
}

void check_event(CheckList& checks, const std::string& prefix,
                 const std::vector<CrossingEvent>& events, double target,
                 double param_tol, int multiplicity) {
    const CrossingEvent* ev = closest_event(events, target);
    if (!ev) {
        checks.add(prefix + "_found", false, 0.0, target, param_tol);
        return;
    }
    checks.near(prefix + "_param", ev->param, target, param_tol);
    checks.near(prefix + "_multiplicity", ev->multiplicity, multiplicity, 0.0);
}

int reproduce_fig2(const GlobalOpts& gl, std::ostream& os) {
    auto t0 = std::chrono::steady_clock::now();
    CheckList checks;
    checks.near("pair_energy_E2c", band_vw_E2c(), -1.26, 0.005);

    for (int N : {2, 4}) {
        auto family = make_family(band_vw_spec(0.0, N), "lerp:band_vw");
        SweepResult res = find_crossings(family, 0.0, 2.0, 4,
                                         SectorKind::parity, 201, 6,
                                         gl.threads, "v_over_vc");
        std::string name = N == 2 ? "fig2_pair.csv" : "fig2_ring.csv";
        write_sweep_csv(res, 6, join_out(gl, name), true, os);
        os << "fig2: wrote " << name << "\n";
        std::string prefix = N == 2 ? "pair_crossing" : "ring_crossing";
        check_event(checks, prefix, res.events, 1.0, 1e-6, 4);
        if (const CrossingEvent* ev = closest_event(res.events, 1.0))
            checks.add(prefix + "_kind",
                       ev->kind == CrossingKind::factorization_crossing,
                       ev->multiplicity, 4, 0.0);
    }
    checks.add("runtime_under_5s", elapsed_s(t0) < 5.0, elapsed_s(t0), 5.0, 0.0);
    write_checks(gl, "fig2", checks, os);
    return checks.all ? 0 : 4;
}

struct FigRow {
    double param = 0.0;
    VectorXd dE;           // first three excitation energies
    double ehf_minus_e0 = 0.0;
    VectorXd occ_exact, occ_hf;
    double S_site = 0.0;
    std::vector<double> negativities;
    std::vector<double> mutual_infos;
    VectorXd pair4;
};

// shared worker for the observable sweeps at N = 4 and N = 6
std::vector<FigRow> observable_sweep(const std::function<ModelSpec(double)>& family,
                                     double from, double to, int steps,
                                     const std::vector<int>& dists,
                                     const GlobalOpts& gl) {
    std::vector<FigRow> rows(steps);
    parallel_for_indices(steps, gl.threads, [&](int i) {
        double t = from + (to - from) * i / (steps - 1);
        ModelSpec spec = family(t);
        SpectrumResult sp = sector_spectrum(spec, SectorKind::parity, true,
                                            gl.cap);
        VectorXcd gs = ground_vector(sp);
        FigRow& row = rows[i];
        row.param = t;
        row.dE = excitation_energies(sp, 3);
        MeanFieldSolution mf = mf_solve(spec);
        row.ehf_minus_e0 = mf.energy - sp.eigenvalues(0);
        EntangleRow ent = entangle_observables(gs, spec.n, spec.N, dists);
        row.occ_exact = ent.occ;
        row.occ_hf = mf.f_squared;
        row.S_site = ent.S_site;
        row.negativities = ent.negativities;
        row.mutual_infos = ent.mutual_infos;
        row.pair4 = ent.pair4;
    });
    return rows;
}

void write_fig_rows(const std::vector<FigRow>& rows, int n,
                    const std::vector<int>& dists, const std::string& path) {
    CsvWriter csv;
    csv.header = {"v_over_vc", "dE_10", "dE_20", "dE_30", "E_hf_minus_E0"};
    for (int i = 1; i <= n; ++i)
        csv.header.push_back("occ_exact_" + std::to_string(i));
    for (int i = 1; i <= n; ++i)
        csv.header.push_back("occ_hf_" + std::to_string(i));
    csv.header.push_back("S_site");
    for (int d : dists)
        csv.header.push_back("negativity_d" + std::to_string(d));
    for (int d : dists)
        csv.header.push_back("mutual_info_d" + std::to_string(d));
    for (const auto& row : rows) {
        std::vector<double> vals{row.param, row.dE(0), row.dE(1), row.dE(2),
                                 row.ehf_minus_e0};
        for (int i = 0; i < n; ++i) vals.push_back(row.occ_exact(i));
        for (int i = 0; i < n; ++i) vals.push_back(row.occ_hf(i));
        vals.push_back(row.S_site);
        for (double v : row.negativities) vals.push_back(v);
        for (double v : row.mutual_infos) vals.push_back(v);
        csv.add_row(vals);
    }
    write_file_atomic(path, csv.str());
}

// side-limit states: the factorization f projected onto the GS sectors found
// just below and just above the crossing
struct SideLimits {
    VectorXcd below, above;
    SectorLabel sector_below, sector_above;
};

SideLimits side_limit_states(const std::function<ModelSpec(double)>& family,
                             double tc, const GlobalOpts& gl) {
    ModelSpec at = family(tc);
    FactorizationSolution sol = solve_uniform(at);
    SideLimits out;
    for (int side = 0; side < 2; ++side) {
        double t = side == 0 ? tc * (1.0 - 1e-6) : tc * (1.0 + 1e-6);
        SpectrumResult sp = sector_spectrum(family(t), SectorKind::parity,
                                            false, gl.cap);
        SectorLabel sec = sp.sectors[0];
        ProjectedState ps = parity_project(sol.f, at.N, sec);
        if (side == 0) {
            out.below = ps.vector;
            out.sector_below = sec;
        } else {
            out.above = ps.vector;
            out.sector_above = sec;
        }
    }
    return out;
}

void check_side_limits(CheckList& checks, const SideLimits& side, int n, int N,
                       const std::vector<int>& dists) {
    for (int s = 0; s < 2; ++s) {
        const VectorXcd& state = s == 0 ? side.below : side.above;
        std::string tag = s == 0 ? "below" : "above";
        std::vector<double> negs, mis;
        for (int d : dists) {
            negs.push_back(negativity(reduce(state, {0, d}, n, N), n));
            mis.push_back(mutual_information(state, 0, d, n, N));
        }
        double neg_spread = *std::max_element(negs.begin(), negs.end()) -
                            *std::min_element(negs.begin(), negs.end());
        double mi_spread = *std::max_element(mis.begin(), mis.end()) -
                           *std::min_element(mis.begin(), mis.end());
        checks.near("negativity_side_limit_spread_" + tag, neg_spread, 0.0,
                    1e-9);
        checks.near("mutual_info_side_limit_spread_" + tag, mi_spread, 0.0,
                    1e-9);
        double max_block = 0.0;
        for (int m = 2; m <= std::min(N - 1, 4); ++m) {
            std::vector<int> block(m);
            for (int i = 0; i < m; ++i) block[i] = i;
            max_block = std::max(max_block, entropy(reduce(state, block, n, N)));
        }
        checks.add("block_entropy_bound_" + tag, max_block <= n - 1 + 1e-9,
                   max_block, n - 1, 1e-9);
    }
}

int reproduce_fig3(const GlobalOpts& gl, std::ostream& os) {
    const int N = 4;
    auto family = make_family(band_vw_spec(0.0, N), "lerp:band_vw");
    std::vector<int> dists{1, 2};
    auto rows = observable_sweep(family, 0.0, 2.0, 101, dists, gl);
    write_fig_rows(rows, 3, dists, join_out(gl, "fig3.csv"));
    os << "fig3: wrote fig3.csv\n";

    CheckList checks;
    SideLimits side = side_limit_states(family, 1.0, gl);
    check_side_limits(checks, side, 3, N, dists);
    double min_gap = 0.0;
    for (const auto& row : rows) min_gap = std::min(min_gap, row.ehf_minus_e0);
    checks.add("hf_variational", min_gap >= -1e-9, min_gap, 0.0, 1e-9);
    write_checks(gl, "fig3", checks, os);
    return checks.all ? 0 : 4;
}

int reproduce_fig4(const GlobalOpts& gl, std::ostream& os) {
    auto t0 = std::chrono::steady_clock::now();
    const int N = 6;
    auto family = make_family(band_vw_spec(0.0, N), "lerp:band_vw");
    std::vector<int> dists{1, 2, 3};
    auto rows = observable_sweep(family, 0.0, 2.0, 81, dists, gl);
    write_fig_rows(rows, 3, dists, join_out(gl, "fig4.csv"));
    os << "fig4: wrote fig4.csv\n";

    SweepResult res = find_crossings(family, 0.0, 2.0, 4, SectorKind::parity,
                                     201, 6, gl.threads, "v_over_vc");
    write_sweep_csv(res, 6, join_out(gl, "fig4_spectrum.csv"), true, os);
    os << "fig4: wrote fig4_spectrum.csv\n";

    CheckList checks;
    check_event(checks, "factorization", res.events, 1.0, 1e-6, 4);
    check_event(checks, "parity_transition_2", res.events, 1.52, 0.01, 2);
    check_event(checks, "parity_transition_3", res.events, 1.74, 0.01, 2);

    auto onsets = mf_transition_points(family, 0.0, 1.0, 64);
    if (onsets.size() >= 2) {
        checks.near("mf_onset_2", onsets[0].param, 0.44, 0.01);
        checks.near("mf_onset_3", onsets[1].param, 0.65, 0.01);
    } else {
        checks.add("mf_onsets_found", false, static_cast<double>(onsets.size()),
                   2.0, 0.0);
    }
    double rt = elapsed_s(t0);
    checks.add("runtime_under_60s", rt < 60.0, rt, 60.0, 0.0);
    write_checks(gl, "fig4", checks, os);
    return checks.all ? 0 : 4;
}

int reproduce_fig5(const GlobalOpts& gl, std::ostream& os) {
    const int N = 6;
    auto family = make_family(band_vw_spec(0.0, N), "lerp:band_vw");
    std::vector<int> dists{1, 2, 3};
    const int steps = 81;
    std::vector<EntangleRow> rows(steps);
    std::vector<double> grid(steps);
    parallel_for_indices(steps, gl.threads, [&](int i) {
        grid[i] = 2.0 * i / (steps - 1);
        ModelSpec spec = family(grid[i]);
        SpectrumResult sp = sector_spectrum(spec, SectorKind::parity, true,
                                            gl.cap);
        rows[i] = entangle_observables(ground_vector(sp), spec.n, spec.N,
                                       dists);
    });

    CsvWriter csv;
    csv.header = {"v_over_vc", "pair_spectrum_1", "pair_spectrum_2",
                  "pair_spectrum_3", "pair_spectrum_4"};
    for (int d : dists)
        csv.header.push_back("mutual_info_d" + std::to_string(d));
    for (int i = 0; i < steps; ++i) {
        std::vector<double> vals{grid[i]};
        for (int j = 0; j < 4; ++j) vals.push_back(rows[i].pair4(j));
        for (double v : rows[i].mutual_infos) vals.push_back(v);
        csv.add_row(vals);
    }
    write_file_atomic(join_out(gl, "fig5.csv"), csv.str());
    os << "fig5: wrote fig5.csv\n";

    CheckList checks;
    SideLimits side = side_limit_states(family, 1.0, gl);
    check_side_limits(checks, side, 3, N, dists);
    write_checks(gl, "fig5", checks, os);
    return checks.all ? 0 : 4;
}

int reproduce_fig6(const GlobalOpts& gl, std::ostream& os, int n) {
    const int N = 4;
    int band = n == 3 ? 15 : 35;
    auto family = make_family(band_w_spec(0.0, n, N), "lerp:band_w");
    SweepResult res = find_crossings(family, 0.0, 2.0, band,
                                     SectorKind::occupation, 201, band,
                                     gl.threads, "w_over_wc");
    std::string name = "fig6_n" + std::to_string(n) + ".csv";
    write_sweep_csv(res, band, join_out(gl, name), true, os);
    os << "fig6_n" << n << ": wrote " << name << "\n";

    CheckList checks;
    check_event(checks, "factorization", res.events, 1.0, 1e-6, band);
    if (const CrossingEvent* ev = closest_event(res.events, 1.0)) {
        checks.add("crossing_kind",
                   ev->kind == CrossingKind::factorization_crossing,
                   ev->multiplicity, band, 0.0);
        SpectrumResult at = sector_spectrum(family(1.0),
                                            SectorKind::occupation, false,
                                            gl.cap);
        checks.near("gs_energy_at_crossing", at.eigenvalues(0), -10.0, 1e-9);
    }
    write_checks(gl, "fig6_n" + std::to_string(n), checks, os);
    return checks.all ? 0 : 4;
}

int reproduce_fig7(const GlobalOpts& gl, std::ostream& os) {
    const int N = 4;
    auto family = make_family(heisenberg_eps_spec(1.0, N), "lerp:heisenberg_eps");
    SweepResult res = find_crossings(family, 0.0, 1.0, 35,
                                     SectorKind::occupation, 101, 40,
                                     gl.threads, "eps_over_J");
    write_sweep_csv(res, 40, join_out(gl, "fig7.csv"), true, os);
    os << "fig7: wrote fig7.csv\n";

    CheckList checks;
    SpectrumResult su = sector_spectrum(heisenberg_eps_spec(0.0, N),
                                        SectorKind::occupation, false, gl.cap);
    std::vector<double> expected{-2.0, -1.0, 0.0, 1.0, 2.0};
    std::vector<int> mult{35, 110, 60, 50, 1};
    int idx = 0;
    bool values_ok = true, counts_ok = true;
    for (size_t lv = 0; lv < expected.size(); ++lv) {
        int count = 0;
        while (idx < su.eigenvalues.size() &&
               std::abs(su.eigenvalues(idx) - expected[lv]) <= 1e-10) {
            ++count;
            ++idx;
        }
        if (count != mult[lv]) counts_ok = false;
    }
    if (idx != su.eigenvalues.size()) values_ok = false;
    checks.add("su4_eigenvalues_exact", values_ok, idx, 256, 0.0);
    checks.add("su4_multiplicities", counts_ok, counts_ok ? 1.0 : 0.0, 1.0,
               0.0);
    write_checks(gl, "fig7", checks, os);
    return checks.all ? 0 : 4;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::string* out,
            std::string* err) {
    std::ostringstream oss, ess;
    GlobalOpts gl;

    auto flush = [&](int code) {
        if (out)
            *out = oss.str();
        else
            std::cout << oss.str();
        if (err)
            *err = ess.str();
        else
            std::cerr << ess.str();
        return code;
    };

    CLI::App app{"ground-state factorization toolkit for n-level lattice models"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--cap", gl.cap, "dimension cap for dense matrices");
    app.add_option("--threads", gl.threads, "sweep worker threads, 0 = auto");
    app.add_option("--seed", gl.seed, "seed for randomized utilities");
    app.add_option("--out-dir", gl.out_dir, "directory for output files");

    // factorize
    auto* fac = app.add_subcommand("factorize", "solve the uniform pair problem");
    std::string fac_config, fac_out;
    fac->add_option("--config", fac_config, "model spec JSON")->required();
    fac->add_option("--out", fac_out, "also write the JSON result here");
    fac->callback([&]() {
        json j = factorize_json(load_spec_json(fac_config));
        std::string text = j.dump(2) + "\n";
        oss << text;
        if (!fac_out.empty()) write_file_atomic(join_out(gl, fac_out), text);
    });

    // meanfield
    auto* mf = app.add_subcommand("meanfield", "closed-form mean-field solution");
    std::string mf_config, mf_param, mf_out;
    double mf_from = 0.0, mf_to = 1.0;
    int mf_steps = 0;
    mf->add_option("--config", mf_config, "model spec JSON")->required();
    mf->add_option("--param", mf_param, "sweep parameter path");
    mf->add_option("--from", mf_from, "sweep start");
    mf->add_option("--to", mf_to, "sweep end");
    mf->add_option("--steps", mf_steps, "sweep grid points");
    mf->add_option("--out", mf_out, "output file");
    mf->callback([&]() {
        ModelSpec spec = load_spec_json(mf_config);
        if (mf_param.empty()) {
            json j = meanfield_json(mf_solve(spec));
            std::string text = j.dump(2) + "\n";
            oss << text;
            if (!mf_out.empty()) write_file_atomic(join_out(gl, mf_out), text);
            return;
        }
        if (mf_steps < 2) throw ConfigError("sweep needs --steps >= 2");
        auto family = make_family(spec, mf_param);
        CsvWriter csv;
        csv.header.push_back("param");
        for (int i = 1; i <= spec.n; ++i)
            csv.header.push_back("f2_" + std::to_string(i));
        csv.header.push_back("energy");
        for (int i = 0; i < mf_steps; ++i) {
            double t = mf_from + (mf_to - mf_from) * i / (mf_steps - 1);
            MeanFieldSolution sol = mf_solve(family(t));
            std::vector<double> vals{t};
            for (int lv = 0; lv < spec.n; ++lv) vals.push_back(sol.f_squared(lv));
            vals.push_back(sol.energy);
            csv.add_row(vals);
        }
        if (mf_out.empty()) {
            oss << csv.str();
        } else {
            std::string path = join_out(gl, mf_out);
            write_file_atomic(path, csv.str());
            auto transitions = mf_transition_points(family, mf_from, mf_to,
                                                    std::max(64, mf_steps));
            write_file_atomic(path + ".events.json",
                              transitions_to_json(transitions).dump(2) + "\n");
        }
    });

    // spectrum
    auto* spx = app.add_subcommand("spectrum", "sector-resolved spectrum sweep");
    std::string sp_config, sp_param, sp_sectors = "parity", sp_out;
    double sp_from = 0.0, sp_to = 1.0;
    int sp_steps = 201, sp_levels = 4;
    spx->add_option("--config", sp_config, "model spec JSON")->required();
    spx->add_option("--param", sp_param, "sweep parameter path")->required();
    spx->add_option("--from", sp_from, "sweep start")->required();
    spx->add_option("--to", sp_to, "sweep end")->required();
    spx->add_option("--steps", sp_steps, "grid points");
    spx->add_option("--levels", sp_levels, "levels per row");
    spx->add_option("--sectors", sp_sectors, "parity | occupation | none");
    spx->add_option("--out", sp_out, "CSV output file");
    spx->callback([&]() {
        ModelSpec spec = load_spec_json(sp_config);
        if (spec.dim() > gl.cap)
            throw CapError("dimension " + std::to_string(spec.dim()) +
                           " exceeds cap " + std::to_string(gl.cap));
        auto family = make_family(spec, sp_param);
        if (sp_steps < 2) throw ConfigError("sweep needs --steps >= 2");
        SweepResult res;
        if (sp_sectors == "none") {
            res.param_name = "param";
            res.grid.resize(sp_steps);
            res.points.resize(sp_steps);
            parallel_for_indices(sp_steps, gl.threads, [&](int i) {
                double t = sp_from + (sp_to - sp_from) * i / (sp_steps - 1);
                res.grid[i] = t;
                SpectrumResult one =
                    eigensolve(build_full(family(t), gl.cap), false, sp_levels);
                res.points[i].param = t;
                res.points[i].levels = one.eigenvalues;
                res.points[i].gap = one.gap;
            });
        } else {
            SectorKind kind = sp_sectors == "occupation"
                                  ? SectorKind::occupation
                                  : SectorKind::parity;
            if (sp_sectors != "parity" && sp_sectors != "occupation")
                throw ConfigError("--sectors must be parity, occupation or none");
            res = find_crossings(family, sp_from, sp_to, sp_levels, kind,
                                 sp_steps, sp_levels, gl.threads);
        }
        std::string path = sp_out.empty() ? "" : join_out(gl, sp_out);
        write_sweep_csv(res, sp_levels, path, !sp_out.empty(), oss);
    });

    // entangle
    auto* ent = app.add_subcommand("entangle",
                                   "entanglement observables along a sweep");
    std::string en_config, en_param, en_pairs = "1,2,3", en_out;
    double en_from = 0.0, en_to = 1.0;
    int en_steps = 41;
    ent->add_option("--config", en_config, "model spec JSON")->required();
    ent->add_option("--param", en_param, "sweep parameter path")->required();
    ent->add_option("--from", en_from, "sweep start")->required();
    ent->add_option("--to", en_to, "sweep end")->required();
    ent->add_option("--steps", en_steps, "grid points");
    ent->add_option("--pairs", en_pairs, "comma list of pair distances");
    ent->add_option("--out", en_out, "CSV output file");
    ent->callback([&]() {
        ModelSpec spec = load_spec_json(en_config);
        auto family = make_family(spec, en_param);
        if (en_steps < 2) throw ConfigError("sweep needs --steps >= 2");
        std::vector<int> dists;
        std::stringstream ss(en_pairs);
        std::string item;
        while (std::getline(ss, item, ','))
            dists.push_back(std::stoi(item));
        for (int d : dists)
            if (d < 1 || d >= spec.N)
                throw ConfigError("pair distance must be in [1, N)");

        std::vector<EntangleRow> rows(en_steps);
        std::vector<double> grid(en_steps);
        parallel_for_indices(en_steps, gl.threads, [&](int i) {
            grid[i] = en_from + (en_to - en_from) * i / (en_steps - 1);
            ModelSpec at = family(grid[i]);
            SpectrumResult sp = sector_spectrum(at, SectorKind::parity, true,
                                                gl.cap);
            rows[i] = entangle_observables(ground_vector(sp), at.n, at.N,
                                           dists);
        });

        CsvWriter csv;
        csv.header.push_back("param");
        csv.header.push_back("S_site");
        for (int d : dists)
            csv.header.push_back("negativity_d" + std::to_string(d));
        for (int d : dists)
            csv.header.push_back("mutual_info_d" + std::to_string(d));
        for (int i = 1; i <= spec.n; ++i)
            csv.header.push_back("occ_" + std::to_string(i));
        for (int i = 1; i <= 4; ++i)
            csv.header.push_back("pair_spectrum_" + std::to_string(i));
        for (int i = 0; i < en_steps; ++i) {
            std::vector<double> vals{grid[i], rows[i].S_site};
            for (double v : rows[i].negativities) vals.push_back(v);
            for (double v : rows[i].mutual_infos) vals.push_back(v);
            for (int lv = 0; lv < spec.n; ++lv) vals.push_back(rows[i].occ(lv));
            for (int j = 0; j < rows[i].pair4.size(); ++j)
                vals.push_back(rows[i].pair4(j));
            csv.add_row(vals);
        }
        if (en_out.empty())
            oss << csv.str();
        else
            write_file_atomic(join_out(gl, en_out), csv.str());
    });

    // project
    auto* prj = app.add_subcommand("project",
                                   "project a uniform product state onto a sector");
    std::string pr_f, pr_from_file, pr_sigma, pr_occ, pr_out;
    int pr_N = 0;
    prj->add_option("--f", pr_f, "comma list of level amplitudes");
    prj->add_option("--from-factorize", pr_from_file,
                    "take f from a factorize output JSON");
    prj->add_option("--N", pr_N, "number of sites")->required();
    prj->add_option("--sigma", pr_sigma, "parity label like +--");
    prj->add_option("--occupation", pr_occ, "occupation label like 2,1,1");
    prj->add_option("--out", pr_out, "also write the JSON result here");
    prj->callback([&]() {
        VectorXcd f;
        if (!pr_f.empty()) {
            std::vector<double> vals;
            std::stringstream ss(pr_f);
            std::string item;
            while (std::getline(ss, item, ','))
                vals.push_back(std::stod(item));
            f.resize(vals.size());
            for (size_t i = 0; i < vals.size(); ++i) f(i) = vals[i];
        } else if (!pr_from_file.empty()) {
            json j = json::parse(read_file(pr_from_file));
            auto fr = j.at("f_real").get<std::vector<double>>();
            auto fi = j.at("f_imag").get<std::vector<double>>();
            f.resize(fr.size());
            for (size_t i = 0; i < fr.size(); ++i)
                f(i) = std::complex<double>(fr[i], fi[i]);
        } else {
            throw ConfigError("project needs --f or --from-factorize");
        }
        double norm = f.norm();
        if (norm <= 0.0) throw ConfigError("f must be nonzero");
        f /= norm;
        const int n = static_cast<int>(f.size());
        if (pr_N < 2) throw ConfigError("N must be at least 2");
        if (pr_sigma.empty() == pr_occ.empty())
            throw ConfigError("project needs exactly one of --sigma, --occupation");

        ProjectedState ps;
        if (!pr_sigma.empty()) {
            if (static_cast<int>(pr_sigma.size()) != n)
                throw ConfigError("sigma length must be n");
            SectorLabel label;
            label.kind = SectorKind::parity;
            for (char c : pr_sigma) {
                if (c != '+' && c != '-')
                    throw ConfigError("sigma must be made of + and -");
                label.parity.push_back(c == '+' ? 1 : -1);
            }
            ps = parity_project(f, pr_N, label);
        } else {
            std::vector<int> occ;
            std::stringstream ss(pr_occ);
            std::string item;
            while (std::getline(ss, item, ','))
                occ.push_back(std::stoi(item));
            if (static_cast<int>(occ.size()) != n)
                throw ConfigError("occupation length must be n");
            SectorLabel want;
            want.kind = SectorKind::occupation;
            want.occupation = occ;
            bool found = false;
            for (auto& member : number_projected_family(f, pr_N))
                if (member.label == want) {
                    ps = std::move(member);
                    found = true;
                    break;
                }
            if (!found)
                throw EmptySectorError("projection onto sector " + want.str() +
                                       " is empty");
        }

        json j{{"label", ps.label.str()}, {"weight", ps.weight}};
        VectorXd occ = VectorXd::Zero(n);
        for (std::int64_t g = 0; g < ps.vector.size(); ++g)
            occ(static_cast<int>(g % n)) += std::norm(ps.vector(g));
        j["occupations"] = vec_to_json(occ);
        j["entropy_site"] = entropy(reduce(ps.vector, {0}, n, pr_N));
        for (int d = 1; d <= std::min(3, pr_N - 1); ++d)
            j["negativity_d" + std::to_string(d)] =
                negativity(reduce(ps.vector, {0, d}, n, pr_N), n);
        std::string text = j.dump(2) + "\n";
        oss << text;
        if (!pr_out.empty()) write_file_atomic(join_out(gl, pr_out), text);
    });

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "regenerate a figure dataset");
    std::string figure;
    rep->add_option("figure", figure,
                    "fig2|fig3|fig4|fig5|fig6_n3|fig6_n4|fig7")
        ->required();
    int rep_code = 0;
    rep->callback([&]() {
        if (figure == "fig2")
            rep_code = reproduce_fig2(gl, oss);
        else if (figure == "fig3")
            rep_code = reproduce_fig3(gl, oss);
        else if (figure == "fig4")
            rep_code = reproduce_fig4(gl, oss);
        else if (figure == "fig5")
            rep_code = reproduce_fig5(gl, oss);
        else if (figure == "fig6_n3")
            rep_code = reproduce_fig6(gl, oss, 3);
        else if (figure == "fig6_n4")
            rep_code = reproduce_fig6(gl, oss, 4);
        else if (figure == "fig7")
            rep_code = reproduce_fig7(gl, oss);
        else
            throw ConfigError("unknown figure id '" + figure + "'");
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, oss, ess);
        return flush(code == 0 ? 0 : 2);
    } catch (const CapError& e) {
        ess << "cap error: " << e.what() << "\n";
        return flush(3);
    } catch (const EmptySectorError& e) {
        ess << "config error: " << e.what() << "\n";
        return flush(2);
    } catch (const ConfigError& e) {
        ess << "config error: " << e.what() << "\n";
        return flush(2);
    } catch (const std::exception& e) {
        ess << "internal error: " << e.what() << "\n";
        return flush(4);
    }
    return flush(rep_code);
}

}  // namespace sunfact
