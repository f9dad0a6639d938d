#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sunfact/cli.hpp"
#include "sunfact/entanglement.hpp"
#include "sunfact/factorization.hpp"
#include "sunfact/families.hpp"
#include "sunfact/hamiltonian.hpp"
#include "sunfact/meanfield.hpp"
#include "sunfact/model.hpp"
#include "sunfact/projection.hpp"
#include "sunfact/spectra.hpp"

namespace py = pybind11;
using namespace sunfact;

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

PYBIND11_MODULE(_core, m) {
    m.doc() = "ground-state factorization toolkit for n-level lattice models";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<CapError>(m, "CapError");
    py::register_exception<EmptySectorError>(m, "EmptySectorError");
    py::register_exception<InternalError>(m, "InternalError");

    py::enum_<GraphKind>(m, "GraphKind")
        .value("ring", GraphKind::ring_first_neighbor)
        .value("open_chain", GraphKind::open_chain)
        .value("all_to_all", GraphKind::all_to_all)
        .value("custom", GraphKind::custom);

    py::enum_<SectorKind>(m, "SectorKind")
        .value("parity", SectorKind::parity)
        .value("occupation", SectorKind::occupation);

    py::class_<CouplingGraph>(m, "CouplingGraph")
        .def_readonly("N", &CouplingGraph::N)
        .def_readonly("r", &CouplingGraph::r)
        .def_readonly("r_row", &CouplingGraph::r_row)
        .def_readonly("r_total", &CouplingGraph::r_total)
        .def("bipartite",
             [](const CouplingGraph& g) { return g.bipartite(nullptr); });
    m.def("make_graph", &make_graph, py::arg("kind"), py::arg("N"),
          py::arg("custom") = std::nullopt);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def_readwrite("n", &ModelSpec::n)
        .def_readwrite("N", &ModelSpec::N)
        .def_readwrite("epsilon", &ModelSpec::epsilon)
        .def_readwrite("U", &ModelSpec::U)
        .def_readwrite("V", &ModelSpec::V)
        .def_readwrite("W", &ModelSpec::W)
        .def_readwrite("graph", &ModelSpec::graph)
        .def_readwrite("edge_scaling", &ModelSpec::edge_scaling)
        .def("dim", &ModelSpec::dim)
        .def("validate", &ModelSpec::validate);
    m.def("make_spec", &make_spec, py::arg("n"), py::arg("N"),
          py::arg("epsilon"), py::arg("U"), py::arg("V"), py::arg("W"),
          py::arg("graph"), py::arg("edge_scaling") = false);
    m.def("parse_spec_json", &parse_spec_json);
    m.def("load_spec_json", &load_spec_json);
    m.def("spec_to_json", &spec_to_json);

    py::class_<SectorLabel>(m, "SectorLabel")
        .def(py::init<>())
        .def_readwrite("kind", &SectorLabel::kind)
        .def_readwrite("parity", &SectorLabel::parity)
        .def_readwrite("occupation", &SectorLabel::occupation)
        .def("__eq__", &SectorLabel::operator==)
        .def("__str__", &SectorLabel::str);

    py::class_<HamiltonianMatrix>(m, "HamiltonianMatrix")
        .def_readonly("dim", &HamiltonianMatrix::dim)
        .def_readonly("data", &HamiltonianMatrix::data)
        .def_readonly("sector", &HamiltonianMatrix::sector)
        .def_readonly("basis_map", &HamiltonianMatrix::basis_map);
    m.def("build_full", &build_full, py::arg("spec"),
          py::arg("cap") = kDefaultDimCap);
    m.def("build_sector", &build_sector, py::arg("spec"), py::arg("sector"),
          py::arg("cap") = kDefaultDimCap);
    m.def("alternating_gauge", &alternating_gauge);

    py::class_<FactorizationSolution>(m, "FactorizationSolution")
        .def_readonly("E2", &FactorizationSolution::E2)
        .def_readonly("f_squared", &FactorizationSolution::f_squared)
        .def_readonly("f", &FactorizationSolution::f)
        .def_readonly("T_required", &FactorizationSolution::T_required)
        .def_readonly("is_gs", &FactorizationSolution::is_gs)
        .def_readonly("sufficiency", &FactorizationSolution::sufficiency)
        .def_readonly("continuous_set", &FactorizationSolution::continuous_set)
        .def_readonly("degeneracy", &FactorizationSolution::degeneracy)
        .def_readonly("total_energy", &FactorizationSolution::total_energy);
    m.def("solve_uniform",
          py::overload_cast<const ModelSpec&>(&solve_uniform));
    m.def("solve_uniform_raw",
          py::overload_cast<const VectorXd&, const VectorXd&, const MatrixXd&,
                            int, double>(&solve_uniform),
          py::arg("epsilon"), py::arg("U_diag"), py::arg("V"), py::arg("N"),
          py::arg("r_total") = std::numeric_limits<double>::quiet_NaN());
    m.def("check_gs_conditions", &check_gs_conditions);
    m.def("solve_onsite_energies_n3", &solve_onsite_energies_n3);
    m.def("factorization_v0", &factorization_v0);
    m.def("xyz_factorizing_field", &xyz_factorizing_field);
    m.def("degeneracy_count", &degeneracy_count);
    m.def("product_state",
          py::overload_cast<const VectorXcd&, int>(&product_state));
    m.def("verify_eigenstate", &verify_eigenstate);
    m.def("parity_flip_family", &parity_flip_family);

    py::class_<MeanFieldSolution>(m, "MeanFieldSolution")
        .def_readonly("f_squared", &MeanFieldSolution::f_squared)
        .def_readonly("occupied", &MeanFieldSolution::occupied)
        .def_readonly("energy", &MeanFieldSolution::energy)
        .def_readonly("lambda_", &MeanFieldSolution::lambda)
        .def_readonly("warning_attractive",
                      &MeanFieldSolution::warning_attractive)
        .def_readonly("used_fallback", &MeanFieldSolution::used_fallback);
    m.def("mf_solve", &mf_solve);
    m.def("mf_energy", &mf_energy);
    m.def("mf_minimize_bruteforce", &mf_minimize_bruteforce, py::arg("spec"),
          py::arg("random_restarts") = 16, py::arg("seed") = 12345);

    py::class_<SpectrumResult>(m, "SpectrumResult")
        .def_readonly("eigenvalues", &SpectrumResult::eigenvalues)
        .def_readonly("sectors", &SpectrumResult::sectors)
        .def_readonly("eigenvectors", &SpectrumResult::eigenvectors)
        .def_readonly("gap", &SpectrumResult::gap)
        .def_readonly("gs_band", &SpectrumResult::gs_band);
    m.def("eigensolve", &eigensolve, py::arg("H"),
          py::arg("want_vectors") = false, py::arg("k") = std::nullopt);
    m.def("sector_spectrum", &sector_spectrum, py::arg("spec"),
          py::arg("kind"), py::arg("want_vectors") = false,
          py::arg("cap") = kDefaultDimCap);

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def_readonly("sites", &DensityMatrix::sites)
        .def_readonly("dim", &DensityMatrix::dim)
        .def_readonly("data", &DensityMatrix::data)
        .def_readonly("eigenvalues", &DensityMatrix::eigenvalues);
    m.def("reduce", &reduce);
    m.def("entropy", &entropy);
    m.def("negativity", &negativity);
    m.def("mutual_information", &mutual_information);
    m.def("site_occupations", &site_occupations);
    m.def("pair_spectrum", &pair_spectrum);

    py::class_<ProjectedState>(m, "ProjectedState")
        .def_readonly("vector", &ProjectedState::vector)
        .def_readonly("label", &ProjectedState::label)
        .def_readonly("source_f", &ProjectedState::source_f)
        .def_readonly("weight", &ProjectedState::weight);
    m.def("parity_project", &parity_project);
    m.def("projected_occupations_n3", &projected_occupations_n3);
    m.def("projected_occupations", &projected_occupations);
    m.def("symmetric_state", &symmetric_state);
    m.def("perturbative_splitting", &perturbative_splitting);
    m.def("number_projected_family", &number_projected_family);

    m.def("band_vw_spec", &band_vw_spec, py::arg("t"), py::arg("N"),
          py::arg("graph") = GraphKind::ring_first_neighbor);
    m.def("band_vw_E2c", &band_vw_E2c);
    m.def("band_w_spec", &band_w_spec, py::arg("t"), py::arg("n"),
          py::arg("N"), py::arg("graph") = GraphKind::ring_first_neighbor);
    m.def("heisenberg_eps_spec", &heisenberg_eps_spec, py::arg("t"),
          py::arg("N") = 4, py::arg("graph") = GraphKind::ring_first_neighbor);

    m.def("cli_run", [](const std::vector<std::string>& args) {
        std::string out, err;
        int code = cli_run(args, &out, &err);
        return py::make_tuple(code, out, err);
    });

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
