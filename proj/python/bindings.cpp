#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "perpconj/app.hpp"
#include "perpconj/critical_points.hpp"
#include "perpconj/error.hpp"
#include "perpconj/spectra.hpp"

namespace py = pybind11;
using namespace perpconj;

namespace {

app::Input input(const std::string& text, const std::string& name) { return app::Input{name, text}; }

SolverConfig solver(std::size_t seeds, std::uint64_t rng_seed, double eps_v, double root_tol) {
    SolverConfig cfg;
    cfg.seed_count = seeds;
    cfg.rng_seed = rng_seed;
    cfg.velocity_floor = eps_v;
    cfg.root_tol = root_tol;
    cfg.validate();
    return cfg;
}

std::optional<AnalysisRegion> region_of(const std::optional<std::string>& text) {
    if (!text) return std::nullopt;
    return app::parse_region(*text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fixed points, perpetual points and conjugacy checks for polynomial-style vector fields";
    m.attr("__version__") = std::string(app::kToolVersion);

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<SyntaxError>(m, "SyntaxError", base.ptr());
    py::register_exception<UnknownIdentifier>(m, "UnknownIdentifier", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<InverseMismatch>(m, "InverseMismatch", base.ptr());
    py::register_exception<NoConvergence>(m, "NoConvergence", base.ptr());

    const SolverConfig d;

    m.def(
        "analyze",
        [](const std::string& system, const std::string& name, std::optional<std::string> region, std::size_t seeds,
           std::uint64_t rng_seed, double eps_v, double root_tol, const std::string& format) {
            app::AnalyzeOptions opts;
            opts.solver = solver(seeds, rng_seed, eps_v, root_tol);
            opts.region = region_of(region);
            opts.format = app::parse_format(format);
            return app::analyze_command(input(system, name), opts);
        },
        py::arg("system"), py::arg("name") = "<system>", py::arg("region") = py::none(),
        py::arg("seeds") = d.seed_count, py::arg("rng_seed") = d.rng_seed, py::arg("eps_v") = d.velocity_floor,
        py::arg("root_tol") = d.root_tol, py::arg("format") = "json",
        "Analyze a system given as system-file JSON text; returns the report text.");

    m.def(
        "transform",
        [](const std::string& system, const std::string& map, std::optional<std::string> region, std::size_t seeds,
           std::uint64_t rng_seed, double eps_v, double root_tol, const std::string& format) {
            app::AnalyzeOptions opts;
            opts.solver = solver(seeds, rng_seed, eps_v, root_tol);
            opts.region = region_of(region);
            opts.format = app::parse_format(format);
            const auto out = app::transform_command(input(system, "<system>"), input(map, "<map>"), opts);
            return py::make_tuple(out.report, out.system_file);
        },
        py::arg("system"), py::arg("map"), py::arg("region") = py::none(), py::arg("seeds") = d.seed_count,
        py::arg("rng_seed") = d.rng_seed, py::arg("eps_v") = d.velocity_floor, py::arg("root_tol") = d.root_tol,
        py::arg("format") = "json", "Returns (report, transformed system file text).");

    m.def(
        "verify",
        [](const std::string& system, const std::string& map, std::optional<std::string> against,
           std::optional<std::string> region, const std::string& theorems, double T, double tol, std::size_t seeds,
           std::uint64_t rng_seed, double eps_v, double root_tol, const std::string& format) {
            app::VerifyOptions opts;
            opts.verify.solver = solver(seeds, rng_seed, eps_v, root_tol);
            opts.verify.flow_time = T;
            opts.verify.flow_tol = tol;
            opts.verify.validate();
            opts.region = region_of(region);
            opts.theorems = parse_theorem_list(theorems);
            opts.format = app::parse_format(format);
            std::optional<app::Input> target;
            if (against) target = input(*against, "<against>");
            const auto out = app::verify_command(input(system, "<system>"), input(map, "<map>"), target, opts);
            return py::make_tuple(out.report, out.passed);
        },
        py::arg("system"), py::arg("map"), py::arg("against") = py::none(), py::arg("region") = py::none(),
        py::arg("theorems") = "flow,t1,t2,t3,r1", py::arg("T") = 1.0, py::arg("tol") = 1e-6,
        py::arg("seeds") = d.seed_count, py::arg("rng_seed") = d.rng_seed, py::arg("eps_v") = d.velocity_floor,
        py::arg("root_tol") = d.root_tol, py::arg("format") = "json", "Returns (report, passed).");

    m.def(
        "portrait",
        [](const std::string& system, std::optional<std::string> region, std::vector<std::size_t> grid,
           std::vector<std::vector<double>> starts, std::size_t trajectories, double T, std::size_t samples,
           std::uint64_t rng_seed) {
            app::PortraitOptions opts;
            opts.region = region_of(region);
            opts.grid = std::move(grid);
            opts.starts = std::move(starts);
            opts.trajectories = trajectories;
            opts.t_end = T;
            opts.samples = samples;
            opts.rng_seed = rng_seed;
            auto out = app::portrait_command(input(system, "<system>"), opts);
            return py::make_tuple(out.grid_csv, out.trajectory_csv);
        },
        py::arg("system"), py::arg("region") = py::none(), py::arg("grid") = std::vector<std::size_t>{},
        py::arg("starts") = std::vector<std::vector<double>>{}, py::arg("trajectories") = 0, py::arg("T") = 10.0,
        py::arg("samples") = 201, py::arg("rng_seed") = 1, "Returns (grid CSV, [trajectory CSV, ...]).");

    m.def(
        "eigenvalues",
        [](const std::vector<std::vector<double>>& rows) {
            const std::size_t n = rows.size();
            std::vector<double> flat;
            for (const auto& r : rows) {
                if (r.size() != n) throw ValidationError("matrix must be square");
                flat.insert(flat.end(), r.begin(), r.end());
            }
            return eigenvalues(SquareMatrix(n, std::move(flat))).values;
        },
        py::arg("matrix"), "Eigenvalues of a square matrix, sorted by (real, imag).");

    m.def(
        "parse_region",
        [](const std::string& text) {
            std::vector<std::pair<double, double>> out;
            for (const auto& b : app::parse_region(text).bounds) out.emplace_back(b.lo, b.hi);
            return out;
        },
        py::arg("text"));
}
