#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "blocksplit/bounds.hpp"
#include "blocksplit/cli.hpp"
#include "blocksplit/errors.hpp"
#include "blocksplit/simulate.hpp"
#include "blocksplit/spectral.hpp"
#include "blocksplit/strategies.hpp"
#include "blocksplit/verify.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
namespace bs = blocksplit;

namespace {

bs::SeedingMode seeding_mode(const std::string& name) {
    if (name == "empty") return bs::SeedingMode::empty_with_dummy;
    if (name == "paper") return bs::SeedingMode::paper_seed;
    throw bs::ParameterError("seeding must be 'empty' or 'paper', got '" + name + "'");
}

py::dict summary_dict(const bs::FullnessSummary& s) {
    py::dict d;
    d["batch_size"] = s.batch_size;
    d["mean_fullness"] = s.mean_fullness;
    d["min_fullness"] = s.min_fullness;
    d["max_fullness"] = s.max_fullness;
    d["per_run"] = s.per_run_final_fullness;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Block splitting strategies under batched random insertions";

    py::register_exception<bs::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<bs::ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<bs::OutOfRangeError>(m, "OutOfRangeError", PyExc_ValueError);
    py::register_exception<bs::ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<bs::IoError>(m, "IoError", PyExc_OSError);

    m.def("even_split_outcome",
          [](int k, int b, int r) { return bs::even_split_outcome(k, bs::SplitParams(b, r)).sizes; },
          py::arg("k"), py::arg("block_size"), py::arg("batch_size"));
    m.def("deferred_even_outcome",
          [](int l, int b, int r) { return bs::deferred_even_outcome(l, bs::SplitParams(b, r)).sizes; },
          py::arg("l"), py::arg("block_size"), py::arg("batch_size"));
    m.def("recommended_strategy",
          [](int b, int r) {
              return std::string(bs::to_string(bs::recommended_strategy(bs::SplitParams(b, r))));
          },
          py::arg("block_size"), py::arg("batch_size"));

    m.def("harmonic", &bs::harmonic, py::arg("k"));
    m.def("table_bound",
          [](int b, int r) {
              const auto res = bs::table_bound(b, r);
              return py::make_tuple(res.row, res.fill, res.formula);
          },
          py::arg("block_size"), py::arg("batch_size"),
          "(row, fill, formula) of the fill table row covering r/B.");
    m.def("deferred_closed_form",
          [](int b, int r) {
              const auto res = bs::deferred_closed_form(b, r);
              return py::make_tuple(res.i, res.fill, res.distribution);
          },
          py::arg("block_size"), py::arg("batch_size"));

    m.def("predicted_fullness",
          [](int b, int r) { return bs::solve_spectral(bs::SplitParams(b, r)).predicted_fullness; },
          py::arg("block_size"), py::arg("batch_size"));
    m.def("principal_eigenvector",
          [](int b, int r) {
              const auto sol = bs::solve_spectral(bs::SplitParams(b, r));
              return py::make_tuple(sol.sizes, sol.u);
          },
          py::arg("block_size"), py::arg("batch_size"), "(sizes, u) on the support set.");
    m.def("transition_matrix",
          [](int b, int r) {
              const auto a = bs::build_matrix(bs::SplitParams(b, r));
              std::vector<std::vector<std::int64_t>> rows(a.dim());
              for (std::size_t i = 0; i < a.dim(); ++i) {
                  rows[i].assign(a.entries.begin() + static_cast<long>(i * a.dim()),
                                 a.entries.begin() + static_cast<long>((i + 1) * a.dim()));
              }
              return py::make_tuple(a.sizes, rows);
          },
          py::arg("block_size"), py::arg("batch_size"));

    m.def("simulate",
          [](const std::string& strategy, int b, int r, std::int64_t insertions, int runs,
             std::uint64_t seed, const std::string& seeding, int threads) {
              bs::RunConfig cfg;
              cfg.strategy = bs::parse_strategy(strategy);
              cfg.params = bs::SplitParams(b, r);
              cfg.total_insertions = insertions;
              cfg.runs = runs;
              cfg.base_seed = seed;
              cfg.seeding = seeding_mode(seeding);
              cfg.threads = threads;
              bs::FullnessSummary s;
              {
                  py::gil_scoped_release release;
                  s = bs::run_monte_carlo(cfg);
              }
              s.batch_size = r;
              return summary_dict(s);
          },
          py::arg("strategy"), py::arg("block_size"), py::arg("batch_size"),
          py::arg("insertions") = 200000, py::arg("runs") = 10, py::arg("seed") = 1,
          py::arg("seeding") = "empty", py::arg("threads") = 0);

    m.def("expected_fullness",
          [](int b, int r, std::int64_t steps) {
              return bs::run_expected_recurrence(bs::SplitParams(b, r), steps).fullness;
          },
          py::arg("block_size"), py::arg("batch_size"), py::arg("steps"),
          "Fullness of the expected-value recurrence after the given number of batches.");

    m.def("analyze_csv",
          [](int b, const std::vector<int>& r_values) { return bs::cmd_analyze(b, r_values, "-"); },
          py::arg("block_size"), py::arg("batch_sizes"));

    m.def("verify_quick",
          []() {
              std::ostringstream out;
              const int code = bs::cmd_verify(bs::VerifyLevel::quick, out);
              return py::make_tuple(code == 0, out.str());
          },
          "(passed, report) of the quick verification level.");

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
