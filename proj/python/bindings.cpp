#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>
#include <sstream>

#include "hpssd/distributions.hpp"
#include "hpssd/error.hpp"
#include "hpssd/evaluation.hpp"
#include "hpssd/harness.hpp"
#include "hpssd/io.hpp"
#include "hpssd/mixing.hpp"
#include "hpssd/netgen.hpp"
#include "hpssd/recruitment.hpp"

namespace py = pybind11;
using namespace hpssd;

namespace {

std::vector<RunResult> as_runs(const py::iterable& runs) {
  std::vector<RunResult> out;
  for (const auto& r : runs) out.push_back(r.cast<RunResult>());
  return out;
}

void export_config(py::module_& m) {
  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("run_id", &RunConfig::run_id)
      .def_readwrite("master_seed", &RunConfig::master_seed)
      .def_readwrite("stream_id", &RunConfig::stream_id)
      .def_readwrite("p_D", &RunConfig::p_D)
      .def_readwrite("omega_count", &RunConfig::omega_count)
      .def_readwrite("target_mean_degree", &RunConfig::target_mean_degree)
      .def_readwrite("w", &RunConfig::w)
      .def_readwrite("gamma", &RunConfig::gamma)
      .def_readwrite("r_v", &RunConfig::r_v)
      .def("__eq__", [](const RunConfig& a, const RunConfig& b) { return a == b; })
      .def("__repr__", [](const RunConfig& c) {
        std::ostringstream s;
        s << "RunConfig(run_id=" << c.run_id << ", p_D=" << c.p_D << ", omega_count=" << c.omega_count
          << ", target_mean_degree=" << c.target_mean_degree << ", w=" << c.w << ", gamma=" << c.gamma
          << ", r_v=" << c.r_v << ")";
        return s.str();
      });

  m.def("sample_run_config", &sample_run_config, py::arg("master_seed"), py::arg("run_index"));
  m.def("within_design_ranges", &within_design_ranges);
}

void export_population(py::module_& m) {
  py::class_<Population>(m, "Population")
      .def("__len__", &Population::size)
      .def_readonly("config", &Population::config)
      .def_readonly("phi_y", &Population::phi_y)
      .def_readonly("phi_k", &Population::phi_k)
      .def_readonly("warnings", &Population::warnings)
      .def("prevalence", &Population::prevalence)
      .def("mean_degree", &Population::mean_degree)
      .def("neighbours", [](const Population& p, std::int32_t i) {
        if (i < 0 || static_cast<std::size_t>(i) >= p.size()) throw py::index_error("node id out of range");
        const auto n = p.neighbours(i);
        return std::vector<std::int32_t>(n.begin(), n.end());
      })
      .def_property_readonly("edges",
                             [](const Population& p) {
                               std::vector<std::tuple<std::int32_t, std::int32_t, std::string>> out;
                               out.reserve(p.edges.size());
                               for (const Edge& e : p.edges) out.emplace_back(e.u, e.v, to_string(e.kind));
                               return out;
                             })
      .def("column", [](const Population& p, const std::string& name) {
        std::vector<double> out;
        out.reserve(p.size());
        for (const Node& n : p.nodes) {
          if (name == "clique") out.push_back(n.clique);
          else if (name == "alpha") out.push_back(n.alpha);
          else if (name == "beta") out.push_back(n.beta);
          else if (name == "e") out.push_back(n.e);
          else if (name == "y") out.push_back(n.y);
          else if (name == "r") out.push_back(n.r);
          else if (name == "degree") out.push_back(n.degree);
          else throw py::key_error("unknown node column '" + name + "'");
        }
        return out;
      }, "Node attribute as a list: clique, alpha, beta, e, y, r or degree.");

  m.def("generate_population", &generate_population, py::arg("config"), py::arg("seed"));
  m.def("mixing_matrix", [](double gamma) { return apply_gamma(build_base_matrix(), gamma).entries(); },
        py::arg("gamma") = 1.0, "Normalized 10x10 block propensities after the gamma exponent.");
}

void export_runs(py::module_& m) {
  py::class_<ScenarioOutcome>(m, "ScenarioOutcome")
      .def_readonly("seed_estimate", &ScenarioOutcome::seed_estimate)
      .def_readonly("estimate", &ScenarioOutcome::estimate)
      .def_readonly("n", &ScenarioOutcome::n)
      .def_readonly("n0", &ScenarioOutcome::n0);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("config", &RunResult::config)
      .def_readonly("population_size", &RunResult::population_size)
      .def_readonly("edge_count", &RunResult::edge_count)
      .def_readonly("y", &RunResult::y)
      .def_readonly("phi_y", &RunResult::phi_y)
      .def_readonly("phi_k", &RunResult::phi_k)
      .def_readonly("golden_estimate", &RunResult::golden_estimate)
      .def_readonly("golden_drawn", &RunResult::golden_drawn)
      .def_readonly("golden_size", &RunResult::golden_size)
      .def("scenario", [](const RunResult& r, const std::string& name) {
        const auto s = parse_scenario(name);
        if (!s) throw py::key_error("unknown scenario '" + name + "'");
        return r.at(*s);
      })
      .def("__eq__", [](const RunResult& a, const RunResult& b) { return a == b; });

  m.def("execute_run", &execute_run, py::arg("config"), py::call_guard<py::gil_scoped_release>());

  m.def(
      "execute_sweep",
      [](std::uint64_t master_seed, std::int64_t n_runs, int parallelism, const std::filesystem::path& output_dir) {
        SweepManifest manifest;
        manifest.master_seed = master_seed;
        manifest.n_runs = n_runs;
        manifest.parallelism = parallelism;
        manifest.output_dir = output_dir;
        SweepOutcome out;
        {
          py::gil_scoped_release release;
          out = execute_sweep(manifest);
        }
        return out.results;
      },
      py::arg("master_seed"), py::arg("n_runs"), py::arg("parallelism") = 1, py::arg("output_dir"),
      "Runs a sweep into output_dir and returns the results sorted by run_id.");

  m.def("read_results", [](const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return read_results_csv(in);
  });
}

void export_evaluation(py::module_& m) {
  m.def("delta", &delta, py::arg("y"), py::arg("benchmark"), py::arg("estimate"));
  m.def("debias", &debias, py::arg("estimate"), py::arg("offset"));

  auto scenario_of = [](const std::string& name) {
    const auto s = parse_scenario(name);
    if (!s) throw py::key_error("unknown scenario '" + name + "'");
    return *s;
  };
  m.def("zeta", [=](const py::iterable& runs, const std::string& s) { return zeta(as_runs(runs), scenario_of(s)); });
  m.def("psi", [=](const py::iterable& runs, const std::string& s) { return psi(as_runs(runs), scenario_of(s)); });
  m.def("bias", [=](const py::iterable& runs, const std::string& s) {
    return bias_estimate(as_runs(runs), scenario_of(s));
  });
  m.def(
      "evaluate_json", [](const py::iterable& runs) { return report_to_json(evaluate(as_runs(runs))).dump(); },
      "Full report over a run table as a JSON string.");
}

void export_distributions(py::module_& m) {
  auto d = m.def_submodule("dist", "Samplers and probability functions.");
  d.def("yule_pmf", &dist::yule_pmf, py::arg("k"), py::arg("lam") = 3.0);
  d.def("poisson_pmf", &dist::poisson_pmf, py::arg("k"), py::arg("lam"));
  d.def(
      "sample_shifted_yule",
      [](double lambda, std::size_t n, std::uint64_t seed) {
        Rng rng{seed};
        std::vector<std::int64_t> out(n);
        for (auto& x : out) x = dist::sample_shifted_yule({lambda}, rng);
        return out;
      },
      py::arg("lam"), py::arg("n"), py::arg("seed"));
  d.def(
      "sample_poisson",
      [](double lambda, std::size_t n, std::uint64_t seed) {
        Rng rng{seed};
        std::vector<std::int64_t> out(n);
        for (auto& x : out) x = dist::sample_poisson(lambda, rng);
        return out;
      },
      py::arg("lam"), py::arg("n"), py::arg("seed"));
  d.def(
      "sample_block_level",
      [](double p_D, std::size_t n, std::uint64_t seed) {
        Rng rng{seed};
        std::vector<double> out(n);
        for (auto& x : out) x = dist::sample_block_level(p_D, rng);
        return out;
      },
      py::arg("p_D"), py::arg("n"), py::arg("seed"));
}

}  // namespace

PYBIND11_MODULE(_hpssd, m) {
  m.doc() = "Cliques-and-blocks populations and hybrid probabilistic-snowball sampling runs.";
  m.attr("__version__") = kEngineVersion;

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  export_config(m);
  export_population(m);
  export_runs(m);
  export_evaluation(m);
  export_distributions(m);
}
