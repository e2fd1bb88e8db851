#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mmdrl/bellman.hpp"
#include "mmdrl/errors.hpp"
#include "mmdrl/experiments.hpp"
#include "mmdrl/herding.hpp"
#include "mmdrl/learners.hpp"
#include "mmdrl/mmd.hpp"

namespace py = pybind11;
using namespace mmdrl;

namespace {

DiscreteMeasure make_measure(std::vector<double> atoms, std::optional<std::vector<double>> weights) {
  if (!weights) return DiscreteMeasure::uniform(atoms);
  return DiscreteMeasure(std::move(atoms), std::move(*weights));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distributional RL with maximum mean discrepancy (C++ core)";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_ArithmeticError);

  py::class_<Kernel>(m, "Kernel")
      .def_static("parse", &Kernel::parse, py::arg("spec"))
      .def_static("gaussian", &Kernel::gaussian, py::arg("bandwidth"))
      .def_static("gaussian_mixture", &Kernel::gaussian_mixture, py::arg("bandwidths"))
      .def_static("unrectified", &Kernel::unrectified, py::arg("alpha"))
      .def_static("unrectified_mixture", &Kernel::unrectified_mixture, py::arg("alphas"), py::arg("coefficients"))
      .def_static("exp_prod", &Kernel::exp_prod, py::arg("sigma_sq"))
      .def_static("tabular_default", &Kernel::tabular_default)
      .def("__call__", &Kernel::operator(), py::arg("x"), py::arg("y"))
      .def("grad_x", &Kernel::grad_x, py::arg("x"), py::arg("y"))
      .def("__repr__", [](const Kernel& k) { return "Kernel('" + k.to_string() + "')"; })
      .def("__str__", &Kernel::to_string);

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def(py::init(&make_measure), py::arg("atoms"), py::arg("weights") = py::none())
      .def_static("dirac", &DiscreteMeasure::dirac, py::arg("z"))
      .def_property_readonly("atoms", [](const DiscreteMeasure& d) {
        return std::vector<double>(d.atoms().begin(), d.atoms().end());
      })
      .def_property_readonly("weights", [](const DiscreteMeasure& d) {
        return std::vector<double>(d.weights().begin(), d.weights().end());
      })
      .def("mean", &DiscreteMeasure::mean)
      .def("moment", [](const DiscreteMeasure& d, int order, bool central) { return moment(d, order, central); },
           py::arg("order"), py::arg("central") = false)
      .def("__len__", &DiscreteMeasure::size)
      .def(py::self == py::self);

  m.def("pushforward_affine", &pushforward_affine, py::arg("measure"), py::arg("reward"), py::arg("gamma"));
  m.def("mixture",
        [](const std::vector<DiscreteMeasure>& ms, const std::vector<double>& p) { return mixture(ms, p); },
        py::arg("measures"), py::arg("probs"));
  m.def("mmd_squared", &mmd_squared, py::arg("p"), py::arg("q"), py::arg("kernel"));
  m.def("mmd", &mmd, py::arg("p"), py::arg("q"), py::arg("kernel"));
  m.def("mmd_b_squared",
        [](std::vector<double> z, std::vector<double> w, const Kernel& k) {
          return mmd_b_squared(ParticleSet(std::move(z)), ParticleSet(std::move(w)), k);
        },
        py::arg("z"), py::arg("w"), py::arg("kernel"));
  m.def("mmd_b_grad",
        [](std::vector<double> z, std::vector<double> w, const Kernel& k) {
          return mmd_b_grad(ParticleSet(std::move(z)), ParticleSet(std::move(w)), k);
        },
        py::arg("z"), py::arg("targets"), py::arg("kernel"));
  m.def("gaussian_moment_series", &gaussian_moment_series, py::arg("p"), py::arg("q"), py::arg("sigma"),
        py::arg("max_order"));

  m.def("chain_expected_return",
        [](int length, double gamma) {
          const auto mdp = build_chain(length, gamma);
          return expected_returns(mdp, Policy::constant(length, 2, kForward)).at(0, kForward);
        },
        py::arg("length"), py::arg("gamma") = 0.9);
  m.def("counterexample_reward_probs", &counterexample_reward_probs, py::arg("n"), py::arg("gamma"),
        py::arg("alpha"));

  // Learned particles at (start state, forward) after policy evaluation on the chain.
  m.def("evaluate_chain",
        [](int length, const std::string& learner, std::uint64_t seed, std::optional<std::string> kernel,
           int num_iters) {
          LearnerConfig cfg;
          cfg.seed = seed;
          cfg.num_iters = num_iters;
          if (kernel) cfg.kernel = Kernel::parse(*kernel);
          LearnerKind kind;
          if (learner == "mmdrl") {
            kind = LearnerKind::kMmdrl;
          } else if (learner == "qrdrl") {
            kind = LearnerKind::kQrdrl;
          } else {
            throw DomainError("learner must be 'mmdrl' or 'qrdrl'");
          }
          const auto mdp = build_chain(length);
          py::gil_scoped_release release;
          const auto theta = run_policy_evaluation(mdp, Policy::constant(length, 2, kForward), kind, cfg);
          const auto p = theta.at(0, kForward).particles();
          return std::vector<double>(p.begin(), p.end());
        },
        py::arg("length"), py::arg("learner") = "mmdrl", py::arg("seed") = 0, py::arg("kernel") = py::none(),
        py::arg("num_iters") = 15);

  m.def("discretized_gaussian", &discretized_gaussian, py::arg("n"), py::arg("mean") = 0.0, py::arg("sd") = 1.0);
  m.def("greedy_herd",
        [](const DiscreteMeasure& target, int n, const Kernel& k, const std::vector<double>& grid) {
          const auto r = greedy_herd(target, n, k, grid);
          const auto p = r.particles.particles();
          return py::make_tuple(std::vector<double>(p.begin(), p.end()), r.mmd);
        },
        py::arg("target"), py::arg("n"), py::arg("kernel"), py::arg("grid"));

  // Runs one experiment kind from a JSON config string; returns (passed, summary).
  m.def("run_experiment",
        [](const std::string& kind, const std::string& config_json) {
          const auto cfg = experiments::ExperimentConfig::from_json(nlohmann::json::parse(config_json));
          std::ostringstream log;
          bool pass = false;
          {
            py::gil_scoped_release release;
            pass = experiments::run_and_write(kind, cfg, log);
          }
          return py::make_tuple(pass, log.str());
        },
        py::arg("kind"), py::arg("config_json"));
}
