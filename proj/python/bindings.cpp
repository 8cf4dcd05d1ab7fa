// Copyright 2026 The iqpnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "iqpnoise/acceptance.hpp"
#include "iqpnoise/circuit.hpp"
#include "iqpnoise/encoding.hpp"
#include "iqpnoise/error.hpp"
#include "iqpnoise/experiment.hpp"
#include "iqpnoise/fourier_mc.hpp"
#include "iqpnoise/metrics.hpp"
#include "iqpnoise/oracle.hpp"
#include "iqpnoise/sampler.hpp"

namespace py = pybind11;
using namespace iqpnoise;

namespace {

VariantLabel label_for(const ChaoticCircuit& c, const std::string& text) {
  return text.empty() ? VariantLabel::zeros(c.m()) : VariantLabel::parse(text);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Noisy IQP simulation core";

  static py::exception<Error> error_type(mod, "IqpnoiseError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, e.what());
    }
  });

  py::class_<ChaoticCircuit>(mod, "Circuit")
      .def_property_readonly("n", &ChaoticCircuit::n)
      .def_property_readonly("m", &ChaoticCircuit::m)
      .def("to_json", &circuit_to_json)
      .def_static("from_json", &circuit_from_json)
      .def("variant",
           [](const ChaoticCircuit& c, const std::string& label) {
             return apply_variant(c, VariantLabel::parse(label));
           })
      .def("__eq__", [](const ChaoticCircuit& a, const ChaoticCircuit& b) {
        return a == b;
      });

  mod.def(
      "generate_circuit",
      [](int n, int depth, std::uint64_t seed) {
        return generate_random_circuit({n, depth, seed});
      },
      py::arg("n"), py::arg("depth"), py::arg("seed") = 0);

  py::class_<IqpEncoding>(mod, "Encoding")
      .def_readonly("n", &IqpEncoding::n)
      .def_readonly("m", &IqpEncoding::m)
      .def_property_readonly("width", &IqpEncoding::width)
      .def_readonly("output_wires", &IqpEncoding::output_wires)
      .def_readonly("ancilla_order", &IqpEncoding::ancilla_order)
      .def("to_json", &encoding_to_json)
      .def_static("from_json", &encoding_from_json)
      .def("f", [](const IqpEncoding& e, const std::string& z) {
        return eval_f(e, std::string_view(z));
      });

  mod.def("encode", &encode);

  mod.def(
      "statevector_probs",
      [](const ChaoticCircuit& c, const std::string& variant) {
        return statevector_probs(c, label_for(c, variant)).values;
      },
      py::arg("circuit"), py::arg("variant") = "");
  mod.def("full_iqp_distribution", [](const IqpEncoding& e) {
    return full_iqp_distribution(e).values;
  });
  mod.def("noisy_distribution_exact", [](const IqpEncoding& e, double eps) {
    return noisy_distribution_exact(e, eps).values;
  });
  mod.def(
      "noisy_channel_distribution",
      [](const ChaoticCircuit& c, const std::string& variant, double eps,
         std::uint64_t trajectories, std::uint64_t seed) {
        return noisy_channel_distribution(c, label_for(c, variant), eps,
                                          {trajectories, seed})
            .values;
      },
      py::arg("circuit"), py::arg("variant") = "", py::arg("epsilon") = 0.0,
      py::arg("trajectories") = 0, py::arg("seed") = 0);
  mod.def("full_spectrum", [](std::vector<double> values, int n, int m) {
    ProbDist d{n, m, DistKind::SignedPseudo, std::move(values)};
    return full_spectrum(d).coefficients;
  });

  py::class_<TruncationParams>(mod, "TruncationParams")
      .def(py::init<>())
      .def_readwrite("delta", &TruncationParams::delta)
      .def_readwrite("epsilon", &TruncationParams::epsilon)
      .def_readwrite("alpha_chaos", &TruncationParams::alpha_chaos)
      .def_readwrite("L", &TruncationParams::L)
      .def_readwrite("eta", &TruncationParams::eta)
      .def_readwrite("t_run", &TruncationParams::t_run)
      .def_readwrite("seed", &TruncationParams::seed)
      .def_property(
          "exhaustive",
          [](const TruncationParams& p) {
            return p.mode == EstimatorMode::Exhaustive;
          },
          [](TruncationParams& p, bool on) {
            p.mode = on ? EstimatorMode::Exhaustive : EstimatorMode::Sampled;
          });

  mod.def("choose_params", &choose_params, py::arg("delta"),
          py::arg("epsilon"), py::arg("alpha_chaos"), py::arg("n"),
          py::arg("m"), py::arg("safety") = 1.0, py::arg("seed") = 0);
  mod.def("truncated_entry_count", &truncated_entry_count);
  mod.def("estimate_coefficient", &estimate_coefficient, py::arg("encoding"),
          py::arg("s"), py::arg("s_prime"), py::arg("trials"),
          py::arg("seed"), py::arg("stream_index") = 0);
  mod.def("exact_coefficient", &exact_coefficient);

  py::class_<TruncatedSpectrum>(mod, "Spectrum")
      .def_property_readonly("n", &TruncatedSpectrum::n)
      .def_property_readonly("m", &TruncatedSpectrum::m)
      .def_property_readonly("params", &TruncatedSpectrum::params)
      .def_property_readonly("masks", &TruncatedSpectrum::masks)
      .def_property_readonly("values", &TruncatedSpectrum::values)
      .def("__len__", &TruncatedSpectrum::size)
      .def("at", &TruncatedSpectrum::at)
      .def("to_json", &spectrum_to_json)
      .def_static("from_json", &spectrum_from_json)
      .def("p_cl", [](const TruncatedSpectrum& s, Bits x, Bits xp) {
        return p_cl_conditional(s, x, xp);
      })
      .def("__eq__", [](const TruncatedSpectrum& a,
                        const TruncatedSpectrum& b) { return a == b; });

  mod.def(
      "build_truncated_spectrum",
      [](const IqpEncoding& e, const TruncationParams& p, unsigned workers) {
        BuildOptions opts;
        opts.workers = workers;
        return build_truncated_spectrum(e, p, opts);
      },
      py::arg("encoding"), py::arg("params"), py::arg("workers") = 1);

  mod.def(
      "sample",
      [](const TruncatedSpectrum& s, const std::string& variant,
         std::uint64_t count, std::uint64_t seed, unsigned workers) {
        const VariantLabel label = variant.empty()
                                       ? VariantLabel::zeros(s.m())
                                       : VariantLabel::parse(variant);
        return sample(s, label, count, seed, workers).samples;
      },
      py::arg("spectrum"), py::arg("variant") = "", py::arg("count") = 1000,
      py::arg("seed") = 0, py::arg("workers") = 1);
  mod.def(
      "walk_distribution",
      [](const TruncatedSpectrum& s, const std::string& variant) {
        const VariantLabel label = variant.empty()
                                       ? VariantLabel::zeros(s.m())
                                       : VariantLabel::parse(variant);
        return walk_distribution_analytic(s, label).values;
      },
      py::arg("spectrum"), py::arg("variant") = "");
  mod.def("walk_distribution_signed",
          [](const std::vector<double>& p, int n) {
            return walk_distribution_analytic(p, n).values;
          });

  mod.def("l1_distance", [](const std::vector<double>& p,
                            const std::vector<double>& q) {
    return l1_distance(p, q);
  });
  mod.def("cross_entropy", [](const std::vector<double>& p,
                              const std::vector<double>& q) {
    return cross_entropy(p, q);
  });
  mod.def("e_delta_bound", &e_delta_bound);
  mod.def("chebyshev_tail", &chebyshev_tail);
  mod.def("sampler_bound", &sampler_bound);
  mod.def("porter_thomas_ks", [](const std::vector<double>& p) {
    return porter_thomas_ks(p);
  });
  mod.def(
      "euler_integrals",
      [](int points, double N) {
        const EulerIntegrals e = euler_integral_suite(points, N);
        py::dict d;
        d["gamma"] = e.gamma;
        d["gamma2_pi2"] = e.gamma2_pi2;
        d["residual"] = e.residual;
        d["i3_closed_form"] = e.i3_closed_form;
        return d;
      },
      py::arg("points") = 4001, py::arg("N") = 256.0);

  mod.def("preset_names", &preset_names);
  mod.def("preset_config_json", [](const std::string& name) {
    return config_to_json(preset_config(name));
  });
  mod.def(
      "run_experiment_json",
      [](const std::string& config_json) {
        const ExperimentConfig c = config_from_json(config_json);
        py::gil_scoped_release release;
        return result_to_json(run_experiment(c));
      },
      py::arg("config_json"));
  mod.def(
      "run_criterion",
      [](int id) {
        CriterionResult r;
        {
          py::gil_scoped_release release;
          r = run_criterion(id);
        }
        return py::make_tuple(r.pass, format_criterion(r));
      },
      py::arg("id"));
}
