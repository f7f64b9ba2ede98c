#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dvcv/demodulation.hpp"
#include "dvcv/displaced.hpp"
#include "dvcv/errors.hpp"
#include "dvcv/optics.hpp"
#include "dvcv/protocol.hpp"

namespace py = pybind11;
using namespace dvcv;

namespace {

py::dict demod_dict(const DemodResult& r) {
  py::dict d;
  d["success"] = r.success;
  d["method"] = to_string(r.method);
  d["restored"] = py::make_tuple(r.restored.c0, r.restored.c1);
  d["sign"] = r.sign;
  d["success_probability"] = r.success_probability;
  d["simulated_probability"] = r.simulated_probability;
  d["gamma"] = r.gamma;
  d["residual_factor"] = r.residual_factor;
  return d;
}

PolicyKind parse_policy(const std::string& name) {
  if (name == "best_of") return PolicyKind::best_of;
  if (name == "swap_only") return PolicyKind::swap_only;
  if (name == "displacement_only") return PolicyKind::displacement_only;
  if (name == "skip_all") return PolicyKind::skip_all;
  throw InvalidArgumentError("unknown policy " + name);
}

}  // namespace

PYBIND11_MODULE(_dvcv, m) {
  m.doc() = "Hybrid discrete/continuous-variable teleportation simulator";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<TailMassError>(m, "TailMassError", base.ptr());
  py::register_exception<SingularFactorError>(m, "SingularFactorError", base.ptr());
  py::register_exception<InvalidArgumentError>(m, "InvalidArgumentError", PyExc_ValueError);

  m.def("matrix_element", &matrix_element, py::arg("l"), py::arg("n"), py::arg("alpha"));
  m.def("amp_factor_dual", &amp_factor_dual, py::arg("l"), py::arg("k"), py::arg("n"),
        py::arg("m"), py::arg("alpha"), py::arg("alpha1"));
  m.def("amp_factor_single", &amp_factor_single, py::arg("l"), py::arg("k"), py::arg("n"),
        py::arg("alpha"));
  m.def("direct_success_probability", &direct_success_probability, py::arg("l"), py::arg("k"),
        py::arg("alpha"), py::arg("cutoff") = -1);
  m.def("am_probability", &am_probability, py::arg("l"), py::arg("k"), py::arg("alpha"),
        py::arg("cutoff") = -1);
  m.def("pair_sum_probability", &pair_sum_probability, py::arg("l"), py::arg("k"), py::arg("n"),
        py::arg("m"), py::arg("alpha"));
  m.def(
      "maximize_direct_success",
      [](int l, int k, double lo, double hi) {
        const auto r = maximize_direct_success(l, k, lo, hi);
        return py::make_tuple(r.alpha, r.value);
      },
      py::arg("l"), py::arg("k"), py::arg("lo") = 0.05, py::arg("hi") = 1.5,
      "Returns (alpha, value) of the largest direct success probability.");
  m.def(
      "negativity",
      [](double beta, int n_max) {
        const auto r = negativity(HybridChannel{beta}, n_max);
        py::dict d;
        d["closed_form"] = r.closed_form;
        d["numeric"] = r.numeric;
        d["vidal_werner"] = r.vidal_werner;
        return d;
      },
      py::arg("beta"), py::arg("n_max") = -1);

  m.def("solve_gamma", &solve_gamma, py::arg("factor"), py::arg("n"), py::arg("gamma_max") = 8.0);
  m.def("swap_probability", &swap_probability, py::arg("factor"));
  m.def("displacement_demod_probability", &displacement_demod_probability, py::arg("gamma"),
        py::arg("n"));
  m.def(
      "demod_swap",
      [](cplx a0, cplx a1, double factor) { return demod_dict(demod_swap(AMQubit{a0, a1, factor})); },
      py::arg("a0"), py::arg("a1"), py::arg("factor"));
  m.def(
      "demod_displacement",
      [](cplx a0, cplx a1, double factor, int n) {
        return demod_dict(demod_displacement(AMQubit{a0, a1, factor}, n));
      },
      py::arg("a0"), py::arg("a1"), py::arg("factor"), py::arg("n"));
  m.def(
      "overall_success",
      [](int l, int k, double alpha, const std::string& policy, int depth, bool single_rail) {
        const auto r = overall_success(
            l, k, alpha, DemodPolicy{parse_policy(policy), depth},
            single_rail ? Encoding::single_rail : Encoding::dual_rail);
        py::dict d;
        d["direct"] = r.direct;
        d["delta"] = r.delta;
        d["total"] = r.total;
        return d;
      },
      py::arg("l"), py::arg("k"), py::arg("alpha"), py::arg("policy") = "best_of",
      py::arg("chain_depth") = 3, py::arg("single_rail") = false);
  m.def("unit_factor_alpha", &unit_factor_alpha, py::arg("l"), py::arg("k"), py::arg("n"),
        py::arg("m"), py::arg("lo"), py::arg("hi"), py::arg("target") = -1.0);
  m.def(
      "initially_am_dual",
      [](cplx a0, cplx a1, double alpha) {
        const auto r = initially_am_dual(a0, a1, alpha);
        return py::make_tuple(r.total_success, *r.total_printed);
      },
      py::arg("a0"), py::arg("a1"), py::arg("alpha"),
      "Returns (recomposed total, closed-expression total).");
  m.def(
      "initially_am_single",
      [](cplx a0, cplx a1, double alpha) { return initially_am_single(a0, a1, alpha).total_success; },
      py::arg("a0"), py::arg("a1"), py::arg("alpha"));
  m.def(
      "brute_force",
      [](cplx a0, cplx a1, double alpha, double r, int outcome_max) {
        const auto run = brute_force_pipeline(UnknownQubit::make(a0, a1), alpha, alpha, r, outcome_max);
        py::dict d;
        d["beta"] = run.beta;
        d["max_probability_error"] = run.max_probability_error();
        d["max_infidelity"] = run.max_infidelity();
        return d;
      },
      py::arg("a0"), py::arg("a1"), py::arg("alpha"), py::arg("r"), py::arg("outcome_max") = 1);
}
