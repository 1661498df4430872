#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tridecomp/driver.hpp"
#include "tridecomp/errors.hpp"
#include "tridecomp/scenes.hpp"

namespace py = pybind11;
using namespace tridecomp;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Image2D toImage(const Array& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
  const GridSpec spec(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  return Image2D(spec, std::vector<double>(a.data(), a.data() + a.size()));
}

Array toArray(const Image2D& img) {
  Array out({img.rows(), img.cols()});
  std::copy(img.values().begin(), img.values().end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_tridecomp, m) {
  m.doc() = "Structure / smooth / oscillatory image decomposition";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);

  py::enum_<ModelVariant>(m, "ModelVariant")
      .value("Proposed", ModelVariant::Proposed)
      .value("ModelI", ModelVariant::ModelI)
      .value("ModelII", ModelVariant::ModelII)
      .value("ModelIII", ModelVariant::ModelIII);
  py::enum_<LambdaInit>(m, "LambdaInit").value("Aligned", LambdaInit::Aligned).value("Zero", LambdaInit::Zero);
  py::enum_<SmoothInit>(m, "SmoothInit")
      .value("ZeroMean", SmoothInit::ZeroMean)
      .value("Residual", SmoothInit::Residual);

  py::class_<DecompParams>(m, "DecompParams")
      .def(py::init<>())
      .def_readwrite("alpha0", &DecompParams::alpha0)
      .def_readwrite("alpha_curv", &DecompParams::alphaCurv)
      .def_readwrite("alpha_w", &DecompParams::alphaW)
      .def_readwrite("alpha_n", &DecompParams::alphaN)
      .def_readwrite("tau", &DecompParams::tau)
      .def_readwrite("gamma1", &DecompParams::gamma1)
      .def_readwrite("gamma2", &DecompParams::gamma2)
      .def_readwrite("gamma3", &DecompParams::gamma3)
      .def_readwrite("c", &DecompParams::c)
      .def_readwrite("kappa", &DecompParams::kappa)
      .def_readwrite("rho", &DecompParams::rho)
      .def_readwrite("iter_max", &DecompParams::iterMax)
      .def_readwrite("pad_width", &DecompParams::padWidth)
      .def_readwrite("variant", &DecompParams::variant)
      .def_readwrite("lambda_init", &DecompParams::lambdaInit)
      .def_readwrite("smooth_init", &DecompParams::smoothInit)
      .def_readwrite("trace_energy", &DecompParams::traceEnergy)
      .def("validate", &DecompParams::validate);

  m.def(
      "decompose",
      [](const Array& f, const DecompParams& params) {
        const Image2D img = toImage(f);
        DecompositionResult r;
        {
          py::gil_scoped_release release;
          r = decompose(img, params);
        }
        py::list history;
        for (const ResidualEntry& e : r.residualHistory) history.append(py::make_tuple(e.relChangeR, e.relChangeV));
        py::dict out;
        out["v"] = toArray(r.v);
        out["w"] = toArray(r.w);
        out["n"] = toArray(r.n);
        out["u"] = toArray(r.u);
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        out["elapsed_seconds"] = r.elapsedSeconds;
        out["residual_history"] = history;
        out["energy_trace"] = r.energyTrace;
        return out;
      },
      py::arg("f"), py::arg("params") = DecompParams{},
      "Decompose a 2-D array with values in [0,1]; returns a dict with v, w, n, u and run data.");

  m.def(
      "synth", [](const std::string& scene, int size) {
        const auto kind = parseScene(scene);
        if (!kind) throw ParameterError("unknown scene: " + scene);
        return toArray(synthesizeScene(*kind, size));
      },
      py::arg("scene"), py::arg("size") = 256);
  m.def(
      "add_noise", [](const Array& f, double sigma, std::uint64_t seed) {
        return toArray(addGaussianNoise(toImage(f), {sigma, seed}));
      },
      py::arg("f"), py::arg("sigma"), py::arg("seed") = 0, "sigma on the [0,1] intensity scale");
  m.def("psnr", [](const Array& ref, const Array& est) { return psnr(toImage(ref), toImage(est)); });
  m.def("stddev", [](const Array& f) { return stddev(toImage(f)); });
  m.def("laplacian", [](const Array& f) { return toArray(laplacian(toImage(f))); });
  m.def("preset_alpha_n", [](double sigma) { return presetAlphaN(sigma); }, py::arg("sigma"),
        "alpha_n for a noise level given in 1/255 units");
}
