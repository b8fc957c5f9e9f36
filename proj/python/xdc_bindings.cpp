// Python bindings. Grids cross the boundary as float64 numpy arrays of shape
// (H, W, C); masks as (H, W).

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xdc/diagnostics.hpp"
#include "xdc/error.hpp"
#include "xdc/filter.hpp"
#include "xdc/mask_ops.hpp"
#include "xdc/oracle.hpp"
#include "xdc/resample.hpp"
#include "xdc/sampler.hpp"
#include "xdc/schedule.hpp"
#include "xdc/time_mask.hpp"

namespace py = pybind11;
using namespace xdc;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

ImageGrid to_grid(const Array& a) {
    if (a.ndim() != 3) throw ShapeError("expected an (H, W, C) array, got " + std::to_string(a.ndim()) + " dims");
    const GridShape shape{static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), static_cast<int>(a.shape(2))};
    ImageGrid g(shape);
    auto view = a.unchecked<3>();
    for (int y = 0; y < shape.height; ++y) {
        for (int x = 0; x < shape.width; ++x) {
            for (int c = 0; c < shape.channels; ++c) g.at(y, x, c) = view(y, x, c);
        }
    }
    return g;
}

Array from_grid(const ImageGrid& g) {
    Array out({g.height(), g.width(), g.channels()});
    auto view = out.mutable_unchecked<3>();
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            for (int c = 0; c < g.channels(); ++c) view(y, x, c) = g.at(y, x, c);
        }
    }
    return out;
}

Mask to_mask(const Array& a) {
    if (a.ndim() != 2) throw ShapeError("expected an (H, W) mask, got " + std::to_string(a.ndim()) + " dims");
    const auto* p = a.data();
    return Mask(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), std::vector<double>(p, p + a.size()));
}

Array from_mask(const Mask& m) {
    Array out({m.height(), m.width()});
    std::copy(m.values().begin(), m.values().end(), out.mutable_data());
    return out;
}

Array from_vector(std::span<const double> v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

GaussianMixture make_mixture(const std::vector<Array>& means, const std::vector<double>& stddevs,
                             std::vector<double> weights) {
    if (stddevs.size() != means.size()) throw ConfigError("need one stddev per mean");
    if (weights.empty()) weights.assign(means.size(), 1.0 / static_cast<double>(means.size()));
    if (weights.size() != means.size()) throw ConfigError("need one weight per mean");
    std::vector<MixtureComponent> components;
    for (std::size_t k = 0; k < means.size(); ++k) components.push_back({weights[k], to_grid(means[k]), stddevs[k]});
    return GaussianMixture(std::move(components));
}

}  // namespace

PYBIND11_MODULE(_xdc, m) {
    m.doc() = "Guided-diffusion compositing engine";

    static py::exception<Error> base(m, "XdcError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
    py::register_exception<MaskError>(m, "MaskError", base.ptr());
    py::register_exception<InvalidFilterError>(m, "InvalidFilterError", base.ptr());
    py::register_exception<DiagnosticError>(m, "DiagnosticError", base.ptr());

    m.def("low_pass", [](const Array& x, int factor) { return from_grid(low_pass(to_grid(x), factor)); },
          py::arg("x"), py::arg("factor"));
    m.def("blend_filter",
          [](const Array& x, const Array& blend, int n_in, int n_out) {
              return from_grid(blend_filter(to_grid(x), to_mask(blend), n_in, n_out));
          },
          py::arg("x"), py::arg("blend"), py::arg("n_in"), py::arg("n_out"));
    m.def("dilate", [](const Array& mask) { return from_mask(dilate(to_mask(mask))); }, py::arg("mask"));
    m.def("blur_outwards",
          [](const Array& mask, int p_blend, std::optional<std::function<double(double)>> smoothing) {
              return from_mask(blur_outwards(to_mask(mask), p_blend, smoothing ? *smoothing : linear_smoothing));
          },
          py::arg("mask"), py::arg("p_blend"), py::arg("smoothing") = py::none());
    m.def("boundary_energy",
          [](const Array& x, const Array& mask, int band) { return boundary_energy(to_grid(x), to_mask(mask), band); },
          py::arg("x"), py::arg("mask"), py::arg("band") = 2);

    py::class_<NoiseSchedule>(m, "NoiseSchedule")
        .def_static("linear", &NoiseSchedule::linear, py::arg("steps"))
        .def_property_readonly("steps", &NoiseSchedule::steps)
        .def_property_readonly("sigma", [](const NoiseSchedule& s) { return from_vector(s.sigmas()); })
        .def_property_readonly("alpha", [](const NoiseSchedule& s) { return from_vector(s.alphas()); })
        .def_property_readonly("alpha_bar", [](const NoiseSchedule& s) { return from_vector(s.alpha_bars()); })
        .def_property_readonly("digest", &NoiseSchedule::digest);

    m.def("forward_noise",
          [](const Array& x0, int t, const Array& eps, const NoiseSchedule& s) {
              return from_grid(forward_noise(to_grid(x0), t, to_grid(eps), s));
          },
          py::arg("x0"), py::arg("t"), py::arg("eps"), py::arg("schedule"));
    m.def("predict_x0",
          [](const Array& xt, const Array& eps, int t, const NoiseSchedule& s) {
              return from_grid(predict_x0(to_grid(xt), to_grid(eps), t, s));
          },
          py::arg("x_t"), py::arg("eps"), py::arg("t"), py::arg("schedule"));

    m.def("time_mask_thresholds",
          [](const Array& mask, double t_in, double t_out, int steps) {
              const TimeMask tm = build_time_mask(to_mask(mask), t_in, t_out, steps);
              Array out({tm.height(), tm.width()});
              std::copy(tm.thresholds().begin(), tm.thresholds().end(), out.mutable_data());
              return out;
          },
          py::arg("mask"), py::arg("t_in"), py::arg("t_out"), py::arg("steps"));

    m.def("resample_actions",
          [](int steps, double r, int u) {
              std::vector<std::pair<int, std::string>> out;
              const ResampleSchedule plan = ResampleSchedule::build(steps, r, u);
              for (const auto& a : plan.actions()) {
                  out.emplace_back(a.step, a.direction == Direction::denoise ? "denoise" : "renoise");
              }
              return out;
          },
          py::arg("steps"), py::arg("r"), py::arg("u"));

    py::class_<GuidanceConfig>(m, "GuidanceConfig")
        .def(py::init<>())
        .def_readwrite("t_in", &GuidanceConfig::t_in)
        .def_readwrite("t_out", &GuidanceConfig::t_out)
        .def_readwrite("n_in", &GuidanceConfig::n_in)
        .def_readwrite("n_out", &GuidanceConfig::n_out)
        .def_readwrite("r", &GuidanceConfig::r)
        .def_readwrite("u", &GuidanceConfig::u)
        .def_readwrite("p_blend", &GuidanceConfig::p_blend)
        .def_property(
            "blend_space", [](const GuidanceConfig& c) { return to_string(c.blend_space); },
            [](GuidanceConfig& c, const std::string& v) { c.blend_space = parse_blend_space(v); })
        .def_property(
            "sampler", [](const GuidanceConfig& c) { return to_string(c.sampler); },
            [](GuidanceConfig& c, const std::string& v) { c.sampler = parse_sampler_kind(v); })
        .def_readwrite("steps", &GuidanceConfig::steps)
        .def_readwrite("seed", &GuidanceConfig::seed)
        .def_readwrite("guidance_scale", &GuidanceConfig::guidance_scale)
        .def("validate", &GuidanceConfig::validate);

    m.def("oracle_posterior_mean",
          [](const Array& xt, int t, int steps, const std::vector<Array>& means, const std::vector<double>& stddevs,
             const std::vector<double>& weights) {
              const GaussianMixture mixture = make_mixture(means, stddevs, weights);
              return from_grid(mixture.posterior_mean(to_grid(xt), t, NoiseSchedule::linear(steps)));
          },
          py::arg("x_t"), py::arg("t"), py::arg("steps"), py::arg("means"), py::arg("stddevs"),
          py::arg("weights") = std::vector<double>{});

    m.def("composite_oracle",
          [](const Array& reference, const Array& mask, const GuidanceConfig& cfg, const std::vector<Array>& means,
             const std::vector<double>& stddevs, const std::vector<double>& weights) {
              const ImageGrid ref = to_grid(reference);
              const Mask msk = to_mask(mask);
              OracleDenoiser model(make_mixture(means, stddevs, weights), NoiseSchedule::linear(cfg.steps));
              std::optional<CompositeResult> result;
              {
                  py::gil_scoped_release release;
                  result = run_composite(ref, msk, cfg, model);
              }
              return py::make_tuple(from_grid(result->image), result->evaluations);
          },
          py::arg("reference"), py::arg("mask"), py::arg("config"), py::arg("means"), py::arg("stddevs"),
          py::arg("weights") = std::vector<double>{},
          "Runs the guided composite against a Gaussian-mixture oracle. Returns (image, evaluations).");
}
