#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ioi/app.hpp"
#include "ioi/bayes.hpp"
#include "ioi/bispatial.hpp"
#include "ioi/composition.hpp"
#include "ioi/density.hpp"
#include "ioi/density_json.hpp"
#include "ioi/errors.hpp"
#include "ioi/fiducial.hpp"
#include "ioi/gibbs.hpp"
#include "ioi/ks.hpp"
#include "ioi/normal.hpp"

namespace py = pybind11;

namespace {

// Two-parameter normal-model assignment from a Python dict:
// {"method": "fiducial"|"bayes", "data": {"mean","n","sigma2"},
//  "coupling": c, "prior": {"mean","variance"}, "prior_knowledge": ...}
ioi::ParameterAssignment assignment_from(const py::dict& d) {
  ioi::ParameterAssignment a;
  a.method = ioi::method_from_string(d["method"].cast<std::string>());
  const auto data = d["data"].cast<py::dict>();
  a.data = {data["mean"].cast<double>(), data["n"].cast<std::int64_t>(),
            data["sigma2"].cast<double>()};
  if (d.contains("coupling")) a.coupling = d["coupling"].cast<double>();
  if (d.contains("prior")) {
    const auto p = d["prior"].cast<py::dict>();
    a.prior = ioi::NormalPrior{p["mean"].cast<double>(), p["variance"].cast<double>()};
  }
  if (d.contains("prior_knowledge") &&
      d["prior_knowledge"].cast<std::string>() == "substantive") {
    a.knowledge = ioi::PriorKnowledge::substantive;
  }
  return a;
}

ioi::ScanOrder scan_from(const py::object& o) {
  if (py::isinstance<py::int_>(o)) return ioi::ScanOrder::random(o.cast<std::uint64_t>());
  auto order = o.cast<std::vector<std::size_t>>();
  for (auto& j : order) {
    if (j == 0) throw ioi::DomainError("sweep orders are 1-based");
    --j;
  }
  return ioi::ScanOrder::sweep(std::move(order));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Post-data inference engines: fiducial, Bayes, bispatial, "
            "region composition and Gibbs sampling over full conditionals.";
  m.attr("__version__") = ioi::kEngineVersion;

  auto error = py::register_exception<ioi::Error>(m, "IoiError", PyExc_RuntimeError);
  py::register_exception<ioi::DomainError>(m, "DomainError", error.ptr());
  py::register_exception<ioi::StructuralError>(m, "StructuralError", error.ptr());
  py::register_exception<ioi::AnalogyRejected>(m, "AnalogyRejected", error.ptr());
  py::register_exception<ioi::DegenerateUpdate>(m, "DegenerateUpdate", error.ptr());
  py::register_exception<ioi::EmptyRegion>(m, "EmptyRegion", error.ptr());
  py::register_exception<ioi::UndefinedRatio>(m, "UndefinedRatio", error.ptr());
  py::register_exception<ioi::ChainAborted>(m, "ChainAborted", error.ptr());
  py::register_exception<ioi::ValidationError>(m, "ValidationError", error.ptr());

  m.def("std_normal_cdf", &ioi::std_normal_cdf, py::arg("z"));
  m.def("std_normal_quantile", &ioi::std_normal_quantile, py::arg("p"));

  py::class_<ioi::Density1D>(m, "Density")
      .def_static("normal", &ioi::Density1D::normal, py::arg("mean"), py::arg("variance"))
      .def_static("grid", &ioi::Density1D::grid, py::arg("lo"), py::arg("hi"),
                  py::arg("weights"))
      .def_property_readonly("form",
                             [](const ioi::Density1D& d) {
                               switch (d.form()) {
                                 case ioi::Density1D::Form::normal: return "normal";
                                 case ioi::Density1D::Form::grid: return "grid";
                                 default: return "mixture";
                               }
                             })
      .def("pdf", &ioi::Density1D::pdf, py::arg("t"))
      .def("cdf", &ioi::Density1D::cdf, py::arg("t"))
      .def("quantile", &ioi::Density1D::quantile, py::arg("p"))
      .def("mass", &ioi::Density1D::mass, py::arg("a"), py::arg("b"))
      .def("support", &ioi::Density1D::support)
      .def("sample",
           [](const ioi::Density1D& d, std::size_t count, std::uint64_t seed) {
             return ioi::sample(d, count, seed).values;
           },
           py::arg("count"), py::arg("seed"))
      .def("to_json",
           [](const ioi::Density1D& d) { return ioi::density_to_json(d).dump(); })
      .def_static("from_json",
                  [](const std::string& s) {
                    return ioi::density_from_json(nlohmann::json::parse(s));
                  },
                  py::arg("text"))
      .def("__repr__", [](const ioi::Density1D& d) {
        return "<Density " + ioi::density_to_json(d).dump().substr(0, 80) + ">";
      });

  m.def("ks_distance", &ioi::ks_distance, py::arg("a"), py::arg("b"));

  m.def(
      "fiducial_density",
      [](double mean, std::int64_t n, double sigma2, bool substantive) {
        return ioi::fiducial_density(
            ioi::normal_mean_pivot(), {mean, n, sigma2},
            substantive ? ioi::PriorKnowledge::substantive
                        : ioi::PriorKnowledge::none_or_very_little);
      },
      py::arg("mean"), py::arg("n"), py::arg("sigma2"), py::arg("substantive") = false,
      "Fiducial density of a normal mean with known variance.");

  m.def(
      "conjugate_normal_update",
      [](double prior_mean, double prior_variance, double mean, std::int64_t n,
         double sigma2) {
        return ioi::conjugate_normal_update({prior_mean, prior_variance},
                                            {mean, n, sigma2});
      },
      py::arg("prior_mean"), py::arg("prior_variance"), py::arg("mean"), py::arg("n"),
      py::arg("sigma2"));

  m.def(
      "grid_bayes_update",
      [](const ioi::Density1D& prior, double mean, std::int64_t n, double sigma2) {
        return ioi::grid_bayes_update(prior, ioi::normal_mean_likelihood(),
                                      {mean, n, sigma2});
      },
      py::arg("prior"), py::arg("mean"), py::arg("n"), py::arg("sigma2"),
      "Grid Bayes update with the normal-mean likelihood.");

  m.def(
      "one_sided_p_value",
      [](double mean, std::int64_t n, double sigma2, double epsilon) {
        const auto r = ioi::one_sided_p_value({mean, n, sigma2}, epsilon);
        return py::make_tuple(r.p0, r.applicable);
      },
      py::arg("mean"), py::arg("n"), py::arg("sigma2"), py::arg("epsilon"),
      "Returns (p0, applicable).");

  m.def(
      "assess_region_probability",
      [](double p0, double epsilon, double pre_data_mass, const std::string& calibration) {
        ioi::BispatialConfig cfg;
        cfg.epsilon = epsilon;
        cfg.pre_data_mass = pre_data_mass;
        cfg.calibration = ioi::calibration_by_name(calibration);
        cfg.calibration_name = calibration;
        return ioi::assess_region_probability(
            {p0, p0 < cfg.applicability_threshold}, cfg);
      },
      py::arg("p0"), py::arg("epsilon"), py::arg("pre_data_mass"),
      py::arg("calibration") = "odds-default");

  m.def(
      "truncate_to_region",
      [](const ioi::Density1D& d, double lo, double hi) {
        return ioi::truncate_to_region(d, {lo, hi});
      },
      py::arg("density"), py::arg("lo"), py::arg("hi"));

  m.def(
      "compose",
      [](const std::vector<std::pair<double, double>>& regions,
         const std::vector<double>& probabilities,
         const std::vector<ioi::Density1D>& densities) {
        ioi::RegionPartition partition;
        for (const auto& [lo, hi] : regions) partition.regions.push_back({lo, hi});
        partition.probabilities = probabilities;
        return ioi::compose(partition, {densities});
      },
      py::arg("regions"), py::arg("probabilities"), py::arg("densities"));

  m.def(
      "ioi_pipeline",
      [](double mean, std::int64_t n, double sigma2, double epsilon,
         double pre_data_mass, const std::string& calibration) {
        ioi::BispatialConfig cfg;
        cfg.epsilon = epsilon;
        cfg.pre_data_mass = pre_data_mass;
        cfg.calibration = ioi::calibration_by_name(calibration);
        cfg.calibration_name = calibration;
        const auto r = ioi::ioi_pipeline({mean, n, sigma2}, cfg,
                                         ioi::PriorKnowledge::none_or_very_little);
        py::dict out;
        out["p0"] = r.p_value.p0;
        out["region_probability"] = r.region_probability;
        out["density"] = r.density;
        return out;
      },
      py::arg("mean"), py::arg("n"), py::arg("sigma2"), py::arg("epsilon"),
      py::arg("pre_data_mass"), py::arg("calibration") = "odds-default");

  m.def(
      "gibbs_run",
      [](const std::vector<py::dict>& parameters, const py::object& scan,
         std::vector<double> init, std::size_t iterations, std::size_t burn_in,
         std::uint64_t seed) {
        std::vector<ioi::ParameterAssignment> spec;
        for (const auto& p : parameters) spec.push_back(assignment_from(p));
        const auto set = ioi::build_conditional_set(spec);
        const auto order = scan_from(scan);
        const auto chain = [&] {
          py::gil_scoped_release release;
          return ioi::gibbs_run(set, order, init, iterations, burn_in, seed);
        }();
        std::vector<std::vector<double>> columns;
        for (std::size_t j = 0; j < chain.k; ++j) columns.push_back(chain.column(j));
        return columns;
      },
      py::arg("parameters"), py::arg("scan"), py::arg("init"), py::arg("iterations"),
      py::arg("burn_in"), py::arg("seed"),
      "Post-burn-in draws, one list per coordinate. `scan` is a 1-based sweep "
      "order such as [1, 2] or an integer seed for a random scan.");

  m.def(
      "check_compatibility",
      [](const std::vector<py::dict>& parameters, std::pair<double, double> x_range,
         std::pair<double, double> y_range, std::size_t grid_n) {
        std::vector<ioi::ParameterAssignment> spec;
        for (const auto& p : parameters) spec.push_back(assignment_from(p));
        const auto set = ioi::build_conditional_set(spec);
        ioi::Box box{{x_range.first, y_range.first}, {x_range.second, y_range.second}};
        const auto r = ioi::check_compatibility(set, box, grid_n);
        return py::make_tuple(ioi::to_string(r.verdict), r.residual);
      },
      py::arg("parameters"), py::arg("x_range"), py::arg("y_range"),
      py::arg("grid_n") = 201, "Returns (verdict, residual).");

  m.def(
      "run",
      [](const std::string& config, std::optional<std::uint64_t> seed,
         std::optional<std::string> out) {
        ioi::RunOverrides overrides;
        overrides.seed = seed;
        if (out) overrides.out = *out;
        std::ostringstream err;
        const int code = ioi::run(config, overrides, err);
        return py::make_tuple(code, err.str());
      },
      py::arg("config"), py::arg("seed") = py::none(), py::arg("out") = py::none(),
      "Runs a config file like `ioi run`; returns (exit_code, error_stream).");
}
