#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "conesq/suites.hpp"

namespace py = pybind11;
using namespace conesq;

namespace {

// Reports cross the boundary as JSON text; the Python side decodes them.
std::string records_json(const Reporter& rep, bool timing) {
  json arr = json::array();
  for (const Record& r : rep.records()) arr.push_back(r.to_json(timing));
  return arr.dump();
}

Point to_point(const std::vector<double>& v) { return Point::from_vector(v); }

}  // namespace

PYBIND11_MODULE(_conesq, m) {
  m.doc() = "Native core of conesq";
  py::register_exception<Error>(m, "ConesqError", PyExc_ValueError);

  py::class_<Scenario>(m, "Scenario")
      .def_static("from_json", [](const std::string& text) { return Scenario::from_json(json::parse(text)); })
      .def_static("load", &Scenario::load)
      .def_static("segment", &segment_scenario, py::arg("atoms"), py::arg("seed"))
      .def_readonly("name", &Scenario::name)
      .def_readwrite("seed", &Scenario::seed)
      .def_readwrite("budget", &Scenario::budget)
      .def_readonly("suites", &Scenario::suites)
      .def_property_readonly("atoms",
                             [](const Scenario& s) {
                               std::vector<std::vector<double>> out;
                               for (const Point& p : s.mu.points()) out.push_back(p.to_vector());
                               return out;
                             })
      .def_property_readonly("weights", [](const Scenario& s) { return s.mu.weights(); })
      .def("spacing", &Scenario::spacing)
      .def("diameter", &Scenario::diameter);

  m.def("suite_names", &scenario_suite_names);
  m.def("criterion_keys", [] {
    std::vector<std::string> out;
    for (int i = 1; i <= criterion_count(); ++i) out.push_back(criterion_key(i));
    return out;
  });
  m.def(
      "_run_suite",
      [](const std::string& name, const Scenario& sc, bool timing) {
        Reporter rep;
        {
          py::gil_scoped_release release;
          require(run_scenario_suite(name, sc, rep), "unknown suite '" + name + "'");
        }
        return records_json(rep, timing);
      },
      py::arg("name"), py::arg("scenario"), py::arg("timing") = false);
  m.def(
      "_run_criterion",
      [](const std::string& key, std::uint64_t seed) {
        const int id = criterion_by_key(key);
        require(id != 0, "unknown criterion '" + key + "'");
        CriterionResult r;
        {
          py::gil_scoped_release release;
          r = run_criterion(id, seed);
        }
        return json{{"id", r.id}, {"key", r.key}, {"title", r.title}, {"pass", r.pass}, {"seconds", r.seconds},
                    {"budget", r.budget}, {"summary", r.summary}}
            .dump();
      },
      py::arg("key"), py::arg("seed"));

  m.def(
      "ball_mass",
      [](const std::vector<std::vector<double>>& points, const std::vector<double>& weights,
         const std::vector<double>& center, double radius, bool closed) {
        std::vector<Point> pts;
        for (const auto& p : points) pts.push_back(to_point(p));
        const AtomicMeasure mu(pts, weights);
        return ball_mass(mu, BallSpec{to_point(center), radius, closed, true});
      },
      py::arg("points"), py::arg("weights"), py::arg("center"), py::arg("radius"), py::arg("closed") = true);
  m.def(
      "point_cone_volume",
      [](int dim, double s, double t, std::size_t samples, std::uint64_t seed) {
        const ClosedSet E = ClosedSet::point_cloud({Point(dim)});
        const Estimate e =
            cone_sigma_integral(E, Point(dim), s, t, [](const Point&, double) { return 1.0; }, QuadratureConfig{samples, seed});
        return std::make_pair(e.value, e.stderr);
      },
      py::arg("dim"), py::arg("s"), py::arg("t"), py::arg("samples") = 4000, py::arg("seed") = 1);
}
