// Python bindings. Finite points are lists of floats, the remote point is None.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "moebius/euclidean.hpp"
#include "moebius/geodesy.hpp"
#include "moebius/heisenberg.hpp"
#include "moebius/verify.hpp"

namespace py = pybind11;
using namespace moebius;

namespace {

using PyPoint = std::optional<std::vector<double>>;

ExtendedPoint to_point(const PyPoint& p) {
  return p ? ExtendedPoint::finite(*p) : ExtendedPoint::infinity();
}

PyPoint from_point(const ExtendedPoint& p) {
  if (p.is_infinity()) return std::nullopt;
  return std::vector<double>(p.coords().begin(), p.coords().end());
}

Quadruple to_quadruple(const std::vector<PyPoint>& pts) {
  if (pts.size() != 4) throw MoebiusError(ErrorCode::InvalidArgument, "a quadruple needs 4 points");
  return {to_point(pts[0]), to_point(pts[1]), to_point(pts[2]), to_point(pts[3])};
}

SuiteConfig config(std::uint64_t seed, int k, std::size_t samples) {
  SuiteConfig c;
  c.seed = seed;
  c.k = k;
  c.samples = samples;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Moebius geometry of the Heisenberg group and Euclidean space";

  py::register_exception<MoebiusError>(m, "MoebiusError", PyExc_ValueError);

  py::class_<HeisenbergModel>(m, "Heisenberg")
      .def(py::init<int>(), py::arg("k"))
      .def_property_readonly("k", &HeisenbergModel::k)
      .def("encode",
           [](const HeisenbergModel& h, const CVector& z, double fiber) { return from_point(h.encode(h.element(z, fiber))); },
           py::arg("z"), py::arg("h"))
      .def("decode",
           [](const HeisenbergModel& h, const PyPoint& p) {
             const auto g = h.decode(to_point(p));
             return py::make_tuple(g.z, g.h);
           })
      .def("dist", [](const HeisenbergModel& h, const PyPoint& x, const PyPoint& y) {
        return h.koranyi_dist(to_point(x), to_point(y));
      })
      .def("mul",
           [](const HeisenbergModel& h, const PyPoint& x, const PyPoint& y) {
             return from_point(h.encode(heis_mul(h.decode(to_point(x)), h.decode(to_point(y)))));
           })
      .def("inverse",
           [](const HeisenbergModel& h, const PyPoint& x) {
             return from_point(h.encode(heis_inverse(h.decode(to_point(x)))));
           })
      .def("gauge", [](const HeisenbergModel& h, const PyPoint& x) { return koranyi_gauge(h.decode(to_point(x))); })
      .def("koranyi_inversion",
           [](const HeisenbergModel& h, const PyPoint& x) { return from_point(h.koranyi_inversion()(to_point(x))); })
      .def("space_inversion",
           [](const HeisenbergModel& h, const PyPoint& x, const PyPoint& omega, const PyPoint& omega2, double r) {
             return from_point(h.space_inversion(to_point(omega), to_point(omega2), r)(to_point(x)));
           },
           py::arg("x"), py::arg("omega"), py::arg("omega2") = PyPoint{}, py::arg("r") = 1.0)
      .def("cross_ratio",
           [](const HeisenbergModel& h, const std::vector<PyPoint>& q) {
             const auto t = cross_ratio(h.metric(), to_quadruple(q));
             return py::make_tuple(t.a, t.b, t.c);
           })
      .def("busemann",
           [](const HeisenbergModel& h, const PyPoint& origin, const std::vector<double>& direction,
              const PyPoint& x) { return busemann(h, h.line(to_point(origin), direction), to_point(x)).value; },
           py::arg("origin"), py::arg("direction"), py::arg("x"))
      .def("recover_J",
           [](const HeisenbergModel& h, const std::vector<double>& u) {
             const auto j = recover_J(h, u);
             return py::make_tuple(j.direction, j.value);
           })
      .def("lifting_constant",
           [](const HeisenbergModel& h, const std::vector<double>& u, const std::vector<double>& v,
              const std::vector<std::tuple<std::vector<double>, double, double>>& rects) {
             std::vector<Rectangle> rs;
             for (const auto& [corner, w, ht] : rects) rs.push_back({corner, w, ht});
             return area_law_fit(h, u, v, rs).c;
           },
           py::arg("u"), py::arg("v"), py::arg("rectangles"));

  m.def("euclidean_cross_ratio", [](std::size_t n, const std::vector<PyPoint>& q) {
    const auto t = cross_ratio(euclidean_metric(n), to_quadruple(q));
    return py::make_tuple(t.a, t.b, t.c);
  });

  m.def("classify", [](double a, double b, double c, double tol) {
        const auto r = classify_triple({a, b, c}, tol);
        return py::make_tuple(std::string(to_string(r.tag)), r.slack);
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("tol") = 1e-12);

  m.def("list_suites", [] {
    py::list out;
    for (const auto& s : list_suites()) {
      py::dict d;
      d["tag"] = s.tag;
      d["anchor"] = s.anchor;
      d["description"] = s.description;
      d["group"] = to_string(s.group);
      d["tolerance"] = s.default_tolerance;
      d["model"] = s.model;
      out.append(d);
    }
    return out;
  });

  m.def("run_suite_json",
        [](const std::string& tag, std::uint64_t seed, int k, std::size_t samples) {
          py::gil_scoped_release release;
          return to_json(run_suite(tag, config(seed, k, samples))).dump();
        },
        py::arg("tag"), py::arg("seed") = 1, py::arg("k") = 2, py::arg("samples") = 0);

  m.def("run_all_json",
        [](std::uint64_t seed, int k, const std::vector<std::string>& tags, unsigned threads) {
          py::gil_scoped_release release;
          const auto c = config(seed, k, 0);
          return to_json(run_all(c, tags, threads), c).dump();
        },
        py::arg("seed") = 1, py::arg("k") = 2, py::arg("tags") = std::vector<std::string>{}, py::arg("threads") = 0);
}
