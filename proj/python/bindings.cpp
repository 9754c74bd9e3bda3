// Thin bindings: every call returns the same JSON the CLI prints.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cuspnorm/cli.hpp"
#include "cuspnorm/error.hpp"

namespace py = pybind11;
using namespace cuspnorm;
using json_io::json;

namespace {

std::string cusps(std::int64_t N) { return json_io::cusps_to_json(N, enumerate_cusps(N)).dump(); }

std::string reduce(std::int64_t N, const std::string& x, const std::string& y) {
  return json_io::to_json(gap_reduce(PointH(parse_rational(x), parse_rational(y)), N)).dump();
}

std::string count(std::int64_t N, std::int64_t M, std::int64_t l, const std::string& delta, const std::string& x,
                  const std::string& y) {
  PointH z(parse_rational(x), parse_rational(y));
  return json_io::to_json(classify_counts(z, l, parse_rational(delta), N, M, true)).dump();
}

std::string hecke(std::int64_t N, std::int64_t M, std::int64_t l) {
  return json_io::to_json(coset_reps_delta(l, N, M)).dump();
}

std::string exponent(const std::string& which) {
  return json_io::to_json(theorem_pipeline(parse_theorem_case(which))).dump();
}

std::string fourier(std::int64_t N, std::int64_t M, const std::string& y) {
  const FourierBound b = fourier_sup_bound(N, M, parse_rational(y));
  json j = {{"high_branch", b.high_branch}, {"value_pow4", json_io::to_json(b.value_pow4)},
            {"value", json_io::to_json(b.value)}};
  return j.dump();
}

py::tuple run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cuspnorm");
  const auto r = cli::run(args);
  return py::make_tuple(r.exit_code, r.output, r.log);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact arithmetic on Gamma0(N); results are JSON strings";
  static py::exception<Error> error(m, "CuspnormError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    }
  });
  m.def("cusps", &cusps, py::arg("level"));
  m.def("reduce", &reduce, py::arg("level"), py::arg("x"), py::arg("y"));
  m.def("count", &count, py::arg("level"), py::arg("m"), py::arg("l"), py::arg("delta"), py::arg("x"), py::arg("y"));
  m.def("hecke", &hecke, py::arg("level"), py::arg("m"), py::arg("l"));
  m.def("exponent", &exponent, py::arg("case"));
  m.def("fourier", &fourier, py::arg("level"), py::arg("m"), py::arg("y"));
  m.def("smooth_count", &smooth_count, py::arg("x"), py::arg("level"));
  m.def("run_cli", &run_cli, py::arg("args"));
}
