#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semirfd/coaction.hpp"
#include "semirfd/controlled_map.hpp"
#include "semirfd/enumeration.hpp"
#include "semirfd/error.hpp"
#include "semirfd/fdapprox.hpp"
#include "semirfd/funcalg.hpp"
#include "semirfd/run.hpp"

namespace py = pybind11;
using namespace semirfd;

namespace {

  // Elements cross the boundary as canonical word strings.
  struct Table {
    TablePtr table;

    std::vector<std::string> words(std::vector<Element> const& xs) const {
      std::vector<std::string> out;
      for (Element x : xs) {
        out.push_back(table->format(x));
      }
      return out;
    }
    std::vector<Element> elements(std::vector<std::string> const& ws) const {
      std::vector<Element> out;
      for (auto const& w : ws) {
        out.push_back(table->element(w));
      }
      return out;
    }
  };

  Presentation presentation_of(std::string const& spec) {
    return resolve_presentation(nlohmann::ordered_json(spec));
  }

  Table make_table(std::string const& spec, int bound, std::size_t max_words) {
    return {enumerate(presentation_of(spec), bound, max_words)};
  }

  ControlledMap make_map(TablePtr const& source, std::string const& kind, int target_bound) {
    if (kind == "length") {
      return ControlledMap::length_map(source, target_bound);
    }
    if (kind == "abelianization") {
      return ControlledMap::abelianization(source, target_bound);
    }
    throw InvalidArgument("map must be \"length\" or \"abelianization\"");
  }

  KernelSpec kernel_of(std::string const& name, int d) {
    return KernelSpec::by_name(name, d);
  }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-dimensional approximation toolkit for semigroup operator algebras";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<DepthError>(m, "DepthError", base.ptr());
  py::register_exception<ResourceLimit>(m, "ResourceLimit", base.ptr());
  py::register_exception<InvariantFailure>(m, "InvariantFailure", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());

  py::class_<Table>(m, "Table")
      .def_property_readonly("bound", [](Table const& t) { return t.table->bound(); })
      .def_property_readonly("size", [](Table const& t) { return t.table->size(); })
      .def_property_readonly("counts", [](Table const& t) { return t.table->counts(); })
      .def_property_readonly("cancellative",
                             [](Table const& t) { return t.table->cancellation().ok; })
      .def("canonical", [](Table const& t, std::string const& w) {
        return t.table->format(t.table->element(w));
      })
      .def("elements", [](Table const& t, int length) {
        return t.words(t.table->elements_through(length));
      })
      .def("multiply",
           [](Table const& t, std::string const& x, std::string const& y) {
             return t.table->format(t.table->multiply(t.table->element(x), t.table->element(y)));
           })
      .def("right_divisors",
           [](Table const& t, std::string const& p) {
             return t.words(t.table->right_divisors(t.table->element(p)));
           })
      .def("left_divisors",
           [](Table const& t, std::string const& p) {
             return t.words(t.table->left_divisors(t.table->element(p)));
           })
      .def("right_lcm", [](Table const& t, std::string const& p, std::string const& q) {
        auto const r = right_lcm_check(*t.table, t.table->element(p), t.table->element(q));
        return r.lcm ? py::cast(t.table->format(*r.lcm)) : py::none();
      });

  m.def("enumerate", &make_table, py::arg("presentation"), py::arg("bound"),
        py::arg("max_words") = default_max_words,
        "Congruence classes of all words up to `bound` for a builtin such as 'braid(3)' or a "
        "presentation file path.");

  m.def(
      "kernel_set",
      [](Table const& t, std::vector<std::string> const& F, int level) {
        auto const r = kernel_set(t.table, t.elements(F), level);
        return py::dict(py::arg("kernel") = t.words(r.kernel),
                        py::arg("support") = t.words(r.support));
      },
      py::arg("table"), py::arg("F"), py::arg("level"));

  m.def(
      "pi_F",
      [](Table const& t, std::vector<std::string> const& F, std::string const& s) {
        return pi_F(build_Y(t.table, t.elements(F)), t.table->element(s));
      },
      py::arg("table"), py::arg("F"), py::arg("s"),
      "Matrix of the compression of λ_s to the divisor subspace of F.");

  m.def(
      "fell_check",
      [](Table const& t, std::string const& map, int level_p, int level_q) {
        auto const phi = make_map(t.table, map, level_q);
        auto const rep = fell_intertwiner(phi, level_p, level_q);
        py::dict   inter;
        for (auto const& c : rep.intertwining) {
          inter[py::str(t.table->format(c.generator))] = c.ok;
        }
        return py::dict(py::arg("isometry") = rep.isometry, py::arg("intertwining") = inter);
      },
      py::arg("table"), py::arg("map"), py::arg("L_P"), py::arg("L_Q"));

  m.def(
      "qf_spanning_set",
      [](Table const& t, std::string const& map, std::vector<std::string> const& F) {
        auto const           phi = make_map(t.table, map, -1);
        std::vector<Element> targets;
        for (auto const& w : F) {
          targets.push_back(phi.target()->element(w));
        }
        return t.words(qf_spanning_set(phi, targets).elements);
      },
      py::arg("table"), py::arg("map"), py::arg("F"));

  m.def(
      "monomial_norm",
      [](std::string const& kernel, std::vector<int> const& exponents) {
        return monomial_norm(kernel_of(kernel, static_cast<int>(exponents.size())),
                             Multidx(exponents));
      },
      py::arg("kernel"), py::arg("exponents"));

  m.def(
      "multiplier_norm_lower",
      [](std::string const& kernel, std::string const& phi, int D, std::optional<int> d,
         double tol) {
        int const   vars = d.value_or(expression_variables(phi));
        NormOptions opts;
        opts.rel_tol = tol;
        return multiplier_norm_lower(kernel_of(kernel, vars),
                                     parse_polynomial_expression(phi, vars), D, opts);
      },
      py::arg("kernel"), py::arg("phi"), py::arg("D"), py::arg("d") = py::none(),
      py::arg("tol") = 1e-9);

  m.def(
      "execute",
      [](std::string const& config, std::size_t max_words, double norm_tol) {
        RunOptions opts;
        opts.max_words = max_words;
        opts.norm_tol  = norm_tol;
        auto const r   = execute(config, opts);
        return py::make_tuple(static_cast<int>(r.status), r.report);
      },
      py::arg("config"), py::arg("max_words") = default_max_words, py::arg("norm_tol") = 1e-9);
}
