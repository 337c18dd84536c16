// Python bindings for the main operations: measures, Herglotz evaluation,
// rotations, perturbation m-functions, Naimark dilation, half-line Weyl
// functions, and the interval models.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "herglotz/errors.hpp"
#include "herglotz/extensions.hpp"
#include "herglotz/herglotz.hpp"
#include "herglotz/json_io.hpp"
#include "herglotz/livsic.hpp"
#include "herglotz/measure.hpp"
#include "herglotz/perturbation.hpp"
#include "herglotz/schrodinger.hpp"
#include "herglotz/version.hpp"

namespace py = pybind11;
using namespace herglotz;

namespace {

CMat mat_from_rows(const std::vector<std::vector<cplx>>& rows) {
    if (rows.empty()) return CMat();
    CMat m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw BadInput("ragged matrix");
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<cplx>> mat_to_rows(const CMat& m) {
    std::vector<std::vector<cplx>> rows(m.rows(), std::vector<cplx>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

Potential potential_from(const py::object& spec) {
    if (spec.is_none()) return Potential::zero();
    if (py::isinstance<py::str>(spec)) {
        if (spec.cast<std::string>() == "zero") return Potential::zero();
        throw BadInput("potential string must be 'zero'");
    }
    auto pair = spec.cast<std::pair<std::vector<double>, std::vector<double>>>();
    return Potential::table(std::move(pair.first), std::move(pair.second));
}

} // namespace

PYBIND11_MODULE(_herglotz, m) {
    m.doc() = "Herglotz functions, spectral measures and Weyl m-functions";
    m.attr("__version__") = kVersion;

    py::register_exception<VerificationError>(m, "VerificationFailure");
    py::register_exception<Error>(m, "HerglotzError");

    py::class_<Measure>(m, "Measure")
        .def_static("from_json", &measure_from_json)
        .def_static(
            "from_atoms",
            [](const std::vector<std::pair<double, double>>& atoms, const std::string& tail,
               double exponent) {
                std::vector<Atom> a;
                for (auto [x, mass] : atoms) a.push_back({x, mass});
                Tail t;
                if (tail == "lebesgue_over_pi") t.kind = TailKind::LebesgueOverPi;
                else if (tail == "power") t = {TailKind::Power, exponent};
                else if (tail != "none") throw BadInput("tail must be none|lebesgue_over_pi|power");
                return Measure::from_atoms(std::move(a), t);
            },
            py::arg("atoms"), py::arg("tail") = "none", py::arg("exponent") = 0.0)
        .def_static("lebesgue_over_pi", &Measure::lebesgue_over_pi)
        .def("to_json", &measure_to_json)
        .def("atoms",
             [](const Measure& mm) {
                 std::vector<std::pair<double, double>> out;
                 for (const Atom& a : mm.atoms()) out.emplace_back(a.x, a.m);
                 return out;
             })
        .def("grid", &Measure::grid)
        .def("values", &Measure::values)
        .def("weighted_mass", [](const Measure& mm, double e) { return weighted_mass(mm, e); })
        .def("normalized", [](const Measure& mm) { return donoghue_normalize(mm); })
        .def("eval",
             [](const Measure& mm, cplx z, const std::string& kernel) {
                 return eval_scalar(mm, z, kernel == "plain" ? Kernel::Plain : Kernel::Full);
             },
             py::arg("z"), py::arg("kernel") = "full")
        .def("classify", [](const Measure& mm) {
            switch (classify_extension_type(mm)) {
                case ExtClass::Friedrichs: return "friedrichs";
                case ExtClass::Krein: return "krein";
                case ExtClass::FriedrichsEqualsKrein: return "friedrichs_equals_krein";
                default: return "neither";
            }
        });

    m.def("rotate_value", &rotate_value, py::arg("m"), py::arg("theta"));
    m.def("herglotz_floor", &herglotz_floor);
    m.def(
        "stieltjes_invert",
        [](const std::function<cplx(cplx)>& f, double lo, double hi, std::size_t probes) {
            InversionOptions opt;
            opt.probes = probes;
            return stieltjes_invert(f, lo, hi, opt);
        },
        py::arg("evaluator"), py::arg("lo"), py::arg("hi"), py::arg("probes") = 801);

    m.def(
        "perturbed_mfunc",
        [](const std::vector<std::vector<cplx>>& h0, const std::vector<std::vector<cplx>>& k,
           const std::vector<std::vector<cplx>>& l, cplx z) {
            return mat_to_rows(
                perturbed_mfunc(PerturbationTriple(mat_from_rows(h0), mat_from_rows(k),
                                                   mat_from_rows(l)),
                                z));
        },
        py::arg("h0"), py::arg("k"), py::arg("l"), py::arg("z"));

    m.def("naimark_dilate",
          [](std::size_t dim, const std::vector<std::pair<double, std::vector<std::vector<cplx>>>>&
                                  atoms) {
              std::vector<MatrixAtom> a;
              for (const auto& [x, w] : atoms) a.push_back({x, mat_from_rows(w)});
              const Dilation d = naimark_dilate(MatrixMeasure(dim, std::move(a)));
              return py::make_tuple(d.eigenvalues, mat_to_rows(d.k));
          });

    m.def(
        "weyl_m",
        [](const py::object& q, double gamma, cplx z) {
            const WeylResult r = weyl_m(potential_from(q), BoundaryAngle(gamma), z);
            return py::make_tuple(r.value, r.richardson_error);
        },
        py::arg("q"), py::arg("gamma"), py::arg("z"));
    m.def(
        "weyl_to_donoghue",
        [](const py::object& q, double alpha, cplx z) {
            return weyl_to_donoghue(potential_from(q), alpha, z);
        },
        py::arg("q"), py::arg("alpha"), py::arg("z"));
    m.def(
        "sharp_bounds",
        [](const py::object& q, double alpha) {
            const SharpBounds b = sharp_bounds(potential_from(q), alpha);
            py::dict d;
            d["sup_derivative"] = b.sup_derivative;
            d["sup_value"] = b.sup_value;
            d["product"] = b.product;
            d["sobolev_constant"] = b.sobolev_constant;
            d["variational"] = b.variational;
            return d;
        },
        py::arg("q"), py::arg("alpha"));
    m.def("point_interaction_m", [](int n, const std::string& which, cplx z) {
        return point_interaction_m(
            n, which == "krein" ? PointExtension::Krein : PointExtension::Friedrichs, z);
    });

    py::class_<LivsicInterval>(m, "LivsicInterval")
        .def(py::init<double, double>(), py::arg("a"), py::arg("alpha"))
        .def_readonly("a", &LivsicInterval::a)
        .def_readonly("alpha", &LivsicInterval::alpha)
        .def_readonly("beta", &LivsicInterval::beta)
        .def("m", [](const LivsicInterval& model, cplx z) { return livsic_rotated_m(model, z); })
        .def("atom_mass", [](const LivsicInterval& model) { return livsic_atom_mass(model); })
        .def("measure",
             [](const LivsicInterval& model, long n) { return livsic_measure(model, n); })
        .def("lattice_point", [](const LivsicInterval& model, long n) {
            return livsic_lattice_point(model, n);
        });
    m.def("periodic_donoghue_m", &periodic_donoghue_m, py::arg("a"), py::arg("z"));
}
