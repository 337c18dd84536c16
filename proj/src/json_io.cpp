#include "herglotz/json_io.hpp"

#include <json.hpp>

#include "herglotz/errors.hpp"

namespace herglotz {

using nlohmann::json;

namespace {

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const char* where) {
    if (!j.is_object()) throw BadInput(std::string(where) + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw BadInput(std::string(where) + ": unknown field \"" + it.key() + "\"");
    }
}

double as_number(const json& j, const char* where) {
    if (!j.is_number()) throw BadInput(std::string(where) + ": expected a number");
    return j.get<double>();
}

std::vector<double> as_number_array(const json& j, const char* where) {
    if (!j.is_array()) throw BadInput(std::string(where) + ": expected an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(as_number(v, where));
    return out;
}

CMat matrix_from(const json& j, const char* where) {
    if (!j.is_array() || j.empty()) throw BadInput(std::string(where) + ": expected a matrix");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw BadInput(std::string(where) + ": empty matrix row");
    CMat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw BadInput(std::string(where) + ": ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& e = j[i][c];
            if (!e.is_array() || e.size() != 2)
                throw BadInput(std::string(where) + ": entries must be [re, im] pairs");
            m(i, c) = cplx(as_number(e[0], where), as_number(e[1], where));
        }
    }
    return m;
}

json matrix_to(const CMat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(i, c).real(), m(i, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw BadInput("malformed JSON");
    return j;
}

Measure measure_from(const json& j) {
    require_keys(j, {"atoms", "density", "tail"}, "measure");
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        if (!j["atoms"].is_array()) throw BadInput("measure.atoms: expected an array");
        for (const auto& a : j["atoms"]) {
            require_keys(a, {"x", "m"}, "measure.atoms[]");
            if (!a.contains("x") || !a.contains("m"))
                throw BadInput("measure.atoms[]: needs both x and m");
            atoms.push_back({as_number(a["x"], "atom.x"), as_number(a["m"], "atom.m")});
        }
    }
    std::vector<double> grid, values;
    if (j.contains("density")) {
        const auto& d = j["density"];
        require_keys(d, {"grid", "values"}, "measure.density");
        if (!d.contains("grid") || !d.contains("values"))
            throw BadInput("measure.density: needs grid and values");
        grid = as_number_array(d["grid"], "density.grid");
        values = as_number_array(d["values"], "density.values");
    }
    Tail tail;
    if (j.contains("tail")) {
        const auto& t = j["tail"];
        if (t.is_string()) {
            const std::string s = t.get<std::string>();
            if (s == "none")
                tail.kind = TailKind::None;
            else if (s == "lebesgue_over_pi")
                tail.kind = TailKind::LebesgueOverPi;
            else
                throw BadInput("measure.tail: unknown tag \"" + s + "\"");
        } else {
            require_keys(t, {"power"}, "measure.tail");
            if (!t.contains("power")) throw BadInput("measure.tail: needs power");
            tail.kind = TailKind::Power;
            tail.exponent = as_number(t["power"], "tail.power");
        }
    }
    return Measure(std::move(atoms), std::move(grid), std::move(values), tail);
}

json measure_to(const Measure& m) {
    json j = json::object();
    json atoms = json::array();
    for (const Atom& a : m.atoms()) atoms.push_back(json{{"x", a.x}, {"m", a.m}});
    j["atoms"] = std::move(atoms);
    if (m.has_density()) j["density"] = json{{"grid", m.grid()}, {"values", m.values()}};
    switch (m.tail().kind) {
        case TailKind::None: j["tail"] = "none"; break;
        case TailKind::LebesgueOverPi: j["tail"] = "lebesgue_over_pi"; break;
        case TailKind::Power: j["tail"] = json{{"power", m.tail().exponent}}; break;
    }
    return j;
}

} // namespace

Measure measure_from_json(const std::string& text) { return measure_from(parse(text)); }

std::string measure_to_json(const Measure& m) { return measure_to(m).dump(); }

JUnitary junitary_from_json(const std::string& text) {
    const json j = parse(text);
    require_keys(j, {"A11", "A12", "A21", "A22"}, "junitary");
    for (const char* k : {"A11", "A12", "A21", "A22"})
        if (!j.contains(k)) throw BadInput(std::string("junitary: missing ") + k);
    return JUnitary(matrix_from(j["A11"], "A11"), matrix_from(j["A12"], "A12"),
                    matrix_from(j["A21"], "A21"), matrix_from(j["A22"], "A22"));
}

std::string junitary_to_json(const JUnitary& a) {
    json j{{"A11", matrix_to(a.a11())}, {"A12", matrix_to(a.a12())},
           {"A21", matrix_to(a.a21())}, {"A22", matrix_to(a.a22())}};
    return j.dump();
}

PerturbationTriple triple_from_json(const std::string& text) {
    const json j = parse(text);
    require_keys(j, {"H0", "K", "L"}, "triple");
    for (const char* k : {"H0", "K", "L"})
        if (!j.contains(k)) throw BadInput(std::string("triple: missing ") + k);
    return PerturbationTriple(matrix_from(j["H0"], "H0"), matrix_from(j["K"], "K"),
                              matrix_from(j["L"], "L"));
}

std::string triple_to_json(const PerturbationTriple& t) {
    json j{{"H0", matrix_to(t.h0)}, {"K", matrix_to(t.k)}, {"L", matrix_to(t.l)}};
    return j.dump();
}

MatrixMeasure matrix_measure_from_json(const std::string& text) {
    const json j = parse(text);
    require_keys(j, {"dimension", "atoms"}, "matrix_measure");
    if (!j.contains("dimension") || !j.contains("atoms"))
        throw BadInput("matrix_measure: needs dimension and atoms");
    const std::size_t dim = static_cast<std::size_t>(as_number(j["dimension"], "dimension"));
    std::vector<MatrixAtom> atoms;
    for (const auto& a : j["atoms"]) {
        require_keys(a, {"x", "w"}, "matrix_measure.atoms[]");
        if (!a.contains("x") || !a.contains("w"))
            throw BadInput("matrix_measure.atoms[]: needs x and w");
        atoms.push_back({as_number(a["x"], "atom.x"), matrix_from(a["w"], "atom.w")});
    }
    return MatrixMeasure(dim, std::move(atoms));
}

std::string matrix_measure_to_json(const MatrixMeasure& m) {
    json atoms = json::array();
    for (const MatrixAtom& a : m.atoms())
        atoms.push_back(json{{"x", a.x}, {"w", matrix_to(a.w)}});
    json j{{"dimension", m.dim()}, {"atoms", std::move(atoms)}};
    return j.dump();
}

std::string dilation_to_json(const Dilation& d) {
    json j{{"eigenvalues", d.eigenvalues}, {"K", matrix_to(d.k)}};
    return j.dump();
}

ModelInput model_from_json(const std::string& text) {
    const json j = parse(text);
    require_keys(j, {"measure", "alpha"}, "model");
    if (!j.contains("measure") || !j.contains("alpha"))
        throw BadInput("model: needs measure and alpha");
    return {measure_from(j["measure"]), as_number(j["alpha"], "alpha")};
}

} // namespace herglotz
