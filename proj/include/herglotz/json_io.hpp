#pragma once

#include <string>

#include "herglotz/herglotz.hpp"
#include "herglotz/measure.hpp"
#include "herglotz/perturbation.hpp"

namespace herglotz {

// Scalar measure schema (exact field names, unknown fields rejected):
//   {"atoms":[{"x":float,"m":float}],
//    "density":{"grid":[...],"values":[...]},
//    "tail":"none"|"lebesgue_over_pi"|{"power":float}}
Measure measure_from_json(const std::string& text);
std::string measure_to_json(const Measure& m);

// Complex matrices are row-major arrays of [re, im] pairs.
// J-unitary: {"A11":[[..]],"A12":[[..]],"A21":[[..]],"A22":[[..]]}
JUnitary junitary_from_json(const std::string& text);
std::string junitary_to_json(const JUnitary& a);

// Perturbation triple: {"H0":[[..]],"K":[[..]],"L":[[..]]}
PerturbationTriple triple_from_json(const std::string& text);
std::string triple_to_json(const PerturbationTriple& t);

// Matrix measure: {"dimension":k,"atoms":[{"x":float,"w":[[..]]}]}
MatrixMeasure matrix_measure_from_json(const std::string& text);
std::string matrix_measure_to_json(const MatrixMeasure& m);

// Dilation export: {"eigenvalues":[...],"K":[[..]]}
std::string dilation_to_json(const Dilation& d);

// Donoghue model input: {"measure":<measure schema>,"alpha":float}
struct ModelInput {
    Measure measure;
    double alpha;
};
ModelInput model_from_json(const std::string& text);

} // namespace herglotz
