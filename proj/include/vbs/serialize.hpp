#pragma once

// JSON (de)serialization shared by the CLI and the tests.
//
// Conventions: complex numbers are two-element arrays [re, im]; matrices are
// nested row-major arrays of those. Observables:
//   {"n_sites": n, "factors": [m1, ..., mn]}   (3x3 each)
//   {"n_sites": n, "full": m}                  (3^n x 3^n)
// Channels: {"kraus": [m1, ...]}. Models:
//   {"initial_state": "trace" | "normalized_trace" | {"density": m},
//    "hidden": {"rank_one_trace": s} | {"isometry": m} | {"kraus": [...]},
//    "emission": {"kraus_pairs": [...]},
//    "ordering": "causal" | "conventional"}
//
// Malformed structure (wrong types, missing keys, bad complex encoding)
// throws ParseError; structurally sound input whose dimensions are
// inconsistent throws std::invalid_argument from the domain validators.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "vbs/aklt.hpp"
#include "vbs/channel.hpp"
#include "vbs/hqmm.hpp"
#include "vbs/matrix.hpp"

namespace vbs {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const cplx& z);
nlohmann::json to_json(const ComplexMatrix& m);
nlohmann::json to_json(const ObservableSpec& y);
nlohmann::json to_json(const KrausChannel& ch);
nlohmann::json to_json(const HqmmModel& model);

cplx complex_from_json(const nlohmann::json& j);
ComplexMatrix matrix_from_json(const nlohmann::json& j);
ObservableSpec observable_from_json(const nlohmann::json& j);
KrausChannel channel_from_json(const nlohmann::json& j);
HqmmModel model_from_json(const nlohmann::json& j);

// Parse a whole document; wraps the library's parse exceptions into
// ParseError with the line/byte diagnostic preserved.
nlohmann::json parse_document(const std::string& text);

}  // namespace vbs
