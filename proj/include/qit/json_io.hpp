#pragma once

#include <string>

#include <json.hpp>

#include "qit/states.hpp"

namespace qit {

/// Parses a state description. Accepted schemas, selected by "kind":
///   {"kind": "pauli",       "c": [1, c1, c2, c3]}
///   {"kind": "correlation", "r": [[..4x4..]]}
///   {"kind": "dense",       "re": [[..]], "im": [[..]]}   (2x2 or 4x4)
///   {"kind": "werner",      "x": 0.5}
/// Syntax and schema violations throw FormatError with line/field context;
/// physically invalid states throw the matching state error. When
/// expected_qubits is 1 or 2 the parsed state must have that many qubits.
DensityState load_state_json(const std::string& text, int expected_qubits = 0);

DensityState load_state_file(const std::string& path, int expected_qubits = 0);

/// 17 significant digits, trailing zeros trimmed: parses back to exactly the
/// same double, locale-independent. All numeric output goes through this.
std::string format_double(double v);

/// Serializes with format_double applied to every floating-point scalar and
/// object keys in insertion order, so equal inputs give byte-equal output.
std::string dump_json(const nlohmann::ordered_json& doc, int indent = 2);

/// The pinned numerical tolerances, for embedding in output metadata.
nlohmann::ordered_json tolerance_metadata();

}  // namespace qit
