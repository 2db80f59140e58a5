#include "qit/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace qit {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail_at_byte(const std::string& text, std::size_t byte, const std::string& why) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    throw FormatError("JSON syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + why);
}

const json& require_field(const json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end()) {
        throw FormatError(std::string("missing required field \"") + name + "\"");
    }
    return *it;
}

double require_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw FormatError(where + " must be a number");
    return v.get<double>();
}

// Reads an n x n numeric matrix from a JSON array of rows.
template <typename Sink>
void read_matrix(const json& v, const char* name, std::size_t n, Sink&& sink) {
    if (!v.is_array() || v.size() != n) {
        throw FormatError(std::string("field \"") + name + "\" must be a " + std::to_string(n) +
                          "x" + std::to_string(n) + " array");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = v[i];
        if (!row.is_array() || row.size() != n) {
            throw FormatError(std::string("field \"") + name + "\" row " + std::to_string(i) +
                              " must have " + std::to_string(n) + " entries");
        }
        for (std::size_t j = 0; j < n; ++j) {
            sink(i, j,
                 require_number(row[j], std::string("\"") + name + "\"[" + std::to_string(i) +
                                            "][" + std::to_string(j) + "]"));
        }
    }
}

DensityState parse_state(const json& doc, int expected_qubits) {
    if (!doc.is_object()) throw FormatError("state description must be a JSON object");
    const json& kind_field = require_field(doc, "kind");
    if (!kind_field.is_string()) throw FormatError("field \"kind\" must be a string");
    const std::string kind = kind_field.get<std::string>();

    auto check_qubits = [&](int qubits) {
        if (expected_qubits != 0 && qubits != expected_qubits) {
            throw FormatError("expected a " + std::to_string(expected_qubits) +
                              "-qubit state, but \"" + kind + "\" describes " +
                              std::to_string(qubits) + " qubit(s)");
        }
    };

    if (kind == "pauli") {
        check_qubits(1);
        const json& c = require_field(doc, "c");
        if (!c.is_array() || c.size() != 4) {
            throw FormatError("field \"c\" must be an array [1, c1, c2, c3]");
        }
        double v[4];
        for (std::size_t i = 0; i < 4; ++i) {
            v[i] = require_number(c[i], "\"c\"[" + std::to_string(i) + "]");
        }
        if (std::abs(v[0] - 1.0) > tol::hermitian) {
            throw FormatError("field \"c\"[0] must be 1 (identity coefficient)");
        }
        return qubit_from_bloch(v[1], v[2], v[3]);
    }

    if (kind == "correlation") {
        check_qubits(2);
        RealMatrix4 r;
        read_matrix(require_field(doc, "r"), "r", 4,
                    [&](std::size_t i, std::size_t j, double x) { r.at(i, j) = x; });
        return channel_from_correlation(CorrelationMatrix(r));
    }

    if (kind == "dense") {
        const json& re = require_field(doc, "re");
        if (!re.is_array() || (re.size() != 2 && re.size() != 4)) {
            throw FormatError("field \"re\" must be a 2x2 or 4x4 array");
        }
        const std::size_t n = re.size();
        const int qubits = n == 2 ? 1 : 2;
        check_qubits(qubits);
        ComplexMatrix m(n);
        read_matrix(re, "re", n, [&](std::size_t i, std::size_t j, double x) {
            m.at(i, j) += x;
        });
        if (auto it = doc.find("im"); it != doc.end()) {
            read_matrix(*it, "im", n, [&](std::size_t i, std::size_t j, double x) {
                m.at(i, j) += cdouble(0.0, x);
            });
        }
        return DensityState(m, qubits);
    }

    if (kind == "werner") {
        check_qubits(2);
        return werner(require_number(require_field(doc, "x"), "field \"x\""));
    }

    throw FormatError("unknown state kind \"" + kind +
                      "\"; expected \"pauli\", \"correlation\", \"dense\", or \"werner\"");
}

void dump_value(std::string& out, const ordered_json& v, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (v.type()) {
        case ordered_json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, val] : v.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                out += json(key).dump();
                out += ": ";
                dump_value(out, val, indent, depth + 1);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                dump_value(out, v[i], indent, depth + 1);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case ordered_json::value_t::string:
            out += json(v.get<std::string>()).dump();
            return;
        case ordered_json::value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            return;
        case ordered_json::value_t::number_integer:
            out += std::to_string(v.get<std::int64_t>());
            return;
        case ordered_json::value_t::number_unsigned:
            out += std::to_string(v.get<std::uint64_t>());
            return;
        case ordered_json::value_t::number_float: {
            const double d = v.get<double>();
            out += std::isfinite(d) ? format_double(d) : "null";
            return;
        }
        default:
            out += "null";
            return;
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string dump_json(const ordered_json& doc, int indent) {
    std::string out;
    dump_value(out, doc, indent, 0);
    out += "\n";
    return out;
}

ordered_json tolerance_metadata() {
    ordered_json t;
    t["hermitian"] = tol::hermitian;
    t["eig"] = tol::eig;
    t["svd"] = tol::svd;
    t["solve"] = tol::solve;
    t["rank"] = tol::rank;
    t["psd"] = tol::psd;
    t["opt"] = tol::opt;
    return t;
}

DensityState load_state_json(const std::string& text, int expected_qubits) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        std::string why = e.what();
        // nlohmann prefixes "[json.exception.parse_error.N] "; drop it.
        if (const auto pos = why.find("] "); pos != std::string::npos) why = why.substr(pos + 2);
        fail_at_byte(text, byte, why);
    }
    return parse_state(doc, expected_qubits);
}

DensityState load_state_file(const std::string& path, int expected_qubits) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open state file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return load_state_json(buf.str(), expected_qubits);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

}  // namespace qit
