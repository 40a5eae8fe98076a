#pragma once

#include "dismap/circuit.hpp"

#include <filesystem>
#include <string>

namespace dismap {

/// Syntax or semantic error in OpenQASM input, with 1-based source position.
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int col)
        : Error(message + " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")"),
          line_(line), col_(col) {}

    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int col() const { return col_; }

private:
    int line_;
    int col_;
};

/// Parses an OpenQASM 2.0 subset: one qreg, optional creg, the supported
/// gate set, measure and barrier. No user-defined gates, no classical control.
Circuit parse_qasm(const std::string& text, const std::string& name = "");

Circuit parse_qasm_file(const std::filesystem::path& path);

/// Serializes a circuit back to OpenQASM 2.0. Angles are printed with enough
/// digits that parse_qasm(emit_qasm(c)) reproduces c exactly.
std::string emit_qasm(const Circuit& circuit);

}  // namespace dismap
