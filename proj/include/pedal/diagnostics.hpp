#pragma once

#include <string>
#include <vector>

namespace pedal {

/// One parser/validator finding, printable as `file:line:col: CODE message`.
struct Diagnostic {
    std::string code;
    std::string message;
    int line = 1;
    int col = 1;

    std::string render(const std::string& file) const {
        return file + ":" + std::to_string(line) + ":" + std::to_string(col) +
               ": " + code + " " + message;
    }
};

using Diagnostics = std::vector<Diagnostic>;

namespace diag {
inline constexpr const char* kSyntax = "SYNTAX_ERROR";
inline constexpr const char* kDuplicateRule = "DUPLICATE_RULE";
inline constexpr const char* kMissingRule = "MISSING_RULE";
inline constexpr const char* kUnknownAction = "UNKNOWN_ACTION";
inline constexpr const char* kDuplicateDecl = "DUPLICATE_DECL";
inline constexpr const char* kNameClash = "NAME_CLASH";
inline constexpr const char* kUndeclaredVariable = "UNDECLARED_VARIABLE";
inline constexpr const char* kTypeMismatch = "TYPE_MISMATCH";
inline constexpr const char* kMissingInit = "MISSING_INIT";
inline constexpr const char* kUnknownInit = "INIT_UNKNOWN_VARIABLE";
inline constexpr const char* kDuplicateInit = "DUPLICATE_INIT";
} // namespace diag

} // namespace pedal
