#pragma once

#include <stdexcept>
#include <string>

namespace gptlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotPointed : Error { using Error::Error; };
struct NotFullDimensional : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct MalformedProgram : Error { using Error::Error; };
struct BadParameter : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error {
    explicit ValidationError(const std::string& invariant, const std::string& detail = "")
        : Error("validation failed: " + invariant + (detail.empty() ? "" : " (" + detail + ")")),
          invariant(invariant) {}
    std::string invariant;
};
struct Degenerate : Error { using Error::Error; };
struct NotTransitive : Error { using Error::Error; };
struct NotDistinguishable : Error { using Error::Error; };
struct ActionNotClosed : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct ImproperEffect : Error { using Error::Error; };
struct InternalCheckFailure : Error { using Error::Error; };

}  // namespace gptlab
