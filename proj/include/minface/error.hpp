#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace minface {

enum class ErrorKind {
    DivisionByZero,
    Domain,
    Syntax,
    NonIntegerExponent,
    MultipleVariables,
    InvalidData,
    DataConversionDegenerate,
    SingularPoint,
    SingularNeighborhood,
    DegenerateAtPoint,
    DegenerateOnInterval,
    FlatPoint,
    NotSingular,
    NotCuspidalEdge,
    DegenerateSingular,
    ModeUnsupported,
    Quadrature,
    Spec,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library. `offset` is a byte offset into the
// source text for parse/eval errors; `location` is the curve parameter (or
// other scalar position) an error refers to, when there is one.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what,
          std::optional<std::size_t> offset = std::nullopt,
          std::optional<double> location = std::nullopt)
        : std::runtime_error(what), kind_(kind), offset_(offset), location_(location) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> offset() const noexcept { return offset_; }
    std::optional<double> location() const noexcept { return location_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> offset_;
    std::optional<double> location_;
};

}  // namespace minface
