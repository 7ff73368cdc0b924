#include "minface/error.hpp"

namespace minface {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::NonIntegerExponent: return "NonIntegerExponent";
    case ErrorKind::MultipleVariables: return "MultipleVariables";
    case ErrorKind::InvalidData: return "InvalidData";
    case ErrorKind::DataConversionDegenerate: return "DataConversionDegenerate";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::SingularNeighborhood: return "SingularNeighborhood";
    case ErrorKind::DegenerateAtPoint: return "DegenerateAtPoint";
    case ErrorKind::DegenerateOnInterval: return "DegenerateOnInterval";
    case ErrorKind::FlatPoint: return "FlatPoint";
    case ErrorKind::NotSingular: return "NotSingular";
    case ErrorKind::NotCuspidalEdge: return "NotCuspidalEdge";
    case ErrorKind::DegenerateSingular: return "DegenerateSingular";
    case ErrorKind::ModeUnsupported: return "ModeUnsupported";
    case ErrorKind::Quadrature: return "QuadratureError";
    case ErrorKind::Spec: return "SpecError";
    }
    return "Error";
}

}  // namespace minface
