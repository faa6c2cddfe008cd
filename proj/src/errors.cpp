#include "lambekdm/errors.hpp"

namespace lambekdm {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownWord: return "UnknownWord";
    case Errc::MissingInterpretation: return "MissingInterpretation";
    case Errc::UnknownAtom: return "UnknownAtom";
    case Errc::IllTyped: return "IllTyped";
    case Errc::LinearityViolation: return "LinearityViolation";
    case Errc::InvalidDerivation: return "InvalidDerivation";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::VarianceMismatch: return "VarianceMismatch";
    case Errc::SlotOutOfRange: return "SlotOutOfRange";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::FactorNotFound: return "FactorNotFound";
    case Errc::FactorMismatch: return "FactorMismatch";
    case Errc::NoContractibleBoundary: return "NoContractibleBoundary";
    case Errc::WeightError: return "WeightError";
    case Errc::AsymmetricMetric: return "AsymmetricMetric";
    case Errc::SingularMetric: return "SingularMetric";
    case Errc::SingularBasisChange: return "SingularBasisChange";
    case Errc::ZeroNorm: return "ZeroNorm";
    case Errc::DegenerateFit: return "DegenerateFit";
    case Errc::NoRouteFound: return "NoRouteFound";
    }
    return "Error";
}

} // namespace lambekdm
