#pragma once

#include <stdexcept>
#include <string>

namespace lambekdm {

// Every failure the library reports deliberately, as opposed to programming
// errors, carries one of these codes so callers can branch without parsing
// message text.
enum class Errc {
    ParseError,          // malformed type, term, or file input
    UnknownWord,         // word missing from the lexicon type map
    MissingInterpretation, // word has a type but no tensor value
    UnknownAtom,         // atom missing from the atom table
    IllTyped,            // term has no type under the typing rules
    LinearityViolation,  // variable used zero or multiple times, or out of order
    InvalidDerivation,   // derivation tree fails rule-shape validation
    DimMismatch,         // operand dimensions disagree
    VarianceMismatch,    // index variance does not fit the operation
    SlotOutOfRange,      // tensor slot index out of range
    ShapeMismatch,       // factor lists or component shapes disagree
    FactorNotFound,      // named space factor absent from a density tensor
    FactorMismatch,      // paired factors disagree in label, subsystem, or kind
    NoContractibleBoundary, // dm_multiply found no matching factor pair
    WeightError,         // mixture weights negative or not normalized
    AsymmetricMetric,    // metric matrix not symmetric within tolerance
    SingularMetric,      // metric not invertible within tolerance
    SingularBasisChange, // basis-change matrix not invertible
    ZeroNorm,            // cosine of a zero-norm vector
    DegenerateFit,       // metric fit left the feasible region
    NoRouteFound,        // permutation search exhausted its length bound
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace lambekdm
