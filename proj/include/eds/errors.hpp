#pragma once

#include <stdexcept>
#include <string>

namespace eds {

// Base class for all library errors.
class EdsError : public std::runtime_error {
public:
    explicit EdsError(const std::string& what) : std::runtime_error(what) {}
};

// --- curve construction / group law ---
struct SingularCurve : EdsError {
    using EdsError::EdsError;
};
struct PointNotOnCurve : EdsError {
    using EdsError::EdsError;
};
struct TorsionPoint : EdsError {
    using EdsError::EdsError;
};
struct BadReductionPrime : EdsError {
    using EdsError::EdsError;
};
struct SingularReduction : EdsError {
    using EdsError::EdsError;
};

// --- p-adic valuations ---
struct ZeroInput : EdsError {
    using EdsError::EdsError;
};
struct OddNegativeXValuation : EdsError {
    using EdsError::EdsError;
};
struct NotInKernelOfReduction : EdsError {
    using EdsError::EdsError;
};

// --- beta sequence ---
struct NonIntegralBeta : EdsError {
    using EdsError::EdsError;
};
struct ComponentOrderSearchExceeded : EdsError {
    using EdsError::EdsError;
};
struct HypothesisNotMet : EdsError {
    using EdsError::EdsError;
};
struct NoModularInverse : EdsError {
    using EdsError::EdsError;
};

// --- periodicity ---
struct BoundExceedsCap : EdsError {
    using EdsError::EdsError;
};

// --- characters ---
struct InvalidDiscriminant : EdsError {
    using EdsError::EdsError;
};
struct CompositeModulus : EdsError {
    using EdsError::EdsError;
};

// --- predicates / factoring ---
struct FactoringBudgetExceeded : EdsError {
    using EdsError::EdsError;
};
struct FiberDegenerate : EdsError {
    using EdsError::EdsError;
};

// --- real-analytic machinery ---
struct PrecisionLoss : EdsError {
    using EdsError::EdsError;
};
struct NoConsistentFit : EdsError {
    using EdsError::EdsError;
};
struct AmbiguousFloor : EdsError {
    using EdsError::EdsError;
};

// --- configuration / CLI ---
struct ConfigError : EdsError {
    using EdsError::EdsError;
};

}  // namespace eds
