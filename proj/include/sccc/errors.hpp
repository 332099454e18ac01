#pragma once

#include <stdexcept>
#include <string>

namespace sccc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// gf_core
struct ZeroInversion : Error {
    ZeroInversion() : Error("inversion of the zero element") {}
};
struct FieldTooSmall : Error {
    using Error::Error;
};
struct Singular : Error {
    Singular() : Error("matrix is singular") {}
};
struct BadPolynomial : Error {
    using Error::Error;
};

// secret_sharing / caching_scheme
struct ShapeMismatch : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct InvalidT : Error {
    using Error::Error;
};
struct InvalidCollusion : Error {
    using Error::Error;
};
struct AlignmentError : Error {
    using Error::Error;
};
struct InvalidDemand : Error {
    using Error::Error;
};
struct DecodeFailure : Error {
    using Error::Error;
};

// security_verifier
struct MissingDemand : Error {
    MissingDemand() : Error("post-delivery verification needs a demand vector") {}
};
struct TooManySets : Error {
    using Error::Error;
};
struct TooLarge : Error {
    using Error::Error;
};

// bounds_analyzer
struct DomainError : Error {
    using Error::Error;
};

// container
struct ContainerError : Error {
    using Error::Error;
};

} // namespace sccc
