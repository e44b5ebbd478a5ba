#pragma once

#include <stdexcept>
#include <string>

namespace rmlkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
   public:
    DivisionByZero() : Error("inversion of zero field element") {}
};

class InvalidParameter : public Error {
    using Error::Error;
};

/// A sequence that was supposed to be a basis is linearly dependent.
class DependentBasis : public Error {
    using Error::Error;
};

class DimensionMismatch : public Error {
    using Error::Error;
};

/// Operands built over different field towers.
class TowerMismatch : public Error {
   public:
    TowerMismatch() : Error("operands live over different field towers") {}
};

class InvalidDelta : public Error {
    using Error::Error;
};

class NotPrimitiveElement : public Error {
    using Error::Error;
};

class UnsupportedShape : public Error {
    using Error::Error;
};

class DegenerateSubspace : public Error {
    using Error::Error;
};

/// A constructor produced an object that fails its defining property check.
class ConstructionFailed : public Error {
    using Error::Error;
};

/// An exhaustive computation would exceed the configured work budget.
class ResourceBudgetExceeded : public Error {
    using Error::Error;
};

class FormatError : public Error {
    using Error::Error;
};

}  // namespace rmlkit
