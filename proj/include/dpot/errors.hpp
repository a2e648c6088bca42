#pragma once

#include <stdexcept>
#include <string>

namespace dpot {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInterval : Error {
    using Error::Error;
};
struct NonFinite : Error {
    using Error::Error;
};
struct ZeroMeasure : Error {
    using Error::Error;
};
struct NotTransient : Error {
    using Error::Error;
};
struct WrongClass : Error {
    using Error::Error;
};
struct InconclusiveVerdict : Error {
    using Error::Error;
};
struct NotSubharmonic : Error {
    using Error::Error;
};
struct NonIntegrable : Error {
    using Error::Error;
};
struct Inadmissible : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct HypothesisFails : Error {
    using Error::Error;
};
struct NotNatural : Error {
    using Error::Error;
};
struct VanishingG : Error {
    using Error::Error;
};
struct Singular : Error {
    using Error::Error;
};
struct UnsupportedSpec : Error {
    using Error::Error;
};
struct UnsupportedMeasure : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace dpot
