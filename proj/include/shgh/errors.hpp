#pragma once

#include <stdexcept>
#include <string>

namespace shgh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigurationMismatch : Error { using Error::Error; };
struct InvalidTriple : Error { using Error::Error; };
struct BoundExceeded : Error { using Error::Error; };
struct OutOfScope : Error { using Error::Error; };
struct InvalidCluster : Error { using Error::Error; };
struct FieldTooSmall : Error { using Error::Error; };
struct SamplingError : Error { using Error::Error; };
struct HypothesisError : Error { using Error::Error; };
struct TopologyError : Error { using Error::Error; };
struct NoOpThrow : Error { using Error::Error; };
struct CatalogError : Error { using Error::Error; };
struct IncompleteInput : Error { using Error::Error; };
struct RatioOutOfRange : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

struct ParseError : Error {
    std::size_t pos;
    ParseError(const std::string& msg, std::size_t p)
        : Error(msg + " at position " + std::to_string(p)), pos(p) {}
};

}  // namespace shgh
