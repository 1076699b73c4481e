#ifndef QHIER_ERRORS_HPP
#define QHIER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qhier {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A label set violates a containment or disjointness requirement.
class LabelError : public Error {
public:
    explicit LabelError(const std::string& msg) : Error(msg) {}
};

/// An input fails a structural invariant (hermiticity, symmetry, shape, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// A size guard tripped before a combinatorial or dimensional blow-up.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& msg) : Error(msg) {}
};

/// Config or data file could not be read, parsed, or matched to its schema.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace qhier

#endif
