#pragma once

#include <stdexcept>
#include <string>

namespace archopt {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownElement : std::runtime_error {
    explicit UnknownElement(const std::string& id)
        : std::runtime_error("unknown element: " + id) {}
};

struct MissingLink : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnresolvableBehavior : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidModel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfBounds : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoEligibleTarget : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyIndexSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingRuns : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace archopt
