#pragma once

#include <stdexcept>
#include <string>

namespace pkp {

// Input violates a documented precondition (bad parameters, malformed flags).
class parameter_error : public std::invalid_argument {
public:
    explicit parameter_error(const std::string& what) : std::invalid_argument(what) {}
};

// A requested enumeration exceeds its cost cap; the message carries the
// estimated size so the caller can decide whether to raise the cap.
class cap_refusal : public std::runtime_error {
public:
    explicit cap_refusal(const std::string& what) : std::runtime_error(what) {}
};

// A document could not be parsed; the message includes the location.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant failed (exact division left a remainder, a sampler
// hit its retry cap, ...). Indicates a bug, not bad input.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace pkp
