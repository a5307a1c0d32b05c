#pragma once

#include <stdexcept>
#include <string>

namespace stablecone {

// Misuse of the API: mixed variants, foreign grids, malformed specs.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

// Arguments outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Transversal cannot see the orbit of the element (all h_n vanish along it).
class OrbitOutsideDomain : public DomainError {
public:
    explicit OrbitOutsideDomain(const std::string& msg) : DomainError(msg) {}
};

// A run configuration violates a documented precondition (e.g. inadmissible alpha).
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& msg) : std::invalid_argument(msg) {}
};

} // namespace stablecone
