#ifndef CHAINDYN_ERRORS_HPP
#define CHAINDYN_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chaindyn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Raised by hyperspace operations handed a non-symmetric entourage.
class NonSymmetricEntourage : public Error {
public:
    using Error::Error;
};

/// A construction would exceed the configured vertex or edge budget.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::string construction, std::size_t requested, std::size_t cap)
        : Error("budget exceeded while building " + construction + ": " + std::to_string(requested) +
                " > cap " + std::to_string(cap)),
          construction_(std::move(construction)), requested_(requested), cap_(cap) {}

    const std::string& construction() const noexcept { return construction_; }
    std::size_t requested() const noexcept { return requested_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::string construction_;
    std::size_t requested_;
    std::size_t cap_;
};

class InvalidFactorMap : public Error {
public:
    using Error::Error;
};

/// The point sequence breaks the chain condition at `step` (edge step -> step+1).
class NotAChain : public Error {
public:
    explicit NotAChain(std::size_t step)
        : Error("not a chain: step " + std::to_string(step) + " violates the chain condition"), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class EndpointMismatch : public Error {
public:
    using Error::Error;
};

class NoChain : public Error {
public:
    NoChain(std::size_t from, std::size_t to)
        : Error("no chain from " + std::to_string(from) + " to " + std::to_string(to)), from_(from), to_(to) {}
    std::size_t from() const noexcept { return from_; }
    std::size_t to() const noexcept { return to_; }

private:
    std::size_t from_;
    std::size_t to_;
};

/// Base-chain selection through a hyper chain was impossible.
class SelectionFailed : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent system spec; `location` is a JSON pointer or line:column.
class SpecError : public Error {
public:
    SpecError(std::string location, const std::string& message)
        : Error(location + ": " + message), location_(std::move(location)) {}
    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

} // namespace chaindyn

#endif
