#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace buchi {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input documents (CLI exit code 2).
class InputError : public Error {
public:
    using Error::Error;
};

/// Well-formed input on which the requested operation is not defined (CLI exit code 3).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class SyntaxError : public InputError {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& what)
        : InputError("syntax error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class SchemaError : public InputError {
public:
    SchemaError(std::string path, const std::string& what)
        : InputError("schema error at " + path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class InvariantViolation : public InputError {
public:
    using InputError::InputError;
};

class UnknownAtom : public InputError {
public:
    explicit UnknownAtom(std::string name)
        : InputError("unknown atom '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class MissingState : public InputError {
public:
    explicit MissingState(std::string state)
        : InputError("policy has no choice for state '" + state + "'"), state_(std::move(state)) {}
    const std::string& state() const noexcept { return state_; }

private:
    std::string state_;
};

class IllegalAction : public InputError {
public:
    IllegalAction(std::string state, std::string action)
        : InputError("action '" + action + "' is not allowed at state '" + state + "'"),
          state_(std::move(state)), action_(std::move(action)) {}
    const std::string& state() const noexcept { return state_; }
    const std::string& action() const noexcept { return action_; }

private:
    std::string state_;
    std::string action_;
};

class PartialPolicy : public InputError {
public:
    explicit PartialPolicy(std::string state)
        : InputError("policy is undefined at state '" + state + "'"), state_(std::move(state)) {}
    const std::string& state() const noexcept { return state_; }

private:
    std::string state_;
};

class AtomMismatch : public InputError {
public:
    using InputError::InputError;
};

class InvalidLDBA : public InputError {
public:
    using InputError::InputError;
};

class InvalidDiscounts : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class RequiresGammaLessThanOne : public PreconditionError {
public:
    RequiresGammaLessThanOne() : PreconditionError("discounted solve requires gamma < 1") {}
};

class ModeRequiresGammaOne : public PreconditionError {
public:
    ModeRequiresGammaOne() : PreconditionError("bscc-aware estimation requires gamma = 1") {}
};

class RejectingBsccPresent : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Raised when elimination meets a zero pivot on a system that is nonsingular by construction.
class SingularSystem : public Error {
public:
    using Error::Error;
};

} // namespace buchi
