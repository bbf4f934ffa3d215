#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace freelunch {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or mismatched input (dimension mismatch, unknown asset, ...).
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(what) {}
};

/// An operation's precondition does not hold. Carries every violated
/// condition, not only the first one.
class PreconditionError : public Error {
public:
    explicit PreconditionError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }
    std::vector<std::string> violations_;
};

/// Broken internal invariant. Seeing one of these means a bug in the library.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace freelunch
