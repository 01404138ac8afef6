/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#ifndef WINEX_ERROR_HPP
#define WINEX_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace winex {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A predicate references a variable, track or symbol the theory does not have.
class MalformedPredicate : public Error {
public:
    using Error::Error;
};

/// Operands of a construction come from different theories or lookbacks.
class TheoryMismatch : public Error {
public:
    using Error::Error;
};

/// The theory cannot perform the requested operation (satisfiability, enumeration, ...).
class CapabilityMissing : public Error {
public:
    using Error::Error;
};

/// A configured budget (minterms, out-degree, search nodes) was exhausted.
class ResourceExhausted : public Error {
public:
    using Error::Error;
};

/// A letter does not belong to the theory's domain.
class InputTypeError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Text could not be parsed. Line and column are 1-based.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A guarded formula leaves the supported fragment (unguarded or illegal quantifier).
class FragmentViolation : public Error {
public:
    using Error::Error;
};

/// A formula uses a variable that is neither bound nor designated.
class ScopeError : public Error {
public:
    using Error::Error;
};

/// A formula assignment maps a variable outside the admissible positions.
class AssignmentError : public Error {
public:
    using Error::Error;
};

/// An automaton does not have the shape of an input specifier.
class SpecifierError : public Error {
public:
    using Error::Error;
};

} // namespace winex

#endif // WINEX_ERROR_HPP
