#pragma once

#include <stdexcept>
#include <string>

namespace picklab {

// Base class for every error raised by the library. The CLI maps all of
// these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define PICKLAB_DEFINE_ERROR(Name)            \
    class Name : public Error {               \
    public:                                   \
        using Error::Error;                   \
    }

PICKLAB_DEFINE_ERROR(InvalidArgument);
PICKLAB_DEFINE_ERROR(DomainError);
PICKLAB_DEFINE_ERROR(ConvergenceError);
PICKLAB_DEFINE_ERROR(NumericalError);
PICKLAB_DEFINE_ERROR(ZeroKernelError);
PICKLAB_DEFINE_ERROR(NotPsdError);
PICKLAB_DEFINE_ERROR(DiagonalTooLargeError);
PICKLAB_DEFINE_ERROR(DivergenceError);
PICKLAB_DEFINE_ERROR(ArityError);
PICKLAB_DEFINE_ERROR(SingularGramError);
PICKLAB_DEFINE_ERROR(FunctionalSupportError);
PICKLAB_DEFINE_ERROR(ZeroPolynomialError);
PICKLAB_DEFINE_ERROR(GridEmptyError);

#undef PICKLAB_DEFINE_ERROR

// Raised by the JSON readers; carries the file name and byte offset of the
// offending input when known.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t byte, const std::string& what)
        : Error(source + ": byte " + std::to_string(byte) + ": " + what), source_(source), byte_(byte) {}

    const std::string& source() const noexcept { return source_; }
    std::size_t byte() const noexcept { return byte_; }

private:
    std::string source_;
    std::size_t byte_;
};

}  // namespace picklab
