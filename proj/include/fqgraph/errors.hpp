#pragma once

#include <stdexcept>
#include <string>

namespace fqg {

enum class Errc {
    NotPrime,
    BadDimension,
    LengthMismatch,
    ZeroParameter,
    TooLarge,
    TooLong,
    AsymmetricRelation,
    WrongRelation,
    NegativeInput,
    MissingInput,
    UnsupportedTheorem,
    OutOfRange,
    BadRecipe,
    FileFormat,
    BadConfig,
};

const char* errc_name(Errc c);

/// Library-wide exception carrying a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace fqg
