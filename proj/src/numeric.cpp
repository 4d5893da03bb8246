#include "fqgraph/numeric.hpp"

#include "fqgraph/errors.hpp"

#include <boost/multiprecision/integer.hpp>

namespace fqg {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotPrime: return "NotPrime";
        case Errc::BadDimension: return "BadDimension";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::ZeroParameter: return "ZeroParameter";
        case Errc::TooLarge: return "TooLarge";
        case Errc::TooLong: return "TooLong";
        case Errc::AsymmetricRelation: return "AsymmetricRelation";
        case Errc::WrongRelation: return "WrongRelation";
        case Errc::NegativeInput: return "NegativeInput";
        case Errc::MissingInput: return "MissingInput";
        case Errc::UnsupportedTheorem: return "UnsupportedTheorem";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::BadRecipe: return "BadRecipe";
        case Errc::FileFormat: return "FileFormat";
        case Errc::BadConfig: return "BadConfig";
    }
    return "Unknown";
}

Int ipow(const Int& base, unsigned exp) {
    Int result = 1;
    Int b = base;
    while (exp > 0) {
        if (exp & 1u) result *= b;
        exp >>= 1u;
        if (exp) b *= b;
    }
    return result;
}

Int binom(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

long double to_ld(const Int& v) { return v.convert_to<long double>(); }

Rat Rat::of(Int n, Int d) {
    if (d == 0) fail(Errc::OutOfRange, "rational with zero denominator");
    Rat r{std::move(n), std::move(d)};
    if (r.den < 0) {
        r.den = -r.den;
        r.num = -r.num;
    }
    return r;
}

Rat Rat::abs() const { return Rat{num < 0 ? Int(-num) : num, den}; }

void Rat::normalize() {
    if (den < 0) {
        den = -den;
        num = -num;
    }
    Int g = boost::multiprecision::gcd(num < 0 ? Int(-num) : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

long double Rat::to_ld() const { return fqg::to_ld(num) / fqg::to_ld(den); }

std::string Rat::str() const {
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

int rat_cmp(const Rat& a, const Rat& b) {
    Int lhs = a.num * b.den;
    Int rhs = b.num * a.den;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

bool square_le(const Int& x, const Int& bound) { return x * x <= bound; }

bool le_plus_radical(const Int& lhs, const Int& a, const Int& b, const Int& q) {
    if (lhs < 0 || a < 0 || b < 0 || q < 0) fail(Errc::NegativeInput, "le_plus_radical wants nonnegative inputs");
    if (lhs <= a) return true;
    Int excess = lhs - a;
    return excess * excess <= b * b * q;
}

bool abs_le_plus_radical(const Int& x, const Int& a, const Int& b, const Int& q) {
    return le_plus_radical(x < 0 ? Int(-x) : x, a, b, q);
}

} // namespace fqg
