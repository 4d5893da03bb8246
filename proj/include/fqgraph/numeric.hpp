#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace fqg {

/// Exact arbitrary-precision integer used for all counts.
using Int = boost::multiprecision::cpp_int;

Int ipow(const Int& base, unsigned exp);
Int binom(unsigned n, unsigned k);

long double to_ld(const Int& v);

/// Exact rational with positive denominator. Not auto-reduced; normalize()
/// divides out the gcd and fixes the sign of the denominator.
struct Rat {
    Int num{0};
    Int den{1};

    static Rat of(Int n, Int d);
    static Rat integer(Int n) { return Rat{std::move(n), 1}; }

    Rat abs() const;
    void normalize();
    long double to_ld() const;
    std::string str() const;
};

/// a/b <=> c/d by cross multiplication (b, d > 0).
int rat_cmp(const Rat& a, const Rat& b);

/// Exact test x^2 <= bound (bound >= 0).
bool square_le(const Int& x, const Int& bound);

/// Exact test lhs <= a + b*sqrt(q) for lhs, a, b >= 0 and q >= 0.
/// Used to compare integers against half-integer powers of q without
/// floating point.
bool le_plus_radical(const Int& lhs, const Int& a, const Int& b, const Int& q);

/// Exact test |x| <= a + b*sqrt(q) for a, b >= 0.
bool abs_le_plus_radical(const Int& x, const Int& a, const Int& b, const Int& q);

/// SplitMix64 mixing function. All pseudorandomness in the project derives
/// from this single counter-based generator so runs reproduce bit-exactly
/// across platforms.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: value i of stream `seed` is splitmix64 applied to
/// the i-th state of the sequence started at `seed`.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t v = splitmix64(state_);
        state_ += 0x9E3779B97F4A7C15ULL;
        return v;
    }

    /// Uniform value in [0, n); n > 0. Plain modulo: the tiny bias is
    /// irrelevant here, determinism is what matters.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    /// Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Derive an independent stream for sub-task `label`.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t label) {
        return splitmix64(seed ^ (0xA5A5A5A5DEADBEEFULL + label * 0x9E3779B97F4A7C15ULL));
    }

private:
    std::uint64_t state_;
};

} // namespace fqg
