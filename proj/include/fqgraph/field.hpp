#pragma once

#include "fqgraph/errors.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace fqg {

/// Prime modulus q and dimension d; the root of all arithmetic.
/// q is always an odd prime with 3 <= q <= 2^20 and d >= 2.
struct FieldCtx {
    std::uint32_t q{0};
    std::uint32_t d{0};

    /// q^d, checked against 64-bit overflow.
    std::uint64_t volume() const;

    bool operator==(const FieldCtx&) const = default;
};

FieldCtx make_context(std::int64_t q, std::int64_t d);

bool is_prime(std::uint64_t n);

/// A vector in F_q^d with every coordinate reduced into [0, q).
using Point = std::vector<std::uint32_t>;

/// sum_i x_i^2 mod q
std::uint32_t norm_of(const FieldCtx& ctx, const Point& x);

/// sum_i x_i y_i mod q
std::uint32_t dot(const FieldCtx& ctx, const Point& x, const Point& y);

/// componentwise x - y mod q
Point sub(const FieldCtx& ctx, const Point& x, const Point& y);

/// componentwise x + y mod q
Point add(const FieldCtx& ctx, const Point& x, const Point& y);

/// chi(a) = exp(2 pi i a / q)
std::complex<double> additive_character(const FieldCtx& ctx, std::uint64_t a);

/// Lexicographic rank of a point (first coordinate most significant) and its
/// inverse; the indexing used by grid functions and set generators.
std::uint64_t point_rank(const FieldCtx& ctx, const Point& p);
Point rank_point(const FieldCtx& ctx, std::uint64_t rank);

/// A finite subset E of F_q^d. Elements are deduplicated and stored in
/// lexicographic order, so set identity is representation identity.
class PointSet {
public:
    PointSet() = default;

    /// Sorts and deduplicates.
    static PointSet dedup(const FieldCtx& ctx, std::vector<Point> pts);

    /// Sorts; rejects duplicates with FileFormat (used by the text reader).
    static PointSet strict(const FieldCtx& ctx, std::vector<Point> pts);

    const FieldCtx& ctx() const { return ctx_; }
    std::size_t size() const { return pts_.size(); }
    bool empty() const { return pts_.empty(); }
    const Point& operator[](std::size_t i) const { return pts_[i]; }
    const std::vector<Point>& points() const { return pts_; }

    std::optional<std::size_t> index_of(const Point& p) const;
    bool contains(const Point& p) const { return index_of(p).has_value(); }

    bool operator==(const PointSet&) const = default;

private:
    PointSet(FieldCtx ctx, std::vector<Point> pts) : ctx_(ctx), pts_(std::move(pts)) {}
    static void validate(const FieldCtx& ctx, const std::vector<Point>& pts);

    FieldCtx ctx_{};
    std::vector<Point> pts_;
};

/// Text format: first line "q d", then one point per line as d
/// space-separated residues. Duplicate lines are rejected.
PointSet read_point_set(std::istream& in);
PointSet read_point_set_file(const std::string& path);
void write_point_set(std::ostream& out, const PointSet& set);

} // namespace fqg
