#include "fqgraph/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace fqg {

namespace {
constexpr std::uint32_t kMaxPrime = 1u << 20;
} // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t p = 3; p * p <= n; p += 2) {
        if (n % p == 0) return false;
    }
    return true;
}

std::uint64_t FieldCtx::volume() const {
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < d; ++i) {
        if (v > std::numeric_limits<std::uint64_t>::max() / q)
            fail(Errc::TooLarge, "q^d exceeds 64-bit range");
        v *= q;
    }
    return v;
}

FieldCtx make_context(std::int64_t q, std::int64_t d) {
    if (q < 3 || !is_prime(static_cast<std::uint64_t>(q)))
        fail(Errc::NotPrime, "q must be a prime >= 3, got " + std::to_string(q));
    if (q > kMaxPrime)
        fail(Errc::TooLarge, "q must be <= 2^20, got " + std::to_string(q));
    if (d < 2)
        fail(Errc::BadDimension, "d must be >= 2, got " + std::to_string(d));
    return FieldCtx{static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(d)};
}

std::uint32_t norm_of(const FieldCtx& ctx, const Point& x) {
    if (x.size() != ctx.d) fail(Errc::LengthMismatch, "point has wrong dimension");
    std::uint64_t acc = 0;
    for (std::uint32_t c : x) acc += static_cast<std::uint64_t>(c) * c % ctx.q;
    return static_cast<std::uint32_t>(acc % ctx.q);
}

std::uint32_t dot(const FieldCtx& ctx, const Point& x, const Point& y) {
    if (x.size() != ctx.d || y.size() != ctx.d) fail(Errc::LengthMismatch, "point has wrong dimension");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += static_cast<std::uint64_t>(x[i]) * y[i] % ctx.q;
    return static_cast<std::uint32_t>(acc % ctx.q);
}

Point sub(const FieldCtx& ctx, const Point& x, const Point& y) {
    if (x.size() != ctx.d || y.size() != ctx.d) fail(Errc::LengthMismatch, "point has wrong dimension");
    Point r(ctx.d);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = (x[i] + ctx.q - y[i]) % ctx.q;
    return r;
}

Point add(const FieldCtx& ctx, const Point& x, const Point& y) {
    if (x.size() != ctx.d || y.size() != ctx.d) fail(Errc::LengthMismatch, "point has wrong dimension");
    Point r(ctx.d);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = (x[i] + y[i]) % ctx.q;
    return r;
}

std::complex<double> additive_character(const FieldCtx& ctx, std::uint64_t a) {
    long double angle = 2.0L * std::numbers::pi_v<long double> *
                        static_cast<long double>(a % ctx.q) / static_cast<long double>(ctx.q);
    return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

std::uint64_t point_rank(const FieldCtx& ctx, const Point& p) {
    if (p.size() != ctx.d) fail(Errc::LengthMismatch, "point has wrong dimension");
    std::uint64_t r = 0;
    for (std::uint32_t c : p) r = r * ctx.q + c;
    return r;
}

Point rank_point(const FieldCtx& ctx, std::uint64_t rank) {
    Point p(ctx.d);
    for (std::uint32_t i = ctx.d; i-- > 0;) {
        p[i] = static_cast<std::uint32_t>(rank % ctx.q);
        rank /= ctx.q;
    }
    return p;
}

void PointSet::validate(const FieldCtx& ctx, const std::vector<Point>& pts) {
    for (const Point& p : pts) {
        if (p.size() != ctx.d) fail(Errc::LengthMismatch, "point has wrong dimension");
        for (std::uint32_t c : p)
            if (c >= ctx.q) fail(Errc::OutOfRange, "coordinate not reduced mod q");
    }
}

PointSet PointSet::dedup(const FieldCtx& ctx, std::vector<Point> pts) {
    validate(ctx, pts);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return PointSet(ctx, std::move(pts));
}

PointSet PointSet::strict(const FieldCtx& ctx, std::vector<Point> pts) {
    validate(ctx, pts);
    std::sort(pts.begin(), pts.end());
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end())
        fail(Errc::FileFormat, "duplicate point");
    return PointSet(ctx, std::move(pts));
}

std::optional<std::size_t> PointSet::index_of(const Point& p) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), p);
    if (it != pts_.end() && *it == p) return static_cast<std::size_t>(it - pts_.begin());
    return std::nullopt;
}

PointSet read_point_set(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) fail(Errc::FileFormat, "empty point-set input");
    std::istringstream head(line);
    std::int64_t q = 0, d = 0;
    if (!(head >> q >> d)) fail(Errc::FileFormat, "first line must be 'q d'");
    std::string extra;
    if (head >> extra) fail(Errc::FileFormat, "trailing tokens on header line");
    FieldCtx ctx = make_context(q, d);

    std::vector<Point> pts;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        Point p;
        std::int64_t c;
        while (row >> c) {
            if (c < 0 || c >= static_cast<std::int64_t>(ctx.q))
                fail(Errc::FileFormat, "coordinate out of [0,q) at line " + std::to_string(lineno));
            p.push_back(static_cast<std::uint32_t>(c));
        }
        if (!row.eof()) fail(Errc::FileFormat, "non-numeric token at line " + std::to_string(lineno));
        if (p.size() != ctx.d)
            fail(Errc::FileFormat, "expected " + std::to_string(ctx.d) + " coordinates at line " +
                                       std::to_string(lineno));
        pts.push_back(std::move(p));
    }
    return PointSet::strict(ctx, std::move(pts));
}

PointSet read_point_set_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::FileFormat, "cannot open " + path);
    return read_point_set(in);
}

void write_point_set(std::ostream& out, const PointSet& set) {
    out << set.ctx().q << ' ' << set.ctx().d << '\n';
    for (const Point& p : set.points()) {
        for (std::size_t i = 0; i < p.size(); ++i) out << (i ? " " : "") << p[i];
        out << '\n';
    }
}

} // namespace fqg
