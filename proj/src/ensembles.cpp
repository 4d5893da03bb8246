#include "fqgraph/ensembles.hpp"

#include "fqgraph/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fqg {

namespace {

constexpr std::uint64_t kEnumerationCap = 1ull << 24; // index shuffles and scans

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(Errc::BadRecipe, "bad integer for " + what + ": '" + s + "'");
    }
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(Errc::BadRecipe, "bad number for " + what + ": '" + s + "'");
    }
}

Point parse_point(const std::string& s) {
    Point p;
    for (const std::string& c : split(s, ',')) p.push_back(static_cast<std::uint32_t>(parse_u64(c, "coordinate")));
    return p;
}

} // namespace

SetRecipe parse_recipe(const std::string& text) {
    if (text.empty()) fail(Errc::BadRecipe, "empty recipe");
    std::vector<std::string> parts = split(text, ':');
    SetRecipe r;
    const std::string& head = parts[0];

    std::size_t arg_start = 1;
    if (head == "full") {
        r.kind = SetRecipe::Kind::Full;
    } else if (head == "rand") {
        r.kind = SetRecipe::Kind::RandomDensity;
    } else if (head == "randn") {
        r.kind = SetRecipe::Kind::RandomSize;
    } else if (head == "sphere") {
        r.kind = SetRecipe::Kind::Sphere;
    } else if (head == "prod") {
        r.kind = SetRecipe::Kind::Product;
    } else if (head == "union") {
        r.kind = SetRecipe::Kind::SphereUnion;
    } else if (head == "affine") {
        r.kind = SetRecipe::Kind::AffineSubspace;
    } else if (head == "file") {
        r.kind = SetRecipe::Kind::File;
        if (parts.size() < 2) fail(Errc::BadRecipe, "file recipe needs a path");
        r.path = parts[1];
        arg_start = 2;
    } else {
        fail(Errc::BadRecipe, "unknown recipe '" + head + "'");
    }

    for (std::size_t i = arg_start; i < parts.size(); ++i) {
        std::vector<std::string> kv = split(parts[i], '=');
        if (kv.size() != 2) fail(Errc::BadRecipe, "expected key=value, got '" + parts[i] + "'");
        const std::string& key = kv[0];
        const std::string& val = kv[1];
        if (key == "seed") {
            r.seed = parse_u64(val, "seed");
            r.seed_explicit = true;
        } else if (key == "p") {
            r.p = parse_double(val, "p");
        } else if (key == "m") {
            r.m = parse_u64(val, "m");
        } else if (key == "t") {
            r.t = static_cast<std::uint32_t>(parse_u64(val, "t"));
        } else if (key == "A") {
            r.product_values.clear();
            for (const std::string& c : split(val, ','))
                r.product_values.push_back(static_cast<std::uint32_t>(parse_u64(c, "A")));
        } else if (key == "shift") {
            r.shift = parse_point(val);
        } else if (key == "basis") {
            r.basis.clear();
            for (const std::string& b : split(val, ';')) r.basis.push_back(parse_point(b));
        } else if (key == "translates") {
            r.translates.clear();
            for (const std::string& b : split(val, ';')) r.translates.push_back(parse_point(b));
        } else {
            fail(Errc::BadRecipe, "unknown recipe key '" + key + "'");
        }
    }
    return r;
}

std::string recipe_to_string(const SetRecipe& r) {
    std::ostringstream out;
    switch (r.kind) {
        case SetRecipe::Kind::Full: out << "full"; break;
        case SetRecipe::Kind::RandomDensity: out << "rand:p=" << r.p; break;
        case SetRecipe::Kind::RandomSize: out << "randn:m=" << r.m; break;
        case SetRecipe::Kind::Sphere: out << "sphere:t=" << r.t; break;
        case SetRecipe::Kind::Product: {
            out << "prod:A=";
            for (std::size_t i = 0; i < r.product_values.size(); ++i)
                out << (i ? "," : "") << r.product_values[i];
            break;
        }
        case SetRecipe::Kind::AffineSubspace: out << "affine"; break;
        case SetRecipe::Kind::SphereUnion: out << "union:t=" << r.t; break;
        case SetRecipe::Kind::File: out << "file:" << r.path; break;
    }
    out << ":seed=" << r.seed;
    return out.str();
}

namespace {

std::uint64_t checked_enum_volume(const FieldCtx& ctx) {
    std::uint64_t n = ctx.volume();
    if (n > kEnumerationCap) fail(Errc::TooLarge, "recipe requires enumerating q^d > 2^24 points");
    return n;
}

PointSet full_set(const FieldCtx& ctx) {
    std::uint64_t n = checked_enum_volume(ctx);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t r = 0; r < n; ++r) pts.push_back(rank_point(ctx, r));
    return PointSet::dedup(ctx, std::move(pts));
}

PointSet random_density(const FieldCtx& ctx, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) fail(Errc::BadRecipe, "density p must be in [0, 1]");
    std::uint64_t n = checked_enum_volume(ctx);
    Rng rng(seed);
    // keep rank r iff u < p in 53-bit precision
    std::vector<Point> pts;
    std::size_t count = 0;
    for (std::uint64_t r = 0; r < n; ++r) {
        if (rng.unit() < p) {
            pts.push_back(rank_point(ctx, r));
            ++count;
        }
    }
    // 5-sigma binomial sanity check on |E|
    double mean = p * static_cast<double>(n);
    double sigma = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
    if (sigma > 0 && std::abs(static_cast<double>(count) - mean) > 5.0 * sigma)
        fail(Errc::BadRecipe, "random_density produced a set size beyond 5 sigma; generator misuse");
    return PointSet::dedup(ctx, std::move(pts));
}

PointSet random_size(const FieldCtx& ctx, std::uint64_t m, std::uint64_t seed) {
    std::uint64_t n = checked_enum_volume(ctx);
    if (m > n) fail(Errc::BadRecipe, "requested more points than q^d");
    std::vector<std::uint64_t> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0ull);
    Rng rng(seed);
    // partial Fisher-Yates: the first m entries are the sample
    for (std::uint64_t i = 0; i < m; ++i) {
        std::uint64_t j = i + rng.below(n - i);
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(m));
    for (std::uint64_t i = 0; i < m; ++i) pts.push_back(rank_point(ctx, idx[static_cast<std::size_t>(i)]));
    return PointSet::dedup(ctx, std::move(pts));
}

PointSet product_set(const FieldCtx& ctx, const std::vector<std::uint32_t>& values) {
    if (values.empty()) fail(Errc::BadRecipe, "product recipe needs a nonempty A");
    for (std::uint32_t v : values)
        if (v >= ctx.q) fail(Errc::BadRecipe, "product value not reduced mod q");
    std::vector<std::uint32_t> a = values;
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    double total = std::pow(static_cast<double>(a.size()), ctx.d);
    if (total > static_cast<double>(kEnumerationCap)) fail(Errc::TooLarge, "product set too large");
    std::vector<Point> pts;
    Point p(ctx.d, a[0]);
    std::vector<std::size_t> odo(ctx.d, 0);
    while (true) {
        for (std::uint32_t i = 0; i < ctx.d; ++i) p[i] = a[odo[i]];
        pts.push_back(p);
        std::uint32_t i = ctx.d;
        bool done = true;
        while (i > 0) {
            --i;
            if (++odo[i] < a.size()) {
                done = false;
                break;
            }
            odo[i] = 0;
            if (i == 0) break;
        }
        if (done) break;
    }
    return PointSet::dedup(ctx, std::move(pts));
}

PointSet affine_subspace(const FieldCtx& ctx, const std::vector<Point>& basis, const Point& shift) {
    if (basis.empty()) fail(Errc::BadRecipe, "affine recipe needs a basis");
    Point sh = shift.empty() ? Point(ctx.d, 0) : shift;
    if (sh.size() != ctx.d) fail(Errc::BadRecipe, "shift has wrong dimension");
    for (const Point& b : basis)
        if (b.size() != ctx.d) fail(Errc::BadRecipe, "basis vector has wrong dimension");

    // rank check over F_q by Gaussian elimination
    std::vector<std::vector<std::uint32_t>> rows;
    for (const Point& b : basis) rows.emplace_back(b.begin(), b.end());
    std::size_t rank = 0;
    for (std::uint32_t col = 0; col < ctx.d && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        // normalize and eliminate below
        std::uint64_t inv = 1;
        for (std::uint64_t cand = 1; cand < ctx.q; ++cand)
            if (cand * rows[rank][col] % ctx.q == 1) {
                inv = cand;
                break;
            }
        for (std::uint32_t c = 0; c < ctx.d; ++c)
            rows[rank][c] = static_cast<std::uint32_t>(rows[rank][c] * inv % ctx.q);
        for (std::size_t rr = 0; rr < rows.size(); ++rr) {
            if (rr == rank || rows[rr][col] == 0) continue;
            std::uint64_t factor = rows[rr][col];
            for (std::uint32_t c = 0; c < ctx.d; ++c)
                rows[rr][c] = static_cast<std::uint32_t>(
                    (rows[rr][c] + (ctx.q - factor % ctx.q) * rows[rank][c]) % ctx.q);
        }
        ++rank;
    }
    if (rank != basis.size()) fail(Errc::BadRecipe, "basis vectors are dependent");

    double total = std::pow(static_cast<double>(ctx.q), basis.size());
    if (total > static_cast<double>(kEnumerationCap)) fail(Errc::TooLarge, "affine subspace too large");
    std::vector<Point> pts;
    std::vector<std::uint32_t> coeff(basis.size(), 0);
    while (true) {
        Point p = sh;
        for (std::size_t b = 0; b < basis.size(); ++b)
            for (std::uint32_t i = 0; i < ctx.d; ++i)
                p[i] = static_cast<std::uint32_t>((p[i] + static_cast<std::uint64_t>(coeff[b]) * basis[b][i]) % ctx.q);
        pts.push_back(std::move(p));
        std::size_t i = coeff.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (++coeff[i] < ctx.q) {
                done = false;
                break;
            }
            coeff[i] = 0;
            if (i == 0) break;
        }
        if (done) break;
    }
    return PointSet::dedup(ctx, std::move(pts));
}

PointSet sphere_union(const FieldCtx& ctx, std::uint32_t t, const std::vector<Point>& translates) {
    PointSet st = sphere(ctx, t % ctx.q);
    std::vector<Point> pts;
    std::vector<Point> shifts = translates.empty() ? std::vector<Point>{Point(ctx.d, 0)} : translates;
    for (const Point& v : shifts) {
        if (v.size() != ctx.d) fail(Errc::BadRecipe, "translate has wrong dimension");
        for (const Point& x : st.points()) pts.push_back(add(ctx, x, v));
    }
    return PointSet::dedup(ctx, std::move(pts));
}

} // namespace

PointSet generate_set(const FieldCtx& ctx, const SetRecipe& recipe) {
    switch (recipe.kind) {
        case SetRecipe::Kind::Full: return full_set(ctx);
        case SetRecipe::Kind::RandomDensity: return random_density(ctx, recipe.p, recipe.seed);
        case SetRecipe::Kind::RandomSize: return random_size(ctx, recipe.m, recipe.seed);
        case SetRecipe::Kind::Sphere: return sphere(ctx, recipe.t % ctx.q);
        case SetRecipe::Kind::Product: return product_set(ctx, recipe.product_values);
        case SetRecipe::Kind::AffineSubspace: return affine_subspace(ctx, recipe.basis, recipe.shift);
        case SetRecipe::Kind::SphereUnion: return sphere_union(ctx, recipe.t, recipe.translates);
        case SetRecipe::Kind::File: {
            PointSet s = read_point_set_file(recipe.path);
            if (!(s.ctx() == ctx)) fail(Errc::BadRecipe, "file context does not match requested (q, d)");
            return s;
        }
    }
    fail(Errc::BadRecipe, "bad recipe kind");
}

PointSet generate_set(const FieldCtx& ctx, const std::string& recipe, std::uint64_t default_seed) {
    SetRecipe r = parse_recipe(recipe);
    if (!r.seed_explicit) r.seed = default_seed;
    return generate_set(ctx, r);
}

} // namespace fqg
