#include "fqgraph/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fqg {

namespace {

constexpr std::uint64_t kSmoothingCap = 10'000; // dense q^d x q^d matrix

std::uint64_t checked_volume(const FieldCtx& ctx, std::uint64_t cap, const char* what) {
    std::uint64_t n = ctx.volume();
    if (n > cap) fail(Errc::TooLarge, std::string(what) + ": q^d = " + std::to_string(n) + " exceeds cap");
    return n;
}

} // namespace

GridFunction::GridFunction(const FieldCtx& ctx, Kind kind) : ctx_(ctx), kind_(kind) {
    std::uint64_t n = ctx.volume();
    if (n > (1ull << 26)) fail(Errc::TooLarge, "grid function with q^d > 2^26");
    if (kind_ == Kind::Integer)
        ivals_.assign(static_cast<std::size_t>(n), 0);
    else
        cvals_.assign(static_cast<std::size_t>(n), {0.0, 0.0});
}

GridFunction GridFunction::zeros_int(const FieldCtx& ctx) { return GridFunction(ctx, Kind::Integer); }
GridFunction GridFunction::zeros_complex(const FieldCtx& ctx) { return GridFunction(ctx, Kind::Complex); }

GridFunction GridFunction::indicator(const PointSet& set) {
    GridFunction g(set.ctx(), Kind::Integer);
    for (const Point& p : set.points()) g.ivals_[point_rank(set.ctx(), p)] = 1;
    return g;
}

std::size_t GridFunction::size() const {
    return kind_ == Kind::Integer ? ivals_.size() : cvals_.size();
}

std::vector<std::int64_t>& GridFunction::ints() {
    if (kind_ != Kind::Integer) fail(Errc::OutOfRange, "grid function is not integer-tagged");
    return ivals_;
}
const std::vector<std::int64_t>& GridFunction::ints() const {
    if (kind_ != Kind::Integer) fail(Errc::OutOfRange, "grid function is not integer-tagged");
    return ivals_;
}
std::vector<std::complex<double>>& GridFunction::cplx() {
    if (kind_ != Kind::Complex) fail(Errc::OutOfRange, "grid function is not complex-tagged");
    return cvals_;
}
const std::vector<std::complex<double>>& GridFunction::cplx() const {
    if (kind_ != Kind::Complex) fail(Errc::OutOfRange, "grid function is not complex-tagged");
    return cvals_;
}

std::complex<double> GridFunction::at(std::size_t i) const {
    if (kind_ == Kind::Integer) return {static_cast<double>(ivals_[i]), 0.0};
    return cvals_[i];
}

Int GridFunction::sum() const {
    Int s = 0;
    for (std::int64_t v : ints()) s += v;
    return s;
}

Int GridFunction::sum_squares() const {
    Int s = 0;
    for (std::int64_t v : ints()) s += Int(v) * v;
    return s;
}

PointSet sphere(const FieldCtx& ctx, std::uint32_t t) {
    std::uint64_t n = checked_volume(ctx, 1ull << 26, "sphere");
    t %= ctx.q;
    std::vector<Point> pts;
    Point p(ctx.d, 0);
    for (std::uint64_t r = 0; r < n; ++r) {
        if (norm_of(ctx, p) == t) pts.push_back(p);
        // odometer increment in lexicographic order
        for (std::uint32_t i = ctx.d; i-- > 0;) {
            if (++p[i] < ctx.q) break;
            p[i] = 0;
        }
    }
    return PointSet::dedup(ctx, std::move(pts));
}

namespace {

/// One length-q transform along each axis. kernel[a] is applied as
/// out[m] = sum_j in[j] * kernel[(j*m) % q].
void axis_transforms(const FieldCtx& ctx, std::vector<std::complex<double>>& data,
                     const std::vector<std::complex<double>>& kernel) {
    const std::size_t q = ctx.q;
    const std::size_t n = data.size();
    std::vector<std::complex<double>> in(q), out(q);
    std::size_t stride = n / q; // axis 0 (most significant) first
    for (std::uint32_t axis = 0; axis < ctx.d; ++axis) {
        const std::size_t block = stride * q;
        for (std::size_t base = 0; base < n; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                std::size_t idx = base + off;
                for (std::size_t j = 0; j < q; ++j) in[j] = data[idx + j * stride];
                for (std::size_t m = 0; m < q; ++m) {
                    std::complex<double> acc{0.0, 0.0};
                    for (std::size_t j = 0; j < q; ++j) acc += in[j] * kernel[(j * m) % q];
                    out[m] = acc;
                }
                for (std::size_t m = 0; m < q; ++m) data[idx + m * stride] = out[m];
            }
        }
        stride /= q;
    }
}

} // namespace

GridFunction fourier(const GridFunction& f) {
    const FieldCtx& ctx = f.ctx();
    GridFunction out = GridFunction::zeros_complex(ctx);
    auto& data = out.cplx();
    for (std::size_t i = 0; i < f.size(); ++i) data[i] = f.at(i);

    std::vector<std::complex<double>> kernel(ctx.q);
    for (std::uint32_t a = 0; a < ctx.q; ++a)
        kernel[a] = std::conj(additive_character(ctx, a)); // chi(-a)
    axis_transforms(ctx, data, kernel);

    const double scale = 1.0 / static_cast<double>(ctx.volume());
    for (auto& v : data) v *= scale;
    return out;
}

GridFunction inverse_fourier(const GridFunction& fhat) {
    const FieldCtx& ctx = fhat.ctx();
    GridFunction out = GridFunction::zeros_complex(ctx);
    auto& data = out.cplx();
    for (std::size_t i = 0; i < fhat.size(); ++i) data[i] = fhat.at(i);

    std::vector<std::complex<double>> kernel(ctx.q);
    for (std::uint32_t a = 0; a < ctx.q; ++a) kernel[a] = additive_character(ctx, a);
    axis_transforms(ctx, data, kernel);
    return out;
}

SpectralReport spectral_report(const FieldCtx& ctx, std::uint32_t t) {
    t %= ctx.q;
    if (t == 0) fail(Errc::ZeroParameter, "spectral report requires t != 0");

    SpectralReport rep;
    rep.t = t;
    PointSet st = sphere(ctx, t);
    rep.sphere_size = static_cast<std::int64_t>(st.size());

    const Int qdm1 = ipow(ctx.q, ctx.d - 1);
    Int dev = Int(rep.sphere_size) - qdm1;
    rep.size_deviation = dev.convert_to<std::int64_t>();
    rep.size_bound = std::pow(static_cast<double>(ctx.q), ctx.d / 2.0);
    // |dev|^2 <= q^d, exact
    rep.size_pass = square_le(dev, ipow(ctx.q, ctx.d));
    if (ctx.d == 2)
        rep.d2_pass = rep.sphere_size == static_cast<std::int64_t>(ctx.q) - 1 ||
                      rep.sphere_size == static_cast<std::int64_t>(ctx.q) + 1;
    rep.doubling_pass = Int(rep.sphere_size) <= 2 * qdm1;

    // |S_t|^2 deviation from q^{2d-2}: within 3 q^{(3d-2)/2}, within 3q at d = 2
    rep.size_sq_deviation = Int(rep.sphere_size) * rep.sphere_size - qdm1 * qdm1;
    if (ctx.d == 2) {
        rep.size_sq_bound = 3.0 * ctx.q;
        Int abs_dev = rep.size_sq_deviation < 0 ? Int(-rep.size_sq_deviation) : rep.size_sq_deviation;
        rep.size_sq_pass = abs_dev <= Int(3) * ctx.q;
    } else {
        rep.size_sq_bound = 3.0 * std::pow(static_cast<double>(ctx.q), (3.0 * ctx.d - 2.0) / 2.0);
        rep.size_sq_pass = square_le(rep.size_sq_deviation, Int(9) * ipow(ctx.q, 3 * ctx.d - 2));
    }

    GridFunction shat = fourier(GridFunction::indicator(st));
    double maxc = 0;
    const auto& vals = shat.cplx();
    for (std::size_t i = 1; i < vals.size(); ++i) maxc = std::max(maxc, std::abs(vals[i]));
    rep.max_nonzero_coeff = maxc;
    rep.coeff_bound = 2.0 * std::pow(static_cast<double>(ctx.q), -(static_cast<double>(ctx.d) + 1.0) / 2.0);
    rep.coeff_pass = maxc <= rep.coeff_bound * (1.0 + 1e-9);

    rep.passes = rep.size_pass && rep.d2_pass && rep.doubling_pass && rep.size_sq_pass && rep.coeff_pass;
    return rep;
}

SmoothingReport smoothing_order(const FieldCtx& ctx, const GraphSpec& spec) {
    const std::uint64_t n64 = checked_volume(ctx, kSmoothingCap, "smoothing_order");
    const std::size_t n = static_cast<std::size_t>(n64);

    // Bit-packed relation matrix M(x, y) = [phi(x, y) = t] over the full space.
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> rows(n * words, 0);
    std::vector<Point> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = rank_point(ctx, i);

    std::vector<std::int64_t> row_sum(n, 0), col_sum(n, 0);
    if (spec.relation == Relation::Distance) {
        // M(x, y) depends only on x - y; evaluate the sphere indicator once.
        std::vector<char> ind(n, 0);
        PointSet st = sphere(ctx, spec.t % ctx.q);
        for (const Point& p : st.points()) ind[point_rank(ctx, p)] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (ind[point_rank(ctx, sub(ctx, pts[i], pts[j]))]) {
                    rows[i * words + j / 64] |= 1ull << (j % 64);
                    ++row_sum[i];
                    ++col_sum[j];
                }
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (related(ctx, spec, pts[i], pts[j])) {
                    rows[i * words + j / 64] |= 1ull << (j % 64);
                    ++row_sum[i];
                    ++col_sum[j];
                }
            }
        }
    }

    SmoothingReport rep;

    // Size-condition audit. The dot-product row at x = 0 is degenerate
    // (empty when t != 0, full when t = 0) and is reported separately.
    {
        std::int64_t mn = std::numeric_limits<std::int64_t>::max(), mx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool degenerate = spec.relation == Relation::DotProduct && point_rank(ctx, pts[i]) == 0;
            if (degenerate) {
                rep.has_degenerate_row = true;
                rep.degenerate_row_sum = row_sum[i];
                continue;
            }
            mn = std::min({mn, row_sum[i], col_sum[i]});
            mx = std::max({mx, row_sum[i], col_sum[i]});
        }
        rep.size_condition_min = (mn == std::numeric_limits<std::int64_t>::max()) ? 0 : mn;
        rep.size_condition_max = mx;
    }

    // Power iteration for the top singular value of M0 = (I - J/n) M, the
    // operator with its output mean stripped. M0 is never materialized:
    //   M0 v  = M v - mean(M v)
    //   M0^T u = M^T (u - mean(u))
    auto matvec = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0;
            const std::uint64_t* row = &rows[i * words];
            for (std::size_t w = 0; w < words; ++w) {
                std::uint64_t bitsw = row[w];
                while (bitsw) {
                    unsigned b = static_cast<unsigned>(__builtin_ctzll(bitsw));
                    acc += v[w * 64 + b];
                    bitsw &= bitsw - 1;
                }
            }
            out[i] = acc;
        }
    };
    auto matvec_t = [&](const std::vector<double>& u, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double ui = u[i];
            if (ui == 0.0) continue;
            const std::uint64_t* row = &rows[i * words];
            for (std::size_t w = 0; w < words; ++w) {
                std::uint64_t bitsw = row[w];
                while (bitsw) {
                    unsigned b = static_cast<unsigned>(__builtin_ctzll(bitsw));
                    out[w * 64 + b] += ui;
                    bitsw &= bitsw - 1;
                }
            }
        }
    };
    auto strip_mean = [&](std::vector<double>& v) {
        double mean = 0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(n);
        for (double& x : v) x -= mean;
    };

    std::vector<double> v(n), w(n), u(n);
    Rng rng(0x5EED5EEDULL);
    for (double& x : v) x = rng.unit() - 0.5;

    double sigma = 0;
    const int max_iter = 10'000;
    int it = 0;
    for (; it < max_iter; ++it) {
        matvec(v, w);
        strip_mean(w); // w = M0 v
        double wn2 = 0;
        for (double x : w) wn2 += x * x;
        double vn2 = 0;
        for (double x : v) vn2 += x * x;
        if (vn2 == 0.0 || wn2 == 0.0) {
            sigma = 0;
            ++it;
            break;
        }
        double sigma_new = std::sqrt(wn2 / vn2);
        // v <- M0^T w, normalized; w is already mean-free so M0^T w = M^T w
        matvec_t(w, u);
        double un = 0;
        for (double x : u) un += x * x;
        un = std::sqrt(un);
        if (un == 0.0) {
            sigma = sigma_new;
            ++it;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = u[i] / un;
        if (std::abs(sigma_new - sigma) <= 1e-9 * std::max(1.0, sigma_new)) {
            sigma = sigma_new;
            ++it;
            break;
        }
        sigma = sigma_new;
    }

    // q^d M0 has integer entries, so a genuinely nonzero top singular value
    // is at least 1/(q^d sqrt(n)) >= 1e-6 under the size cap; anything
    // smaller is cancellation noise from an exactly-zero operator.
    if (sigma < 1e-8) sigma = 0;
    rep.sigma_max = sigma;
    rep.iterations = it;
    rep.c_constant = sigma / std::pow(static_cast<double>(ctx.q), (ctx.d - 1) / 2.0);
    if (sigma <= 0)
        rep.alpha_estimate = std::numeric_limits<double>::infinity();
    else
        rep.alpha_estimate = (ctx.d - 1) - std::log(sigma) / std::log(static_cast<double>(ctx.q));
    return rep;
}

} // namespace fqg
