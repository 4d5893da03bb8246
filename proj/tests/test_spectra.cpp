#include "fqgraph/spectra.hpp"

#include "fqgraph/numeric.hpp"

#include <doctest.h>

#include <cmath>

using namespace fqg;

namespace {

/// Independent sphere oracle: direct solution count per point, written
/// without rank helpers.
std::size_t sphere_size_oracle(std::uint32_t q, std::uint32_t d, std::uint32_t t) {
    std::size_t count = 0;
    std::vector<std::uint32_t> x(d, 0);
    while (true) {
        std::uint64_t s = 0;
        for (std::uint32_t c : x) s += static_cast<std::uint64_t>(c) * c;
        if (s % q == t % q) ++count;
        std::uint32_t i = d;
        while (i > 0) {
            --i;
            if (++x[i] < q) break;
            x[i] = 0;
            if (i == 0) return count;
        }
    }
}

} // namespace

TEST_CASE("sphere enumeration matches hand-derived examples") {
    FieldCtx q5 = make_context(5, 2);
    PointSet s1 = sphere(q5, 1);
    REQUIRE(s1.size() == 4);
    CHECK(s1.contains({0, 1}));
    CHECK(s1.contains({0, 4}));
    CHECK(s1.contains({1, 0}));
    CHECK(s1.contains({4, 0}));

    CHECK(sphere(make_context(3, 2), 1).size() == 4); // q + 1
    CHECK(sphere(q5, 0).size() == 9);                 // -1 is a square mod 5
}

TEST_CASE("sphere sizes equal the brute-force oracle") {
    for (std::uint32_t q : {3u, 5u, 7u, 11u, 13u}) {
        for (std::uint32_t d : {2u, 3u}) {
            FieldCtx ctx = make_context(q, d);
            for (std::uint32_t t = 0; t < q; ++t) {
                CHECK(sphere(ctx, t).size() == sphere_size_oracle(q, d, t));
            }
        }
    }
}

TEST_CASE("fourier basic identities") {
    FieldCtx ctx = make_context(5, 2);
    GridFunction f = GridFunction::zeros_int(ctx);
    {
        Rng rng(99);
        for (std::int64_t& v : f.ints()) v = static_cast<std::int64_t>(rng.below(20)) - 7;
    }

    GridFunction fhat = fourier(f);
    // hat f(0) = q^{-d} sum f
    std::complex<double> mean{0, 0};
    for (std::size_t i = 0; i < f.size(); ++i) mean += f.at(i);
    mean /= static_cast<double>(ctx.volume());
    CHECK(std::abs(fhat.cplx()[0] - mean) < 1e-12);

    // delta at 0 transforms to the constant q^{-d}
    GridFunction delta = GridFunction::zeros_int(ctx);
    delta.ints()[0] = 1;
    GridFunction dhat = fourier(delta);
    for (const auto& v : dhat.cplx())
        CHECK(std::abs(v - std::complex<double>{1.0 / 25.0, 0.0}) < 1e-12);

    // Plancherel: sum |hat f|^2 = q^{-d} sum |f|^2
    double lhs = 0;
    for (const auto& v : fhat.cplx()) lhs += std::norm(v);
    double rhs = 0;
    for (std::size_t i = 0; i < f.size(); ++i) rhs += std::norm(f.at(i));
    rhs /= static_cast<double>(ctx.volume());
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));

    // inversion
    GridFunction back = inverse_fourier(fhat);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(back.at(i) - f.at(i)) < 1e-9);
}

TEST_CASE("spectral report matches the worked example at (5,2,1)") {
    FieldCtx ctx = make_context(5, 2);
    SpectralReport rep = spectral_report(ctx, 1);
    CHECK(rep.sphere_size == 4);
    CHECK(rep.size_deviation == -1);
    CHECK(rep.coeff_bound == doctest::Approx(0.17889).epsilon(1e-4));
    CHECK(rep.max_nonzero_coeff <= rep.coeff_bound * (1 + 1e-9));
    CHECK(rep.size_sq_deviation == 16 - 25); // |S_1|^2 - q^2
    CHECK(rep.size_sq_pass);                 // |-9| <= 3q = 15
    CHECK(rep.passes);

    CHECK_THROWS_AS(spectral_report(ctx, 0), Error);
}

TEST_CASE("spectral report over the desk-scale range") {
    for (std::uint32_t q : {3u, 5u, 7u, 11u, 13u}) {
        for (std::uint32_t d : {2u, 3u}) {
            FieldCtx ctx = make_context(q, d);
            for (std::uint32_t t = 1; t < q; ++t) {
                SpectralReport rep = spectral_report(ctx, t);
                CHECK(rep.passes);
            }
        }
    }
}

TEST_CASE("(7,3,1) sphere size deviation within q^{3/2}") {
    FieldCtx ctx = make_context(7, 3);
    SpectralReport rep = spectral_report(ctx, 1);
    CHECK(std::abs(static_cast<double>(rep.sphere_size) - 49.0) <= std::pow(7.0, 1.5));
    CHECK(rep.size_pass);
}

TEST_CASE("(3,2,2) sphere size is q - 1 or q + 1") {
    SpectralReport rep = spectral_report(make_context(3, 2), 2);
    CHECK((rep.sphere_size == 2 || rep.sphere_size == 4));
    CHECK(rep.d2_pass);
}

TEST_CASE("smoothing order: distance relation matches the DFT eigenvalues") {
    for (auto [q, d, t] : {std::tuple{5u, 2u, 1u}, {7u, 2u, 3u}, {3u, 3u, 1u}, {11u, 2u, 2u}}) {
        FieldCtx ctx = make_context(q, d);
        SmoothingReport rep = smoothing_order(ctx, distance_spec(t));

        SpectralReport sp = spectral_report(ctx, t);
        double expected = static_cast<double>(ctx.volume()) * sp.max_nonzero_coeff;
        CHECK(rep.sigma_max == doctest::Approx(expected).epsilon(1e-6));
        // 2 q^{(d-1)/2}, the sphere coefficient bound scaled to operator norm
        CHECK(rep.sigma_max <= 2.0 * std::pow(static_cast<double>(q), (d - 1) / 2.0) * (1 + 1e-9));
        CHECK(rep.c_constant <= 2.0 * (1 + 1e-9));
        // alpha_estimate = (d-1) - log_q(sigma_max) by definition
        if (rep.sigma_max > 0) {
            double recon = (d - 1.0) - std::log(rep.sigma_max) / std::log(static_cast<double>(q));
            CHECK(rep.alpha_estimate == doctest::Approx(recon).epsilon(1e-12));
        }
    }
}

TEST_CASE("smoothing order: size condition audit") {
    for (auto [q, d] : {std::pair{3u, 2u}, {5u, 2u}, {3u, 3u}}) {
        FieldCtx ctx = make_context(q, d);
        const double qd1 = std::pow(static_cast<double>(q), d - 1.0);
        const double tol = std::pow(static_cast<double>(q), d / 2.0) + 1.0;
        for (std::uint32_t t = 1; t < q; ++t) {
            for (GraphSpec spec : {distance_spec(t), dot_product_spec(t)}) {
                SmoothingReport rep = smoothing_order(ctx, spec);
                CHECK(std::abs(static_cast<double>(rep.size_condition_min) - qd1) <= tol);
                CHECK(std::abs(static_cast<double>(rep.size_condition_max) - qd1) <= tol);
                if (spec.relation == Relation::DotProduct) {
                    CHECK(rep.has_degenerate_row);
                    CHECK(rep.degenerate_row_sum == 0);
                    // all non-degenerate rows are hyperplanes of size q^{d-1}
                    CHECK(rep.size_condition_min == static_cast<std::int64_t>(std::llround(qd1)));
                    CHECK(rep.size_condition_max == static_cast<std::int64_t>(std::llround(qd1)));
                }
            }
        }
    }
}

TEST_CASE("smoothing order: the all-ones relation has sigma 0") {
    FieldCtx ctx = make_context(3, 2);
    GraphSpec spec;
    spec.relation = Relation::Custom;
    spec.t = 1;
    spec.phi = [](const FieldCtx&, const Point&, const Point&) -> std::uint32_t { return 1; };
    SmoothingReport rep = smoothing_order(ctx, spec);
    CHECK(rep.sigma_max == 0.0);
    CHECK(std::isinf(rep.alpha_estimate));
}

TEST_CASE("smoothing order cap") {
    CHECK_THROWS_AS(smoothing_order(make_context(23, 3), distance_spec(1)), Error);
}

TEST_CASE("grid functions enforce their value tag") {
    FieldCtx ctx = make_context(3, 2);
    GridFunction f = GridFunction::zeros_int(ctx);
    CHECK(f.kind() == GridFunction::Kind::Integer);
    CHECK(f.size() == 9);
    CHECK_THROWS_AS(f.cplx(), Error);
    GridFunction c = GridFunction::zeros_complex(ctx);
    CHECK_THROWS_AS(c.ints(), Error);
    CHECK_THROWS_AS(c.sum(), Error);

    GridFunction ind = GridFunction::indicator(sphere(ctx, 1));
    CHECK(ind.sum() == 4);
    CHECK(ind.sum_squares() == 4);
}
