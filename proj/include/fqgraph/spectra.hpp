#pragma once

#include "fqgraph/field.hpp"
#include "fqgraph/numeric.hpp"
#include "fqgraph/relation.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace fqg {

/// A function on all of F_q^d, indexed by lexicographic point rank.
/// Integer-tagged values stay exact; the Fourier side is complex doubles.
class GridFunction {
public:
    enum class Kind { Integer, Complex };

    static GridFunction zeros_int(const FieldCtx& ctx);
    static GridFunction zeros_complex(const FieldCtx& ctx);
    static GridFunction indicator(const PointSet& set);

    Kind kind() const { return kind_; }
    const FieldCtx& ctx() const { return ctx_; }
    std::size_t size() const;

    std::vector<std::int64_t>& ints();
    const std::vector<std::int64_t>& ints() const;
    std::vector<std::complex<double>>& cplx();
    const std::vector<std::complex<double>>& cplx() const;

    /// Unified complex read regardless of tag.
    std::complex<double> at(std::size_t i) const;

    Int sum() const;         // integer mode only
    Int sum_squares() const; // integer mode only

private:
    GridFunction(const FieldCtx& ctx, Kind kind);

    FieldCtx ctx_{};
    Kind kind_ = Kind::Integer;
    std::vector<std::int64_t> ivals_;
    std::vector<std::complex<double>> cvals_;
};

/// S_t = { x : ||x|| = t }, enumerated exactly.
PointSet sphere(const FieldCtx& ctx, std::uint32_t t);

/// hat f(m) = q^{-d} sum_x f(x) chi(-x.m), computed as d successive
/// length-q axis transforms. O(d q^{d+1}).
GridFunction fourier(const GridFunction& f);

/// f(x) = sum_m hat f(m) chi(x.m); inverse of the above.
GridFunction inverse_fourier(const GridFunction& fhat);

/// Sphere size and Fourier-coefficient audit for one t != 0.
struct SpectralReport {
    std::uint32_t t = 0;
    std::int64_t sphere_size = 0;
    std::int64_t size_deviation = 0;   // |S_t| - q^{d-1}
    double size_bound = 0;             // q^{d/2}
    Int size_sq_deviation;             // |S_t|^2 - q^{2d-2}
    double size_sq_bound = 0;          // 3 q^{(3d-2)/2}, or 3q when d = 2
    double max_nonzero_coeff = 0;      // max_{m != 0} |hat S_t(m)|
    double coeff_bound = 0;            // 2 q^{-(d+1)/2}
    bool size_pass = false;            // |size_deviation| <= q^{d/2}, exact
    bool d2_pass = true;               // d = 2 only: |S_t| in {q-1, q+1}
    bool doubling_pass = false;        // |S_t| <= 2 q^{d-1}, exact
    bool size_sq_pass = false;         // exact
    bool coeff_pass = false;           // outward 1e-9 tolerance
    bool passes = false;
};

SpectralReport spectral_report(const FieldCtx& ctx, std::uint32_t t);

/// Operator audit of the mean-stripped averaging operator of a relation on
/// the full space: largest singular value, the implied smoothing order
/// alpha = (d-1) - log_q(sigma_max), and the row/column-sum size condition.
struct SmoothingReport {
    double sigma_max = 0;
    double alpha_estimate = 0; // +inf when sigma_max == 0
    double c_constant = 0;     // sigma_max / q^{(d-1)/2}
    std::int64_t size_condition_min = 0; // over non-degenerate rows/columns
    std::int64_t size_condition_max = 0;
    bool has_degenerate_row = false;     // dot-product row at x = 0
    std::int64_t degenerate_row_sum = 0;
    int iterations = 0;
};

SmoothingReport smoothing_order(const FieldCtx& ctx, const GraphSpec& spec);

} // namespace fqg
