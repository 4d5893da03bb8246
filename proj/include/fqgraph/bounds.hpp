#pragma once

#include "fqgraph/counting.hpp"
#include "fqgraph/report.hpp"
#include "fqgraph/spectra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fqg {

/// Closed-form constants of the cycle-count and tree-count bounds.
struct TheoremConstants {
    double gamma = 0;     // -1 when d = 2, else -(d-2)/2
    Int K_n;              // 48 at n = 4; 36 + 80*6^(floor(n/2)-2) + 12*floor(n/2) for n >= 5
    Int A_k;              // 10 * 6^(k-2)
    Int c_n;              // (n-1)^(n-3) * 2^(C(n-1,2) - n + 3)
    double psi = 0;       // psi_k(alpha) = (k-1) alpha - k + 2
    double epsilon = 0;   // 1 - (k-2)/(k-1) + delta (even n) / odd variant
    double delta = 0;
    double alpha = 0;
    double size_threshold_exponent = 0; // |E| >= q^(this) hypothesis exponent
};

/// Evaluates every constant exactly as printed. n drives K_n/c_n (n >= 4),
/// k drives A_k (k >= 2). Optional alpha must lie in [(k-2)/(k-1), 1);
/// optional delta must lie in (0, 1/(2 floor(n/2)^2)).
TheoremConstants theorem_constants(unsigned n, unsigned k, unsigned d,
                                   std::optional<double> alpha = std::nullopt,
                                   std::optional<double> delta = std::nullopt);

enum class TheoremId {
    EdgeIdentity,   // related-pair count vs |E|^2/q
    Paths,          // path-count concentration, hypothesis |E| > (k/log 2) q^{(d+1)/2}
    EdgeFunctional, // sum_{x.y=t} f(x) g(y) vs q^{-1}|f|_1 |g|_1, exact squares
    BilinearDist,   // two-edge bilinear form bound, distance relation
    BilinearProd,   // two-edge bilinear form bound, dot-product relation
    Bilinear,       // the combined (weaker) bilinear bound, either relation
    Cycles,         // C_n vs |E|^n/q^n with the explicit hypothesis
    CyclesLong,     // n >= 5 variant with the q^{-(n/2-1)delta} error
    CyclesCor,      // corollary form with K_n
    PathGrowth,     // P_k <= |E| X^k, exact, no hypothesis
    PathRecursion,  // half-length recursion residuals, exact squares
    TreeEmbed,      // truncation + tree embedding count bound
    Nondegenerate,  // N_n vs |E|^n/q^n
};

const char* theorem_name(TheoremId id);
TheoremId theorem_from_string(const std::string& s);

/// Everything a theorem may quantify over. Each check pulls what it needs
/// and raises MissingInput otherwise.
struct VerifyInput {
    const Graph* graph = nullptr;
    unsigned n = 0;
    unsigned k = 0;
    std::uint32_t t = 0; // for checks that do not carry a graph
    double delta = 0;
    double epsilon = 0;
    const IntMatrix* f = nullptr;      // pair function on E x E
    const IntMatrix* g = nullptr;      // pair function on E x E
    const GridFunction* f_grid = nullptr; // function on F_q^d
    const GridFunction* g_grid = nullptr;
    const PointSet* set = nullptr;     // for truncation-based checks
    const GraphSpec* spec = nullptr;
    const TreeShape* tree = nullptr;
};

BoundReport verify(TheoremId id, const VerifyInput& in);

/// Exact evaluation of sum_{x.y = t} f(x) g(y) over the full grid, by
/// solving the hyperplane constraint for one coordinate. O(d q^{2d-1}).
Int dot_pair_sum(const GridFunction& f, const GridFunction& g, std::uint32_t t);

/// One instance of a sweep: which theorems to run on which generated set.
struct SweepJob {
    std::uint32_t q = 5;
    std::uint32_t d = 2;
    std::uint32_t t = 1;
    Relation relation = Relation::Distance;
    std::string recipe = "full";
    std::vector<TheoremId> theorems;
    unsigned repetitions = 1;
    std::uint64_t seed = 0;
    unsigned n = 4;
    unsigned k = 2;
    double delta = 0.05;
    double epsilon = 0.2;
    std::int64_t fg_max = 9; // random function values drawn from [0, fg_max]
};

struct SweepRecord {
    std::size_t job_index = 0;
    unsigned rep = 0;
    std::uint32_t q = 0, d = 0, t = 0;
    Relation relation = Relation::Distance;
    std::size_t set_size = 0;
    std::uint64_t seed = 0;
    BoundReport report;
};

struct SweepTally {
    std::size_t pass = 0, fail = 0, vacuous = 0, conditional = 0;
    double worst_slack = 0; // minimum of rhs - lhs over asserted instances
};

std::vector<SweepRecord> verify_sweep(const std::vector<SweepJob>& jobs);
SweepTally tally(const std::vector<SweepRecord>& records);

/// Deterministic random nonnegative pair function on E x E (values in
/// [0, vmax]) and grid function on F_q^d; shared by sweeps and tests.
IntMatrix random_pair_function(std::size_t n, std::int64_t vmax, std::uint64_t seed);
GridFunction random_grid_function(const FieldCtx& ctx, std::int64_t vmax, std::uint64_t seed);

} // namespace fqg
