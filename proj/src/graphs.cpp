#include "fqgraph/graphs.hpp"

#include <bit>
#include <ostream>

namespace fqg {

namespace {
constexpr std::size_t kGraphCap = 20'000;
constexpr std::size_t kExhaustiveAuditCap = 500;

Int count_loops(const Graph& g) {
    Int c = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.adj.get(i, i)) ++c;
    return c;
}
} // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Vacuous: return "vacuous";
        case Verdict::Conditional: return "conditional";
    }
    return "?";
}

void BoundReport::add_term(const std::string& name, double value) {
    hypothesis_terms.emplace_back(name, std::to_string(value));
}

BitMatrix::BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

std::uint64_t BitMatrix::row_count(std::size_t i) const {
    std::uint64_t c = 0;
    const std::uint64_t* r = row(i);
    for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::uint64_t>(std::popcount(r[w]));
    return c;
}

Int BitMatrix::total_ones() const {
    Int total = 0;
    for (std::size_t i = 0; i < n_; ++i) total += row_count(i);
    return total;
}

bool BitMatrix::is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (get(i, j) != get(j, i)) return false;
    return true;
}

BitMatrix BitMatrix::bool_product(const BitMatrix& a, const BitMatrix& b) {
    if (a.size() != b.size()) fail(Errc::LengthMismatch, "bool_product dimension mismatch");
    BitMatrix c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t* ci = c.row(i);
        const std::uint64_t* ai = a.row(i);
        for (std::size_t w = 0; w < a.words_per_row(); ++w) {
            std::uint64_t bitsw = ai[w];
            while (bitsw) {
                std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(bitsw));
                bitsw &= bitsw - 1;
                const std::uint64_t* bj = b.row(j);
                for (std::size_t v = 0; v < b.words_per_row(); ++v) ci[v] |= bj[v];
            }
        }
    }
    return c;
}

Graph build_graph(const PointSet& set, const GraphSpec& spec) {
    const std::size_t n = set.size();
    if (n > kGraphCap) fail(Errc::TooLarge, "|E| > 20000");
    const FieldCtx& ctx = set.ctx();
    const std::uint32_t t = spec.t % ctx.q;

    Graph g{set, spec, BitMatrix(n), true, t == 0};
    g.spec.t = t;

    const bool builtin_symmetric = spec.relation != Relation::Custom;
    if (builtin_symmetric || spec.custom_symmetric) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                if (eval_relation(ctx, spec, set[i], set[j]) == t) {
                    g.adj.set(i, j);
                    g.adj.set(j, i);
                }
            }
        }
        if (!builtin_symmetric) {
            // Symmetry audit of the declared-symmetric custom phi.
            if (n <= kExhaustiveAuditCap) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        if ((eval_relation(ctx, spec, set[i], set[j]) == t) != g.adj.get(i, j))
                            fail(Errc::AsymmetricRelation, "custom phi is not symmetric");
            } else {
                Rng rng(0xA11D17EDULL);
                for (int s = 0; s < 1000; ++s) {
                    std::size_t i = static_cast<std::size_t>(rng.below(n));
                    std::size_t j = static_cast<std::size_t>(rng.below(n));
                    if ((eval_relation(ctx, spec, set[i], set[j]) == t) !=
                        (eval_relation(ctx, spec, set[j], set[i]) == t))
                        fail(Errc::AsymmetricRelation, "custom phi is not symmetric");
                }
            }
        }
        g.symmetric = true;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (eval_relation(ctx, spec, set[i], set[j]) == t) g.adj.set(i, j);
        g.symmetric = g.adj.is_symmetric();
    }

    if (spec.drop_loops)
        for (std::size_t i = 0; i < n; ++i) g.adj.clear(i, i);
    return g;
}

void write_adjacency(std::ostream& out, const Graph& g) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        out << i;
        for (std::size_t j = 0; j < g.size(); ++j)
            if (g.adj.get(i, j)) out << ' ' << j;
        out << '\n';
    }
}

BoundReport edge_report(const Graph& g) {
    if (g.spec.t == 0) fail(Errc::ZeroParameter, "edge identities need t != 0");
    if (g.spec.relation == Relation::Custom)
        fail(Errc::WrongRelation, "edge identities are known for the built-in relations only");

    const Int q = g.ctx().q;
    const Int esize = g.size();
    const Int n_pairs = g.adj.total_ones();
    const int kconst = g.spec.relation == Relation::Distance ? 2 : 1;

    BoundReport rep;
    rep.theorem = "edge_identity";
    rep.hypothesis_satisfied = true;
    rep.add_term("relation", relation_name(g.spec.relation));
    rep.add_term("related_pairs", n_pairs.str());
    rep.add_term("edges_unordered", ((n_pairs - count_loops(g)) / 2 + count_loops(g)).str());
    rep.add_term("constant", std::to_string(kconst));

    // remainder = N - |E|^2/q, exact; bound K q^{(d-1)/2} |E| via squares:
    // (qN - |E|^2)^2 <= K^2 q^{d+1} |E|^2
    Int scaled = q * n_pairs - esize * esize;
    rep.lhs_exact = Rat::of(scaled < 0 ? Int(-scaled) : scaled, q);
    rep.lhs = static_cast<double>(rep.lhs_exact.to_ld());
    rep.rhs = kconst * std::pow(static_cast<double>(g.ctx().q), (g.ctx().d - 1) / 2.0) *
              static_cast<double>(g.size());
    rep.exact_comparison = true;
    bool ok = square_le(scaled, Int(kconst) * kconst * ipow(g.ctx().q, g.ctx().d + 1) * esize * esize);
    rep.verdict = ok ? Verdict::Pass : Verdict::Fail;
    return rep;
}

TruncationResult truncate_with_cap(const PointSet& candidates, const PointSet& reference,
                                   const GraphSpec& spec, double degree_cap) {
    const FieldCtx& ctx = candidates.ctx();
    if (!(reference.ctx() == ctx)) fail(Errc::LengthMismatch, "mismatched contexts");
    std::vector<Point> kept;
    for (const Point& x : candidates.points()) {
        std::uint64_t deg = 0;
        for (const Point& y : reference.points())
            if (related(ctx, spec, x, y)) ++deg;
        if (static_cast<double>(deg) <= degree_cap) kept.push_back(x);
    }
    TruncationResult res;
    res.removed_count = candidates.size() - kept.size();
    res.kept = PointSet::dedup(ctx, std::move(kept));
    res.degree_cap = degree_cap;
    return res;
}

TruncationResult truncate(const PointSet& set, const GraphSpec& spec, double lambda) {
    if (spec.t % set.ctx().q == 0) fail(Errc::ZeroParameter, "truncation needs t != 0");
    if (!(lambda > 0)) fail(Errc::OutOfRange, "lambda must be positive");
    double cap = lambda * static_cast<double>(set.size()) / static_cast<double>(set.ctx().q);
    TruncationResult res = truncate_with_cap(set, set, spec, cap);
    res.lambda = lambda;
    return res;
}

} // namespace fqg
