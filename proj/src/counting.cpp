#include "fqgraph/counting.hpp"

#include "fqgraph/spectra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

namespace fqg {

namespace {

constexpr unsigned kMaxWalkLength = 64;
constexpr unsigned kMaxNondegLength = 12;
constexpr std::size_t kMaxNondegSet = 5'000;
constexpr unsigned kMaxTreeVertices = 16;
constexpr unsigned kMaxEnumTreeVertices = 8;
constexpr unsigned kMaxDegenerateLength = 9;
constexpr std::size_t kMaxBilinearSet = 300;
constexpr double kOracleCap = 1e8;

void require_symmetric(const Graph& g, const char* op) {
    if (!g.symmetric)
        fail(Errc::AsymmetricRelation, std::string(op) + " assumes a symmetric relation");
}

} // namespace

IntMatrix IntMatrix::identity(std::size_t size) {
    IntMatrix m(size);
    for (std::size_t i = 0; i < size; ++i) m.at(i, i) = 1;
    return m;
}

Int IntMatrix::trace() const {
    Int t = 0;
    for (std::size_t i = 0; i < n; ++i) t += at(i, i);
    return t;
}

Int IntMatrix::total() const {
    Int t = 0;
    for (const Int& x : v) t += x;
    return t;
}

IntMatrix adjacency_matrix(const Graph& g) {
    IntMatrix m(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            if (g.adj.get(i, j)) m.at(i, j) = 1;
    return m;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
    if (a.n != b.n) fail(Errc::LengthMismatch, "matrix dimension mismatch");
    IntMatrix c(a.n);
    for (std::size_t i = 0; i < a.n; ++i) {
        for (std::size_t k = 0; k < a.n; ++k) {
            const Int& aik = a.at(i, k);
            if (aik == 0) continue;
            const Int* brow = &b.v[k * b.n];
            Int* crow = &c.v[i * c.n];
            if (aik == 1) {
                for (std::size_t j = 0; j < a.n; ++j) crow[j] += brow[j];
            } else {
                for (std::size_t j = 0; j < a.n; ++j) crow[j] += aik * brow[j];
            }
        }
    }
    return c;
}

IntMatrix mat_pow(const IntMatrix& a, unsigned e) {
    IntMatrix result = IntMatrix::identity(a.n);
    IntMatrix base = a;
    while (e > 0) {
        if (e & 1u) result = mat_mul(result, base);
        e >>= 1u;
        if (e) base = mat_mul(base, base);
    }
    return result;
}

std::vector<Int> adj_times(const Graph& g, const std::vector<Int>& v) {
    if (v.size() != g.size()) fail(Errc::LengthMismatch, "vector dimension mismatch");
    std::vector<Int> out(g.size(), Int(0));
    const std::size_t words = g.adj.words_per_row();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::uint64_t* row = g.adj.row(i);
        Int acc = 0;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t bitsw = row[w];
            while (bitsw) {
                std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(bitsw));
                bitsw &= bitsw - 1;
                acc += v[j];
            }
        }
        out[i] = std::move(acc);
    }
    return out;
}

PathProfile total_paths(const Graph& g, unsigned k, bool want_pairs) {
    if (k < 1 || k > kMaxWalkLength) fail(Errc::TooLong, "path length must be in [1, 64]");
    PathProfile p;
    p.k = k;
    std::vector<Int> f(g.size(), Int(1)); // f_0
    for (unsigned step = 0; step < k; ++step) f = adj_times(g, f);
    p.per_vertex = std::move(f);
    p.total = std::accumulate(p.per_vertex.begin(), p.per_vertex.end(), Int(0));
    if (want_pairs) p.pair_matrix = mat_pow(adjacency_matrix(g), k);
    return p;
}

std::vector<Int> path_totals(const Graph& g, unsigned kmax) {
    if (kmax > kMaxWalkLength) fail(Errc::TooLong, "path length must be <= 64");
    std::vector<Int> totals;
    totals.reserve(kmax + 1);
    std::vector<Int> f(g.size(), Int(1));
    totals.push_back(Int(g.size())); // P_0 = |E|
    for (unsigned k = 1; k <= kmax; ++k) {
        f = adj_times(g, f);
        totals.push_back(std::accumulate(f.begin(), f.end(), Int(0)));
    }
    return totals;
}

CycleProfile cycle_count(const Graph& g, unsigned n) {
    if (n < 2 || n > kMaxWalkLength) fail(Errc::TooLong, "cycle length must be in [2, 64]");
    require_symmetric(g, "cycle_count");
    CycleProfile c;
    c.n = n;
    if (g.size() == 0) {
        c.total = 0;
        return c;
    }
    c.total = mat_pow(adjacency_matrix(g), n).trace();
    return c;
}

Int nondegenerate_count(const Graph& g, unsigned n) {
    if (n < 2 || n > kMaxNondegLength) fail(Errc::TooLong, "nondegenerate length must be in [2, 12]");
    if (g.size() > kMaxNondegSet) fail(Errc::TooLarge, "|E| > 5000 for nondegenerate search");
    require_symmetric(g, "nondegenerate_count");
    const std::size_t m = g.size();
    if (m < n) return 0; // pigeonhole

    // walk[r](u, v) = 1 iff a walk of exactly r edges joins u to v.
    std::vector<BitMatrix> walk(n + 1);
    walk[1] = g.adj;
    for (unsigned r = 2; r <= n; ++r) walk[r] = BitMatrix::bool_product(walk[r - 1], g.adj);

    Int count = 0;
    std::vector<std::uint64_t> visited((m + 63) / 64, 0);

    auto visit = [&](std::size_t v, bool on) {
        if (on)
            visited[v / 64] |= 1ull << (v % 64);
        else
            visited[v / 64] &= ~(1ull << (v % 64));
    };

    // Ordered tuples: every start vertex, every orientation.
    for (std::size_t s = 0; s < m; ++s) {
        if (!walk[n].get(s, s)) continue;
        visit(s, true);
        // depth-first over x_2..x_n with the remaining-walk prune
        auto dfs = [&](auto&& self, std::size_t v, unsigned depth) -> void {
            if (depth == n) {
                if (g.adj.get(v, s)) ++count;
                return;
            }
            const unsigned remaining = n - depth; // edges still to place after choosing next
            const std::uint64_t* row = g.adj.row(v);
            for (std::size_t w = 0; w < g.adj.words_per_row(); ++w) {
                std::uint64_t bitsw = row[w] & ~visited[w];
                while (bitsw) {
                    std::size_t u = w * 64 + static_cast<std::size_t>(std::countr_zero(bitsw));
                    bitsw &= bitsw - 1;
                    if (!walk[remaining].get(u, s)) continue;
                    visit(u, true);
                    self(self, u, depth + 1);
                    visit(u, false);
                }
            }
        };
        dfs(dfs, s, 1);
        visit(s, false);
    }
    return count;
}

TreeShape TreeShape::from_pruefer(const std::vector<unsigned>& seq, unsigned vertex_count) {
    if (vertex_count < 2) fail(Errc::OutOfRange, "a tree needs at least 2 vertices");
    if (seq.size() + 2 != vertex_count) fail(Errc::LengthMismatch, "pruefer length must be v-2");
    for (unsigned s : seq)
        if (s >= vertex_count) fail(Errc::OutOfRange, "pruefer entry out of range");

    TreeShape t;
    t.vertex_count = vertex_count;
    t.pruefer = seq;
    std::vector<unsigned> degree(vertex_count, 1);
    for (unsigned s : seq) ++degree[s];
    std::vector<char> used(vertex_count, 0);
    for (unsigned s : seq) {
        unsigned leaf = 0;
        while (leaf < vertex_count && !(degree[leaf] == 1 && !used[leaf])) ++leaf;
        t.edges.emplace_back(s, leaf);
        used[leaf] = 1;
        --degree[s];
    }
    // the two remaining degree-1 vertices close the tree
    unsigned a = vertex_count, b = vertex_count;
    for (unsigned i = 0; i < vertex_count; ++i) {
        if (degree[i] == 1 && !used[i]) {
            if (a == vertex_count)
                a = i;
            else
                b = i;
        }
    }
    t.edges.emplace_back(a, b);
    return t;
}

TreeShape TreeShape::path(unsigned vertex_count) {
    if (vertex_count < 2) fail(Errc::OutOfRange, "a tree needs at least 2 vertices");
    TreeShape t;
    t.vertex_count = vertex_count;
    for (unsigned i = 0; i + 1 < vertex_count; ++i) t.edges.emplace_back(i, i + 1);
    t.pruefer = encode_pruefer(t);
    return t;
}

std::vector<unsigned> encode_pruefer(const TreeShape& t) {
    const unsigned v = t.vertex_count;
    std::vector<std::vector<unsigned>> nbr(v);
    for (auto [a, b] : t.edges) {
        nbr[a].push_back(b);
        nbr[b].push_back(a);
    }
    std::vector<unsigned> degree(v);
    for (unsigned i = 0; i < v; ++i) degree[i] = static_cast<unsigned>(nbr[i].size());
    std::vector<char> removed(v, 0);
    std::vector<unsigned> seq;
    for (unsigned step = 0; step + 2 < v; ++step) {
        unsigned leaf = 0;
        while (leaf < v && !(degree[leaf] == 1 && !removed[leaf])) ++leaf;
        unsigned parent = v;
        for (unsigned u : nbr[leaf])
            if (!removed[u]) parent = u;
        seq.push_back(parent);
        removed[leaf] = 1;
        --degree[parent];
        degree[leaf] = 0;
    }
    return seq;
}

Int tree_embeddings(const Graph& g, const TreeShape& t) {
    if (t.vertex_count > kMaxTreeVertices) fail(Errc::TooLarge, "tree with more than 16 vertices");
    require_symmetric(g, "tree_embeddings");
    if (g.size() == 0) return 0;
    if (t.edges.size() + 1 != t.vertex_count) fail(Errc::OutOfRange, "not a tree: wrong edge count");

    // Root at 0, BFS order, then fold leaf-to-root:
    //   msg(v) = prod over children c of (A . msg(c)), leaves all-ones.
    const unsigned v = t.vertex_count;
    std::vector<std::vector<unsigned>> nbr(v);
    for (auto [a, b] : t.edges) {
        if (a >= v || b >= v) fail(Errc::OutOfRange, "tree edge out of range");
        nbr[a].push_back(b);
        nbr[b].push_back(a);
    }
    std::vector<unsigned> order, parent(v, v);
    std::vector<char> seen(v, 0);
    order.push_back(0);
    seen[0] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
        unsigned cur = order[head];
        for (unsigned u : nbr[cur]) {
            if (!seen[u]) {
                seen[u] = 1;
                parent[u] = cur;
                order.push_back(u);
            }
        }
    }
    if (order.size() != v) fail(Errc::OutOfRange, "not a tree: disconnected");

    std::vector<std::vector<Int>> msg(v);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        unsigned cur = *it;
        std::vector<Int> acc(g.size(), Int(1));
        for (unsigned u : nbr[cur]) {
            if (u == parent[cur]) continue;
            std::vector<Int> lifted = adj_times(g, msg[u]);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] *= lifted[i];
            msg[u].clear();
        }
        msg[cur] = std::move(acc);
    }
    return std::accumulate(msg[0].begin(), msg[0].end(), Int(0));
}

std::vector<TreeShape> enumerate_trees(unsigned v) {
    if (v < 2) fail(Errc::OutOfRange, "tree enumeration needs v >= 2");
    if (v > kMaxEnumTreeVertices) fail(Errc::TooLarge, "tree enumeration capped at v = 8");
    std::vector<TreeShape> trees;
    if (v == 2) {
        trees.push_back(TreeShape::from_pruefer({}, 2));
        return trees;
    }
    std::vector<unsigned> seq(v - 2, 0);
    while (true) {
        trees.push_back(TreeShape::from_pruefer(seq, v));
        // odometer over [0, v)^(v-2)
        unsigned i = static_cast<unsigned>(seq.size());
        while (i > 0) {
            --i;
            if (++seq[i] < v) break;
            seq[i] = 0;
            if (i == 0) return trees;
        }
    }
}

namespace {

/// Canonical rooted AHU string.
std::string ahu_string(const std::vector<std::vector<unsigned>>& nbr, unsigned v, unsigned from) {
    std::vector<std::string> children;
    for (unsigned u : nbr[v])
        if (u != from) children.push_back(ahu_string(nbr, u, v));
    std::sort(children.begin(), children.end());
    std::string s = "(";
    for (const auto& c : children) s += c;
    s += ")";
    return s;
}

std::vector<unsigned> tree_centers(const TreeShape& t) {
    const unsigned v = t.vertex_count;
    std::vector<std::vector<unsigned>> nbr(v);
    for (auto [a, b] : t.edges) {
        nbr[a].push_back(b);
        nbr[b].push_back(a);
    }
    std::vector<unsigned> degree(v);
    for (unsigned i = 0; i < v; ++i) degree[i] = static_cast<unsigned>(nbr[i].size());
    std::vector<unsigned> layer;
    std::vector<char> removed(v, 0);
    for (unsigned i = 0; i < v; ++i)
        if (degree[i] <= 1) layer.push_back(i);
    unsigned remaining = v;
    while (remaining > 2) {
        std::vector<unsigned> next;
        for (unsigned leaf : layer) {
            removed[leaf] = 1;
            --remaining;
            for (unsigned u : nbr[leaf]) {
                if (!removed[u] && --degree[u] == 1) next.push_back(u);
            }
        }
        layer = std::move(next);
    }
    std::vector<unsigned> centers;
    for (unsigned i = 0; i < v; ++i)
        if (!removed[i]) centers.push_back(i);
    return centers;
}

} // namespace

std::string tree_class_key(const TreeShape& t) {
    const unsigned v = t.vertex_count;
    if (v == 1) return "()";
    std::vector<std::vector<unsigned>> nbr(v);
    for (auto [a, b] : t.edges) {
        nbr[a].push_back(b);
        nbr[b].push_back(a);
    }
    std::string best;
    for (unsigned c : tree_centers(t)) {
        std::string s = ahu_string(nbr, c, c);
        if (best.empty() || s < best) best = s;
    }
    return best;
}

std::vector<unsigned> canonical_pruefer(const TreeShape& t) {
    const unsigned v = t.vertex_count;
    if (v > kMaxEnumTreeVertices) fail(Errc::TooLarge, "canonical form capped at v = 8");
    if (v == 2) return {}; // the single tree is its own class
    std::vector<unsigned> perm(v);
    std::iota(perm.begin(), perm.end(), 0u);
    std::vector<unsigned> best;
    bool first = true;
    do {
        TreeShape relabeled;
        relabeled.vertex_count = v;
        for (auto [a, b] : t.edges) relabeled.edges.emplace_back(perm[a], perm[b]);
        std::vector<unsigned> seq = encode_pruefer(relabeled);
        if (first || seq < best) {
            best = std::move(seq);
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

Int degenerate_bound(const Graph& g, unsigned n) {
    if (n > kMaxDegenerateLength) fail(Errc::TooLarge, "degenerate bound capped at n = 9");
    require_symmetric(g, "degenerate_bound");
    Int bound = 0;
    if (n < 3) return bound;
    for (unsigned r = 1; r + 2 <= n; ++r) {
        const unsigned vcount = r + 1;
        const Int g_t = ipow(2, static_cast<unsigned>((binom(vcount, 2) - r).convert_to<unsigned long>()));
        // n_T is a tree-isomorphism invariant: group the labeled trees by
        // class and evaluate the DP once per class.
        std::map<std::string, std::pair<Int, const TreeShape*>> classes;
        std::vector<TreeShape> trees = enumerate_trees(vcount);
        for (const TreeShape& t : trees) {
            auto [it, fresh] = classes.try_emplace(tree_class_key(t), std::pair<Int, const TreeShape*>{0, &t});
            it->second.first += 1;
        }
        for (auto& [key, entry] : classes) {
            Int embeddings = tree_embeddings(g, *entry.second);
            bound += entry.first * embeddings * g_t;
        }
    }
    return bound;
}

Int bilinear_form(const Graph& g, const IntMatrix& f, const IntMatrix& g_fn) {
    if (g.size() > kMaxBilinearSet) fail(Errc::TooLarge, "bilinear form capped at |E| = 300");
    require_symmetric(g, "bilinear_form");
    if (f.n != g.size() || g_fn.n != g.size()) fail(Errc::LengthMismatch, "pair function dimension mismatch");
    for (const Int& x : f.v)
        if (x < 0) fail(Errc::NegativeInput, "bilinear form wants nonnegative f");
    for (const Int& x : g_fn.v)
        if (x < 0) fail(Errc::NegativeInput, "bilinear form wants nonnegative g");

    // sum f(x,y) A(x,z) A(y,w) g(z,w) = <A^T f A, g>_F; A symmetric here.
    const IntMatrix a = adjacency_matrix(g);
    IntMatrix inner = mat_mul(mat_mul(a, f), a);
    Int total = 0;
    for (std::size_t i = 0; i < inner.v.size(); ++i) total += inner.v[i] * g_fn.v[i];
    return total;
}

Int oracle_cycles(const PointSet& set, const GraphSpec& spec, unsigned n) {
    const std::size_t m = set.size();
    if (m == 0) return 0;
    if (std::pow(static_cast<double>(m), n) > kOracleCap) fail(Errc::TooLarge, "oracle tuple space > 1e8");
    const FieldCtx& ctx = set.ctx();
    std::vector<std::size_t> tup(n, 0);
    Int count = 0;
    while (true) {
        bool ok = true;
        for (unsigned i = 0; i < n && ok; ++i)
            ok = related(ctx, spec, set[tup[i]], set[tup[(i + 1) % n]]);
        if (ok) ++count;
        unsigned i = n;
        while (i > 0) {
            --i;
            if (++tup[i] < m) break;
            tup[i] = 0;
            if (i == 0) return count;
        }
    }
}

Int oracle_nondegenerate(const PointSet& set, const GraphSpec& spec, unsigned n) {
    const std::size_t m = set.size();
    if (m == 0) return 0;
    if (std::pow(static_cast<double>(m), n) > kOracleCap) fail(Errc::TooLarge, "oracle tuple space > 1e8");
    const FieldCtx& ctx = set.ctx();
    std::vector<std::size_t> tup(n, 0);
    Int count = 0;
    while (true) {
        bool ok = true;
        for (unsigned i = 0; i < n && ok; ++i)
            for (unsigned j = i + 1; j < n && ok; ++j)
                if (tup[i] == tup[j]) ok = false;
        for (unsigned i = 0; i < n && ok; ++i)
            ok = related(ctx, spec, set[tup[i]], set[tup[(i + 1) % n]]);
        if (ok) ++count;
        unsigned i = n;
        while (i > 0) {
            --i;
            if (++tup[i] < m) break;
            tup[i] = 0;
            if (i == 0) return count;
        }
    }
}

Int oracle_tree(const PointSet& set, const GraphSpec& spec, const TreeShape& t) {
    const std::size_t m = set.size();
    if (m == 0) return 0;
    if (std::pow(static_cast<double>(m), t.vertex_count) > kOracleCap)
        fail(Errc::TooLarge, "oracle map space > 1e8");
    const FieldCtx& ctx = set.ctx();
    std::vector<std::size_t> map(t.vertex_count, 0);
    Int count = 0;
    while (true) {
        bool ok = true;
        for (auto [a, b] : t.edges) {
            if (!related(ctx, spec, set[map[a]], set[map[b]])) {
                ok = false;
                break;
            }
        }
        if (ok) ++count;
        unsigned i = t.vertex_count;
        while (i > 0) {
            --i;
            if (++map[i] < m) break;
            map[i] = 0;
            if (i == 0) return count;
        }
    }
}

namespace {
Int round_to_int(long double x) {
    if (x >= 0) return Int(x + 0.5L);
    return -Int(-x + 0.5L);
}
} // namespace

Int full_space_spectral_cycles(const FieldCtx& ctx, const GraphSpec& spec, unsigned n) {
    if (spec.relation != Relation::Distance)
        fail(Errc::WrongRelation, "spectral cycle count needs the translation-invariant distance relation");
    return full_space_spectral_cycles(ctx, spec.t, n);
}

Int full_space_spectral_cycles(const FieldCtx& ctx, std::uint32_t t, unsigned n) {
    t %= ctx.q;
    if (t == 0) fail(Errc::ZeroParameter, "spectral cycle count needs t != 0");
    if (n < 2 || n > kMaxWalkLength) fail(Errc::TooLong, "cycle length must be in [2, 64]");
    std::uint64_t vol = ctx.volume();
    if (vol > 1'000'000) fail(Errc::TooLarge, "full-space spectral count capped at q^d = 1e6");

    // The full-space distance operator is a group convolution: diagonalized
    // by the characters, with real eigenvalues q^d hat S_t(m).
    GridFunction shat = fourier(GridFunction::indicator(sphere(ctx, t)));
    const double qd = static_cast<double>(vol);
    long double total = 0;
    for (const auto& c : shat.cplx()) {
        long double lambda = static_cast<long double>(c.real()) * qd;
        long double term = 1;
        for (unsigned i = 0; i < n; ++i) term *= lambda;
        total += term;
    }
    return round_to_int(total);
}

} // namespace fqg
