#pragma once

#include "fqgraph/graphs.hpp"
#include "fqgraph/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fqg {

/// Dense square matrix of exact integers.
struct IntMatrix {
    std::size_t n = 0;
    std::vector<Int> v;

    IntMatrix() = default;
    explicit IntMatrix(std::size_t size) : n(size), v(size * size, Int(0)) {}

    Int& at(std::size_t r, std::size_t c) { return v[r * n + c]; }
    const Int& at(std::size_t r, std::size_t c) const { return v[r * n + c]; }

    static IntMatrix identity(std::size_t size);
    Int trace() const;
    Int total() const;
    bool operator==(const IntMatrix&) const = default;
};

IntMatrix adjacency_matrix(const Graph& g);
IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);
IntMatrix mat_pow(const IntMatrix& a, unsigned e);

/// v -> A v using the bit-packed adjacency.
std::vector<Int> adj_times(const Graph& g, const std::vector<Int>& v);

/// Exact path counts: total is the number of (k+1)-tuples with consecutive
/// pairs related; per_vertex[x] counts those starting at x.
struct PathProfile {
    unsigned k = 0;
    Int total;
    std::vector<Int> per_vertex;
    std::optional<IntMatrix> pair_matrix; // (A^k)_{xy} when requested
};

PathProfile total_paths(const Graph& g, unsigned k, bool want_pairs = false);

/// All path totals P_0 .. P_kmax in one sweep (P_0 = |E|).
std::vector<Int> path_totals(const Graph& g, unsigned kmax);

struct CycleProfile {
    unsigned n = 0;
    Int total; // tr(A^n): closed n-walks = the tuple count
    std::optional<Int> nondegenerate;
    std::optional<Int> degenerate_bound;
};

/// total = tr(A^n) by exact repeated squaring. n <= 64.
CycleProfile cycle_count(const Graph& g, unsigned n);

/// Ordered n-tuples of pairwise-distinct vertices forming a closed relation
/// cycle, by DFS with walk-reachability pruning. n <= 12, |E| <= 5000.
Int nondegenerate_count(const Graph& g, unsigned n);

/// A labeled tree on vertices 0..vertex_count-1.
struct TreeShape {
    unsigned vertex_count = 0;
    std::vector<std::pair<unsigned, unsigned>> edges; // rooted orientation (parent, child)
    std::vector<unsigned> pruefer;                    // encoding of this labeled tree

    static TreeShape from_pruefer(const std::vector<unsigned>& seq, unsigned vertex_count);
    static TreeShape path(unsigned vertex_count); // 0-1-2-...-v-1
    static TreeShape single_edge() { return path(2); }
};

std::vector<unsigned> encode_pruefer(const TreeShape& t);

/// Number of edge-preserving maps V(T) -> E (homomorphisms; repeats
/// allowed), by rooted message-passing DP. vertex_count <= 16.
Int tree_embeddings(const Graph& g, const TreeShape& t);

/// All v^{v-2} labeled trees on v vertices via exhaustive Pruefer
/// sequences. 2 <= v <= 8.
std::vector<TreeShape> enumerate_trees(unsigned v);

/// Lexicographically minimal Pruefer sequence over all relabelings
/// (isomorphism-class representative; brute force, v <= 8).
std::vector<unsigned> canonical_pruefer(const TreeShape& t);

/// Cheap isomorphism-class key (canonical rooted string at the centroid).
std::string tree_class_key(const TreeShape& t);

/// sum over r in [1, n-2], over all labeled trees T on r+1 vertices, of
/// n_T * 2^(C(r+1,2) - r); exact. Upper-bounds the degenerate cycle count
/// C_n - N_n. n <= 9.
Int degenerate_bound(const Graph& g, unsigned n);

/// sum f(x,y) A(x,z) A(y,w) g(z,w) over E^4, via two matrix sandwiches.
/// f, g nonnegative; |E| <= 300.
Int bilinear_form(const Graph& g, const IntMatrix& f, const IntMatrix& g_fn);

/// Independent brute-force oracles: direct tuple/map loops that re-evaluate
/// the relation pointwise from coordinates. No adjacency matrices, no
/// shared code with the fast paths.
Int oracle_cycles(const PointSet& set, const GraphSpec& spec, unsigned n);
Int oracle_nondegenerate(const PointSet& set, const GraphSpec& spec, unsigned n);
Int oracle_tree(const PointSet& set, const GraphSpec& spec, const TreeShape& t);

/// C_n over the whole space F_q^d for the distance relation, from the
/// eigenvalues of the full-space convolution operator: rounds
/// sum_m (q^d hat S_t(m))^n to the nearest integer. q^d <= 10^6.
/// The dot-product relation is not translation invariant: WrongRelation.
Int full_space_spectral_cycles(const FieldCtx& ctx, const GraphSpec& spec, unsigned n);
Int full_space_spectral_cycles(const FieldCtx& ctx, std::uint32_t t, unsigned n);

} // namespace fqg
