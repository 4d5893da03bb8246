#pragma once

#include "fqgraph/field.hpp"
#include "fqgraph/numeric.hpp"
#include "fqgraph/relation.hpp"
#include "fqgraph/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fqg {

/// Dense symmetric-or-not 0/1 matrix with bit-packed rows.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(std::size_t n);

    std::size_t size() const { return n_; }
    std::size_t words_per_row() const { return words_; }

    bool get(std::size_t i, std::size_t j) const {
        return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
    }
    void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= 1ull << (j % 64); }
    void clear(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] &= ~(1ull << (j % 64)); }

    const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }
    std::uint64_t* row(std::size_t i) { return bits_.data() + i * words_; }

    std::uint64_t row_count(std::size_t i) const;
    Int total_ones() const;
    bool is_symmetric() const;

    /// Boolean matrix product (reachability step).
    static BitMatrix bool_product(const BitMatrix& a, const BitMatrix& b);

    bool operator==(const BitMatrix&) const = default;

private:
    std::size_t n_ = 0, words_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// The relation graph on a point set: exact 0/1 adjacency, ordered-pair
/// semantics (diagonal included when the relation relates a point to
/// itself, e.g. dot product with x.x = t).
struct Graph {
    PointSet set;
    GraphSpec spec;
    BitMatrix adj;
    bool symmetric = true;
    bool zero_t_warning = false;

    std::size_t size() const { return set.size(); }
    const FieldCtx& ctx() const { return set.ctx(); }
    std::uint64_t degree(std::size_t i) const { return adj.row_count(i); }
};

/// Builds the exact adjacency. |E| <= 20000. A custom phi declared
/// symmetric is audited (1000 sampled pairs, exhaustive when |E| <= 500).
Graph build_graph(const PointSet& set, const GraphSpec& spec);

/// One line per vertex: index then neighbor indices.
void write_adjacency(std::ostream& out, const Graph& g);

/// Ordered related-pair count N against the expected |E|^2/q, with the
/// exact squared-integer remainder check (constant 2 for distance, 1 for
/// dot product). Requires t != 0.
BoundReport edge_report(const Graph& g);

struct TruncationResult {
    PointSet kept;
    std::size_t removed_count = 0;
    double lambda = 0;
    double degree_cap = 0; // lambda |E| / q
};

/// Keeps the points of `candidates` whose degree measured against
/// `reference` is at most `degree_cap`.
TruncationResult truncate_with_cap(const PointSet& candidates, const PointSet& reference,
                                   const GraphSpec& spec, double degree_cap);

/// kept = { x in E : deg_E(x) <= lambda |E| / q }. Requires lambda > 0 and
/// t != 0. Degrees are measured against the full set E.
TruncationResult truncate(const PointSet& set, const GraphSpec& spec, double lambda);

} // namespace fqg
