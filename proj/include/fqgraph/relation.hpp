#pragma once

#include "fqgraph/field.hpp"

#include <functional>
#include <string>

namespace fqg {

enum class Relation { Distance, DotProduct, Custom };

const char* relation_name(Relation r);
Relation relation_from_string(const std::string& s);

/// A total pairing F_q^d x F_q^d -> F_q used by custom relations.
using PhiFn = std::function<std::uint32_t(const FieldCtx&, const Point&, const Point&)>;

/// Which relation connects two points, and at which parameter t.
/// t = 0 is permitted for raw counting; graphs built with t = 0 carry a
/// warning flag and theorem verification refuses them.
struct GraphSpec {
    Relation relation = Relation::Distance;
    std::uint32_t t = 0;
    PhiFn phi;                    // required iff relation == Custom
    bool custom_symmetric = true; // declared symmetry of a custom phi
    bool drop_loops = false;      // zero the diagonal (sensitivity studies)
};

GraphSpec distance_spec(std::uint32_t t);
GraphSpec dot_product_spec(std::uint32_t t);

/// phi(x, y) for the configured relation.
std::uint32_t eval_relation(const FieldCtx& ctx, const GraphSpec& spec, const Point& x, const Point& y);

inline bool related(const FieldCtx& ctx, const GraphSpec& spec, const Point& x, const Point& y) {
    return eval_relation(ctx, spec, x, y) == spec.t;
}

} // namespace fqg
