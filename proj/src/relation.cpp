#include "fqgraph/relation.hpp"

namespace fqg {

const char* relation_name(Relation r) {
    switch (r) {
        case Relation::Distance: return "dist";
        case Relation::DotProduct: return "prod";
        case Relation::Custom: return "custom";
    }
    return "?";
}

Relation relation_from_string(const std::string& s) {
    if (s == "dist" || s == "distance") return Relation::Distance;
    if (s == "prod" || s == "dot" || s == "dotproduct") return Relation::DotProduct;
    if (s == "custom") return Relation::Custom;
    fail(Errc::BadConfig, "unknown relation '" + s + "'");
}

GraphSpec distance_spec(std::uint32_t t) {
    GraphSpec s;
    s.relation = Relation::Distance;
    s.t = t;
    return s;
}

GraphSpec dot_product_spec(std::uint32_t t) {
    GraphSpec s;
    s.relation = Relation::DotProduct;
    s.t = t;
    return s;
}

std::uint32_t eval_relation(const FieldCtx& ctx, const GraphSpec& spec, const Point& x, const Point& y) {
    switch (spec.relation) {
        case Relation::Distance: return norm_of(ctx, sub(ctx, x, y));
        case Relation::DotProduct: return dot(ctx, x, y);
        case Relation::Custom:
            if (!spec.phi) fail(Errc::MissingInput, "custom relation needs phi");
            return spec.phi(ctx, x, y) % ctx.q;
    }
    fail(Errc::BadConfig, "bad relation enum");
}

} // namespace fqg
