#pragma once

#include "fqgraph/field.hpp"
#include "fqgraph/numeric.hpp"

#include <string>
#include <vector>

namespace fqg {

/// Deterministic generators for the point sets used in sweeps. Random
/// recipes are pure functions of (ctx, recipe, seed); the stream is
/// SplitMix64, so results are identical across platforms.
struct SetRecipe {
    enum class Kind {
        Full,           // all of F_q^d
        RandomDensity,  // keep each point with probability p
        RandomSize,     // m distinct points via a seeded partial shuffle
        Sphere,         // S_t
        Product,        // A x A x ... x A for A subset of F_q
        AffineSubspace, // shift + span(basis)
        SphereUnion,    // union of translates of S_t
        File,           // point-set text file
    };

    Kind kind = Kind::Full;
    double p = 0.5;
    std::uint64_t m = 0;
    std::uint32_t t = 0;
    std::vector<std::uint32_t> product_values;
    std::vector<Point> basis;
    Point shift;
    std::vector<Point> translates;
    std::string path;
    std::uint64_t seed = 0;
    bool seed_explicit = false;
};

/// Mini-language: `full`, `rand:p=0.5`, `randn:m=50`, `sphere:t=1`,
/// `prod:A=0,1,2`, `file:PATH`, each optionally with `:seed=N`.
SetRecipe parse_recipe(const std::string& text);

std::string recipe_to_string(const SetRecipe& r);

PointSet generate_set(const FieldCtx& ctx, const SetRecipe& recipe);

/// Convenience: parse, override the seed when the recipe does not pin one,
/// and generate.
PointSet generate_set(const FieldCtx& ctx, const std::string& recipe, std::uint64_t default_seed);

} // namespace fqg
