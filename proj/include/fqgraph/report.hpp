#pragma once

#include "fqgraph/numeric.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fqg {

/// Outcome of one inequality check.
///  Pass        - hypothesis met and the inequality holds.
///  Fail        - hypothesis met, inequality violated: a counterexample.
///  Vacuous     - hypothesis not met; the raw sides are still reported.
///  Conditional - inequality violated, but the statement carries an
///                unquantified "q sufficiently large" caveat, so the
///                violation is not a counterexample at this scale.
enum class Verdict { Pass, Fail, Vacuous, Conditional };

const char* verdict_name(Verdict v);

/// One theorem instance: hypothesis evaluation, exact left side, bound on
/// the right, and the verdict.
struct BoundReport {
    std::string theorem;
    bool hypothesis_satisfied = true;
    std::vector<std::pair<std::string, std::string>> hypothesis_terms;
    Rat lhs_exact{0, 1};
    bool lhs_is_exact = true; // false when the left side itself is a float
    double lhs = 0;
    double rhs = 0;
    Verdict verdict = Verdict::Pass;
    bool exact_comparison = false; // pass decided in exact integer arithmetic
    std::string note;

    bool pass() const { return verdict == Verdict::Pass; }
    bool vacuous() const { return verdict == Verdict::Vacuous; }
    bool conditional() const { return verdict == Verdict::Conditional; }
    bool fail() const { return verdict == Verdict::Fail; }
    double slack() const { return rhs - lhs; }

    void add_term(const std::string& name, const std::string& value) {
        hypothesis_terms.emplace_back(name, value);
    }
    void add_term(const std::string& name, double value);
};

} // namespace fqg
