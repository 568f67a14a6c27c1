#pragma once

#include "bls/solvers.hpp"

#include <cstdint>

namespace bls {

// Cost model for one incremental step: q columns added to an l x k system
// with c outputs. All counts must be >= 1.
struct FlopModel {
    std::int64_t q = 1;
    std::int64_t k = 1;
    std::int64_t l = 1;
    std::int64_t c = 1;
};

enum class FlopAlgo {
    Original,            // explicit generalized inverse, Greville update
    RidgeInverse,        // explicit ridge inverse (Original + q^2*k for lambda*D'D)
    ExistingChol,        // factorized generalized-inverse baseline
    ProposedChol,        // inverse-Cholesky ridge update, plain form
    ProposedCholStable,  // inverse-Cholesky ridge update, stable form
    StandardRefit,       // full ridge re-solve at k+q nodes (reference column)
};

FlopAlgo flop_algo_for(SolverKind kind);

// Full per-update polynomial, e.g. Original = (6qk + 3q^2 + 2cq)l + 2cqk + q^3.
double flops_per_update(const FlopModel& m, FlopAlgo algo);

// One-time initialization cost at k nodes: 3k^2*l + k^3 + 2klc for the
// inverse routes, k^2*l + (2/3)k^3 + 2klc + 2k^2*c for the Cholesky routes.
double flops_init(const FlopModel& m, FlopAlgo algo);

// Leading l-proportional term of the update cost, exact in integers
// (e.g. (2qk + q^2)*l for ProposedChol). Ratios of these reproduce the
// closed forms 3 and 2 - 1/(1 + 2k/q).
std::int64_t dominant_update_flops(const FlopModel& m, FlopAlgo algo);

double dominant_update_ratio(const FlopModel& m, FlopAlgo numerator, FlopAlgo denominator);

}  // namespace bls
