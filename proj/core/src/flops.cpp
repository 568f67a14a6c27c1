#include "bls/flops.hpp"

#include <stdexcept>

namespace bls {

namespace {

void validate(const FlopModel& m) {
    if (m.q < 1 || m.k < 1 || m.l < 1 || m.c < 1) {
        throw std::invalid_argument("FlopModel: all counts must be >= 1");
    }
}

double d(std::int64_t v) { return static_cast<double>(v); }

}  // namespace

FlopAlgo flop_algo_for(SolverKind kind) {
    switch (kind) {
        case SolverKind::CholStable: return FlopAlgo::ProposedCholStable;
        case SolverKind::CholPlain: return FlopAlgo::ProposedChol;
        case SolverKind::RidgeInverse: return FlopAlgo::RidgeInverse;
        case SolverKind::GenInv: return FlopAlgo::Original;
        case SolverKind::GenChol: return FlopAlgo::ExistingChol;
        case SolverKind::Standard: return FlopAlgo::StandardRefit;
    }
    throw std::invalid_argument("flop_algo_for: unknown kind");
}

double flops_per_update(const FlopModel& m, FlopAlgo algo) {
    validate(m);
    const double q = d(m.q), k = d(m.k), l = d(m.l), c = d(m.c);
    switch (algo) {
        case FlopAlgo::Original:
            return (6 * q * k + 3 * q * q + 2 * c * q) * l + 2 * c * q * k + q * q * q;
        case FlopAlgo::RidgeInverse:
            // the explicit ridge inverse adds q^2*k for lambda*D'D
            return flops_per_update(m, FlopAlgo::Original) + q * q * k;
        case FlopAlgo::ExistingChol:
            return (4 * q * k + q * q + 2 * c * q) * l + 2 * q * k * k +
                   (q * q + 4 * c * q) * k + 2.0 / 3.0 * q * q * q + 2 * c * q * q;
        case FlopAlgo::ProposedChol:
            return (2 * q * k + q * q + 2 * c * q) * l + 2 * q * k * k +
                   (2 * q * q + 4 * c * q) * k + 2.0 / 3.0 * q * q * q + 2 * c * q * q;
        case FlopAlgo::ProposedCholStable:
            // ExistingChol plus q^2*k for lambda*D'D, minus the 2cqk saved by
            // the C'Y-form weight update.
            return (4 * q * k + q * q + 2 * c * q) * l + 2 * q * k * k +
                   (2 * q * q + 2 * c * q) * k + 2.0 / 3.0 * q * q * q + 2 * c * q * q;
        case FlopAlgo::StandardRefit: {
            const double n = k + q;  // re-solves the whole system at k+q nodes
            return 3 * n * n * l + n * n * n + 2 * n * l * c;
        }
    }
    throw std::invalid_argument("flops_per_update: unknown algorithm");
}

double flops_init(const FlopModel& m, FlopAlgo algo) {
    validate(m);
    const double k = d(m.k), l = d(m.l), c = d(m.c);
    switch (algo) {
        case FlopAlgo::Original:
        case FlopAlgo::RidgeInverse:
        case FlopAlgo::StandardRefit:
            return 3 * k * k * l + k * k * k + 2 * k * l * c;
        case FlopAlgo::ExistingChol:
        case FlopAlgo::ProposedChol:
        case FlopAlgo::ProposedCholStable:
            return k * k * l + 2.0 / 3.0 * k * k * k + 2 * k * l * c + 2 * k * k * c;
    }
    throw std::invalid_argument("flops_init: unknown algorithm");
}

std::int64_t dominant_update_flops(const FlopModel& m, FlopAlgo algo) {
    validate(m);
    const std::int64_t q = m.q, k = m.k, l = m.l;
    switch (algo) {
        case FlopAlgo::Original:
        case FlopAlgo::RidgeInverse:
            return (6 * q * k + 3 * q * q) * l;
        case FlopAlgo::ExistingChol:
        case FlopAlgo::ProposedCholStable:
            return (4 * q * k + q * q) * l;
        case FlopAlgo::ProposedChol:
            return (2 * q * k + q * q) * l;
        case FlopAlgo::StandardRefit:
            return 3 * (k + q) * (k + q) * l;
    }
    throw std::invalid_argument("dominant_update_flops: unknown algorithm");
}

double dominant_update_ratio(const FlopModel& m, FlopAlgo numerator, FlopAlgo denominator) {
    return static_cast<double>(dominant_update_flops(m, numerator)) /
           static_cast<double>(dominant_update_flops(m, denominator));
}

}  // namespace bls
