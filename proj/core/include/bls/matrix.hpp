#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace bls {

// Dense real matrix used as the universal carrier throughout the library.
// Column-major double storage with explicit row/column counts.
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Raised by the factorizations when a pivot drops below the positive
// definiteness cutoff (1e-14 times the largest diagonal of the input).
class NonPositiveDefiniteError : public std::runtime_error {
public:
    NonPositiveDefiniteError(Index pivot, double value);
    Index pivot() const noexcept { return pivot_; }
    double value() const noexcept { return value_; }

private:
    Index pivot_;
    double value_;
};

std::string shape_of(const Matrix& m);

bool all_finite(const Matrix& m);

// Checked product A*B. Throws std::invalid_argument naming both shapes
// when the inner dimensions disagree.
Matrix matmul(const Matrix& a, const Matrix& b);

// A'A + lambda*I of order A.cols(), exactly symmetric: the off-diagonal
// entries are averaged with their transposes before the shift is applied,
// so downstream factorizations never see asymmetric drift.
// Requires lambda > 0.
Matrix gram_plus_lambda(const Matrix& a, double lambda);

}  // namespace bls
