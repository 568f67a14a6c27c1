#pragma once

#include "bls/matrix.hpp"

namespace bls {

enum class Orientation { Upper, Lower };
enum class Side { Left, Right };

// Triangular factor with a strictly positive diagonal (the canonical
// convention used by every factorization here, which makes factors unique
// and lets incremental and direct routes be compared entrywise).
// Entries outside the declared triangle are exactly zero in the dense
// storage; the constructor enforces both invariants.
class TriangularMatrix {
public:
    TriangularMatrix() = default;
    TriangularMatrix(Orientation orientation, Matrix dense);

    static TriangularMatrix identity(Index order, Orientation orientation);

    Index order() const { return dense_.rows(); }
    Orientation orientation() const { return orientation_; }
    const Matrix& dense() const { return dense_; }
    double operator()(Index i, Index j) const { return dense_(i, j); }

private:
    Matrix dense_;
    Orientation orientation_ = Orientation::Upper;
};

// Lower-triangular L with L*L' = R for symmetric positive definite R
// (only the lower triangle of R is referenced). Blocked right-looking
// factorization; a pivot at or below 1e-14 * max(diag(R)) raises
// NonPositiveDefiniteError with the offending index.
TriangularMatrix cholesky(const Matrix& r);

// Upper-triangular F with F*F' = inv(R). Built directly by the recursive
// block factorization (append one column block at a time), not by
// inverting cholesky(r); the two routes agree up to roundoff and the
// equality is exercised by the tests.
TriangularMatrix inverse_cholesky(const Matrix& r);

// Forward/back substitution. Side::Left solves op(T)*X = B, Side::Right
// solves X*op(T) = B, with op the identity or the transpose.
Matrix solve_triangular(const TriangularMatrix& t, const Matrix& b,
                        Side side = Side::Left, bool transpose = false);

// Assemble the block factor [[F, T], [0, G]] from upper-triangular F, G.
TriangularMatrix extend_upper(const TriangularMatrix& f, const Matrix& t,
                              const TriangularMatrix& g);

// Solve R*X = B for symmetric positive definite R via one Cholesky
// factorization and two triangular solves.
Matrix spd_solve(const Matrix& r, const Matrix& b);

}  // namespace bls
