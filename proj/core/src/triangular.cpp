#include "bls/triangular.hpp"

#include <cmath>

namespace bls {

namespace {

constexpr double kPivotRel = 1e-14;  // pivot <= kPivotRel*max(diag) is non-PD
constexpr Index kBlock = 192;

void require_square(const Matrix& r, const char* what) {
    if (r.rows() != r.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square, got " +
                                    shape_of(r));
    }
}

double pivot_threshold(const Matrix& r) {
    if (r.rows() == 0) return 0.0;
    return kPivotRel * r.diagonal().maxCoeff();
}

// Unblocked lower Cholesky of the dense block `a`, in place. `offset` maps
// local pivot indices back to the full matrix for error reporting.
void cholesky_unblocked(Eigen::Ref<Matrix> a, double threshold, Index offset) {
    const Index n = a.rows();
    for (Index j = 0; j < n; ++j) {
        double d = a(j, j);
        if (d <= threshold) throw NonPositiveDefiniteError(offset + j, d);
        const double root = std::sqrt(d);
        a(j, j) = root;
        const Index below = n - j - 1;
        if (below > 0) {
            a.col(j).tail(below) /= root;
            a.bottomRightCorner(below, below)
                .selfadjointView<Eigen::Lower>()
                .rankUpdate(a.col(j).tail(below), -1.0);
        }
    }
}

// Direct recursion for the upper factor F with F*F' = inv(S): grow one
// column at a time using g = 1/sqrt(u - p'FF'p), t = -g*F(F'p). Writes F
// into `f` (already zeroed). O(2/3 m^3).
void inverse_cholesky_unblocked(const Eigen::Ref<const Matrix>& s, Eigen::Ref<Matrix> f,
                                double threshold, Index offset) {
    const Index m = s.rows();
    for (Index j = 0; j < m; ++j) {
        double d = s(j, j);
        if (j > 0) {
            auto fj = f.topLeftCorner(j, j);
            Eigen::VectorXd u = fj.triangularView<Eigen::Upper>().transpose() * s.col(j).head(j);
            d -= u.squaredNorm();
            if (d <= threshold) throw NonPositiveDefiniteError(offset + j, d);
            const double g = 1.0 / std::sqrt(d);
            f.col(j).head(j).noalias() = fj.triangularView<Eigen::Upper>() * u;
            f.col(j).head(j) *= -g;
            f(j, j) = g;
        } else {
            if (d <= threshold) throw NonPositiveDefiniteError(offset, d);
            f(0, 0) = 1.0 / std::sqrt(d);
        }
    }
}

}  // namespace

TriangularMatrix::TriangularMatrix(Orientation orientation, Matrix dense)
    : dense_(std::move(dense)), orientation_(orientation) {
    if (dense_.rows() != dense_.cols()) {
        throw std::invalid_argument("TriangularMatrix: storage must be square, got " +
                                    shape_of(dense_));
    }
    const Index n = dense_.rows();
    if (orientation_ == Orientation::Upper) {
        for (Index j = 0; j + 1 < n; ++j) dense_.col(j).tail(n - j - 1).setZero();
    } else {
        for (Index j = 1; j < n; ++j) dense_.col(j).head(j).setZero();
    }
    for (Index j = 0; j < n; ++j) {
        if (!(dense_(j, j) > 0.0)) {
            throw std::invalid_argument("TriangularMatrix: diagonal entry " + std::to_string(j) +
                                        " is not strictly positive");
        }
    }
}

TriangularMatrix TriangularMatrix::identity(Index order, Orientation orientation) {
    return TriangularMatrix(orientation, Matrix::Identity(order, order));
}

TriangularMatrix cholesky(const Matrix& r) {
    require_square(r, "cholesky");
    const Index n = r.rows();
    const double threshold = pivot_threshold(r);
    Matrix l = r;
    for (Index j0 = 0; j0 < n; j0 += kBlock) {
        const Index bs = std::min(kBlock, n - j0);
        auto a11 = l.block(j0, j0, bs, bs);
        cholesky_unblocked(a11, threshold, j0);
        const Index rest = n - j0 - bs;
        if (rest > 0) {
            auto a21 = l.block(j0 + bs, j0, rest, bs);
            // A21 := A21 * L11^-T, then trailing update A22 -= A21*A21'.
            a11.transpose().triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(a21);
            l.block(j0 + bs, j0 + bs, rest, rest)
                .selfadjointView<Eigen::Lower>()
                .rankUpdate(a21, -1.0);
        }
    }
    return TriangularMatrix(Orientation::Lower, std::move(l));
}

TriangularMatrix inverse_cholesky(const Matrix& r) {
    require_square(r, "inverse_cholesky");
    const Index n = r.rows();
    const double threshold = pivot_threshold(r);
    Matrix f = Matrix::Zero(n, n);
    const Index first = std::min(kBlock, n);
    inverse_cholesky_unblocked(r.topLeftCorner(first, first), f.topLeftCorner(first, first),
                               threshold, 0);
    // Append column blocks: with the current factor Fk and the bordering
    // blocks P = R[0:k, k:k+b], U = R[k:k+b, k:k+b],
    //   G*G' = inv(U - M'M) with M = Fk'P,  T = -Fk*(M*G),
    // and the factor grows to [[Fk, T], [0, G]].
    for (Index k = first; k < n; k += kBlock) {
        const Index bs = std::min(kBlock, n - k);
        auto fk = f.topLeftCorner(k, k);
        Matrix m(k, bs);
        m.noalias() = fk.triangularView<Eigen::Upper>().transpose() * r.block(0, k, k, bs);
        Matrix s(bs, bs);
        s.noalias() = -m.transpose() * m;
        s += r.block(k, k, bs, bs);
        s = 0.5 * (s + s.transpose()).eval();
        inverse_cholesky_unblocked(s, f.block(k, k, bs, bs), threshold, k);
        Matrix mg(k, bs);
        mg.noalias() = m * f.block(k, k, bs, bs).triangularView<Eigen::Upper>();
        f.block(0, k, k, bs).noalias() = fk.triangularView<Eigen::Upper>() * mg;
        f.block(0, k, k, bs) *= -1.0;
    }
    return TriangularMatrix(Orientation::Upper, std::move(f));
}

Matrix solve_triangular(const TriangularMatrix& t, const Matrix& b, Side side, bool transpose) {
    const Index needed = side == Side::Left ? b.rows() : b.cols();
    if (t.order() != needed) {
        throw std::invalid_argument("solve_triangular: T has order " + std::to_string(t.order()) +
                                    ", B is " + shape_of(b));
    }
    Matrix x = b;
    const Matrix& d = t.dense();
    const bool upper = t.orientation() == Orientation::Upper;
    // op(T) as a triangular view: transposing flips the stored triangle.
    if (side == Side::Left) {
        if (!transpose) {
            if (upper)
                d.triangularView<Eigen::Upper>().solveInPlace(x);
            else
                d.triangularView<Eigen::Lower>().solveInPlace(x);
        } else {
            if (upper)
                d.transpose().triangularView<Eigen::Lower>().solveInPlace(x);
            else
                d.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
        }
    } else {
        if (!transpose) {
            if (upper)
                d.triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(x);
            else
                d.triangularView<Eigen::Lower>().solveInPlace<Eigen::OnTheRight>(x);
        } else {
            if (upper)
                d.transpose().triangularView<Eigen::Lower>().solveInPlace<Eigen::OnTheRight>(x);
            else
                d.transpose().triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(x);
        }
    }
    return x;
}

TriangularMatrix extend_upper(const TriangularMatrix& f, const Matrix& t,
                              const TriangularMatrix& g) {
    if (f.orientation() != Orientation::Upper || g.orientation() != Orientation::Upper) {
        throw std::invalid_argument("extend_upper: both factors must be upper triangular");
    }
    const Index k = f.order();
    const Index q = g.order();
    if (t.rows() != k || t.cols() != q) {
        throw std::invalid_argument("extend_upper: off-diagonal block is " + shape_of(t) +
                                    ", expected " + std::to_string(k) + "x" + std::to_string(q));
    }
    Matrix out = Matrix::Zero(k + q, k + q);
    out.topLeftCorner(k, k) = f.dense();
    out.topRightCorner(k, q) = t;
    out.bottomRightCorner(q, q) = g.dense();
    return TriangularMatrix(Orientation::Upper, std::move(out));
}

Matrix spd_solve(const Matrix& r, const Matrix& b) {
    if (r.rows() != b.rows()) {
        throw std::invalid_argument("spd_solve: R is " + shape_of(r) + ", B is " + shape_of(b));
    }
    TriangularMatrix l = cholesky(r);
    Matrix z = solve_triangular(l, b, Side::Left, false);
    return solve_triangular(l, z, Side::Left, true);
}

}  // namespace bls
