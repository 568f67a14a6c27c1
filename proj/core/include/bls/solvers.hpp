#pragma once

#include "bls/matrix.hpp"
#include "bls/triangular.hpp"

#include <memory>
#include <string_view>
#include <variant>

namespace bls {

// ---------------------------------------------------------------------------
// Output-weight solvers for the growing linear system Yhat = A*W, where A
// gains q columns per node insertion: A_{k+q} = [A_k | H].
//
// Five routes are provided:
//   * chol (plain/stable)  - ridge solution from the inverse Cholesky factor
//                            F with F*F' = inv(A'A + lambda*I), updated
//                            blockwise instead of refactorized.
//   * ridge inverse        - ridge solution from the explicit ridge inverse
//                            Adag = inv(A'A + lambda*I)*A', updated by a
//                            Greville-style recursion extended from the
//                            generalized inverse to the ridge inverse.
//   * geninv / genchol     - the generalized-inverse baselines that assume
//                            lambda -> 0 and run with a tiny lambda_eps.
//   * standard_ridge       - direct solve, the oracle for all of the above.
// ---------------------------------------------------------------------------

// Inverse-Cholesky solver state: F*F'*(A'A + lambda*I) = I and
// W = F*F'*A'*Y for the labels it was trained on.
struct CholSolverState {
    TriangularMatrix F;  // upper, order k
    Matrix A;            // l x k accumulated expanded input
    Matrix W;            // k x c output weights
    double lambda = 0.0;
    Index k = 0;
};

CholSolverState init_chol(const Matrix& a, const Matrix& y, double lambda);

// One-block extension of F and W. The Schur-complement inner matrix is
// formed as H'H + lambda*I - M'M with M = F'A'H; it can lose positive
// definiteness to roundoff when lambda is tiny, in which case the error
// suggests the stable variant.
CholSolverState update_chol_plain(const CholSolverState& state, const Matrix& h,
                                  const Matrix& y);

// Same mathematical result through D = F*F'*A'H and C = H - A*D; the inner
// matrix C'C + lambda*D'D + lambda*I is positive definite by construction
// for any lambda > 0.
CholSolverState update_chol_stable(const CholSolverState& state, const Matrix& h,
                                   const Matrix& y);

// Explicit ridge-inverse solver state: Adag = inv(A'A + lambda*I)*A' and
// W = Adag*Y.
struct RidgeInvSolverState {
    Matrix Adag;  // k x l ridge inverse
    Matrix A;     // l x k
    Matrix W;     // k x c
    double lambda = 0.0;
    Index k = 0;
};

RidgeInvSolverState init_ridge_inverse(const Matrix& a, const Matrix& y,
                                       double lambda);

// Greville-style block update of the ridge inverse:
//   D = Adag*H, C = H - A*D, B' = inv(C'C + lambda*D'D + lambda*I)*C',
//   Adag_{k+q} = [Adag - D*B'; B'], W_{k+q} = [W - D*B'Y; B'Y].
RidgeInvSolverState update_ridge_inverse(const RidgeInvSolverState& state,
                                         const Matrix& h, const Matrix& y);

// The algebraically equal but numerically fragile form
// B' = inv(H'C + lambda*I)*C'. Provided for the stability comparison only;
// throws NonPositiveDefiniteError when roundoff destroys the positive
// definiteness of the symmetrized inner matrix.
Matrix update_ridge_inverse_alt_b(const RidgeInvSolverState& state, const Matrix& h);

// Generalized-inverse baselines (lambda -> 0 emulated with lambda_eps).
enum class GenInvVariant { PseudoinverseExplicit, Factorized };

struct GenInvSolverState {
    GenInvVariant variant = GenInvVariant::PseudoinverseExplicit;
    std::variant<Matrix, TriangularMatrix> inv;  // Apinv (k x l) or Fbar (upper k)
    Matrix A;  // l x k
    Matrix W;  // k x c
    double lambda_eps = 1e-8;
    Index k = 0;

    const Matrix& pinv() const { return std::get<Matrix>(inv); }
    const TriangularMatrix& factor() const { return std::get<TriangularMatrix>(inv); }
};

GenInvSolverState init_geninv(const Matrix& a, const Matrix& y, double lambda_eps);

// Greville recursion for the column-partitioned [A | H]. The C = 0 branch
// (H in the column span of A) is taken when max|C| <= 1e-10*(1 + max|H|)
// and uses B' = inv(I + D'D)*D'*Apinv.
GenInvSolverState update_geninv(const GenInvSolverState& state, const Matrix& h,
                                const Matrix& y);

GenInvSolverState init_genchol(const Matrix& a, const Matrix& y, double lambda_eps);

// Factorized baseline: like update_chol_stable but the inner matrix omits
// the lambda*D'D term (C'C + lambda_eps*I), and W is updated through C'Y.
GenInvSolverState update_genchol(const GenInvSolverState& state, const Matrix& h,
                                 const Matrix& y);

// Direct ridge regression: one SPD solve of (A'A + lambda*I)W = A'Y.
// The oracle every incremental solver is tested against.
Matrix standard_ridge(const Matrix& a, const Matrix& y, double lambda);

// Threshold for the Greville C = 0 branch.
bool greville_c_is_zero(const Matrix& c, const Matrix& h);

// ---------------------------------------------------------------------------
// Runtime-selectable solver facade used by the network layer.
// ---------------------------------------------------------------------------

enum class SolverKind { CholStable, CholPlain, RidgeInverse, GenInv, GenChol, Standard };

const char* to_string(SolverKind kind);
SolverKind solver_kind_from_string(std::string_view name);

class OutputSolver {
public:
    virtual ~OutputSolver() = default;
    virtual void init(const Matrix& a, const Matrix& y, double lambda) = 0;
    virtual void update(const Matrix& h, const Matrix& y) = 0;
    virtual const Matrix& weights() const = 0;
    virtual const Matrix& expanded_input() const = 0;
    virtual Index node_count() const = 0;
    virtual SolverKind kind() const = 0;
    virtual std::unique_ptr<OutputSolver> clone() const = 0;
};

// For the generalized-inverse baselines `lambda` plays the role of
// lambda_eps, which reproduces the usual benchmarking protocol where every
// algorithm is handed the same ridge parameter.
std::unique_ptr<OutputSolver> make_solver(SolverKind kind);

}  // namespace bls
