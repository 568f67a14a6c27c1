#include "bls/solvers.hpp"

#include "testutil.hpp"

#include <doctest.h>

#include <vector>

using namespace bls;
using namespace testutil;

namespace {

const double kLambdaLadder[] = {1e-8, 1e-4, 1e-1, 1.0};

// D and C recomputed from their defining equations, used when a test needs
// the operation-local quantities of an update.
Matrix chol_d(const CholSolverState& st, const Matrix& h) {
    const Matrix& f = st.F.dense();
    return f * (f.transpose() * (st.A.transpose() * h));
}

Matrix residual_c(const Matrix& a, const Matrix& d, const Matrix& h) {
    return h - a * d;
}

}  // namespace

// ---------------------------------------------------------------------------
// init_chol
// ---------------------------------------------------------------------------

TEST_CASE("init_chol: identity data gives W = Y/2") {
    CholSolverState st = init_chol(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0);
    CHECK(max_abs_diff(st.W, 0.5 * Matrix::Identity(2, 2)) < 1e-14);
    CHECK(st.k == 2);
}

TEST_CASE("init_chol: zero input gives zero weights") {
    Matrix y(3, 2);
    y << 1, 2, 3, 4, 5, 6;
    CholSolverState st = init_chol(Matrix::Zero(3, 2), y, 1.0);
    CHECK(max_abs(st.W) == 0.0);
}

TEST_CASE("init_chol: matches the direct ridge solve") {
    UniformRng rng(30);
    Matrix a = normalized_random(rng, 50, 10);
    Matrix y = rng.uniform_matrix(50, 3);
    CholSolverState st = init_chol(a, y, 1e-2);
    CHECK(rel_diff(st.W, standard_ridge(a, y, 1e-2)) < 1e-8);
}

TEST_CASE("init_chol: dimension mismatch") {
    CHECK_THROWS_AS(init_chol(Matrix::Zero(3, 2), Matrix::Zero(4, 1), 1.0),
                    std::invalid_argument);
}

// ---------------------------------------------------------------------------
// update_chol_plain
// ---------------------------------------------------------------------------

TEST_CASE("update_chol_plain: orthogonal block decouples") {
    // A and H with disjoint support, so A'H = 0 exactly.
    Matrix a = Matrix::Zero(6, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 0.5;
    Matrix h = Matrix::Zero(6, 2);
    h(2, 0) = 2.0;
    h(3, 1) = 1.5;
    Matrix y = Matrix::Ones(6, 1);
    const double lambda = 0.3;

    CholSolverState st = init_chol(a, y, lambda);
    CholSolverState next = update_chol_plain(st, h, y);
    CHECK(max_abs(next.F.dense().topRightCorner(2, 2)) == 0.0);  // T = 0
    TriangularMatrix gOracle = inverse_cholesky(gram_plus_lambda(h, lambda));
    CHECK(max_abs_diff(next.F.dense().bottomRightCorner(2, 2), gOracle.dense()) < 1e-15);
}

TEST_CASE("update_chol_plain: decoupled 2x2 has F = I/sqrt(2)") {
    Matrix a(2, 1), h(2, 1);
    a << 1, 0;
    h << 0, 1;
    Matrix y = Matrix::Ones(2, 1);
    CholSolverState st = init_chol(a, y, 1.0);
    CholSolverState next = update_chol_plain(st, h, y);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(next.F(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-14));
    CHECK(next.F(1, 1) == doctest::Approx(inv_sqrt2).epsilon(1e-14));
    CHECK(next.F(0, 1) == 0.0);
}

TEST_CASE("update_chol_plain: extended factor matches the direct factorization") {
    UniformRng rng(31);
    Matrix a = normalized_random(rng, 60, 8);
    Matrix h = normalized_random(rng, 60, 4);
    Matrix y = rng.uniform_matrix(60, 2);
    const double lambda = 0.1;
    CholSolverState next = update_chol_plain(init_chol(a, y, lambda), h, y);
    TriangularMatrix direct = inverse_cholesky(gram_plus_lambda(hcat(a, h), lambda));
    CHECK(max_abs_diff(next.F.dense(), direct.dense()) < 1e-8);
    CHECK(rel_diff(next.W, standard_ridge(hcat(a, h), y, lambda)) < 1e-8);
}

TEST_CASE("update_chol_plain: collinear block with tiny lambda suggests the stable form") {
    UniformRng rng(32);
    Matrix a = 1e4 * normalized_random(rng, 30, 6);
    Matrix m = rng.uniform_matrix(6, 3);
    Matrix h = a * m;  // exactly inside the span of A
    Matrix y = rng.uniform_matrix(30, 1);
    CholSolverState st = init_chol(a, y, 1e-12);
    try {
        update_chol_plain(st, h, y);
        FAIL("expected the plain update to reject the indefinite inner matrix");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("stable") != std::string::npos);
    }
}

// ---------------------------------------------------------------------------
// update_chol_stable
// ---------------------------------------------------------------------------

TEST_CASE("update_chol_stable: residual block shrinks linearly in lambda when H = A*M") {
    UniformRng rng(33);
    Matrix a = normalized_random(rng, 20, 5);
    Matrix m = rng.uniform_matrix(5, 3);
    Matrix h = a * m;
    Matrix y = rng.uniform_matrix(20, 1);

    auto cnorm = [&](double lambda) {
        CholSolverState st = init_chol(a, y, lambda);
        return max_abs(residual_c(a, chol_d(st, h), h));
    };
    const double ratio = cnorm(1e-3) / cnorm(1e-6);
    CHECK(ratio > 300.0);
    CHECK(ratio < 3000.0);
}

TEST_CASE("update_chol_stable: orthogonal block reduces to the plain decoupled form") {
    Matrix a = Matrix::Zero(6, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 0.5;
    Matrix h = Matrix::Zero(6, 2);
    h(2, 0) = 2.0;
    h(3, 1) = 1.5;
    Matrix y = Matrix::Ones(6, 1);
    const double lambda = 0.25;

    CholSolverState st = init_chol(a, y, lambda);
    Matrix d = chol_d(st, h);
    CHECK(max_abs(d) == 0.0);
    CHECK(max_abs_diff(residual_c(a, d, h), h) == 0.0);
    CholSolverState next = update_chol_stable(st, h, y);
    TriangularMatrix gOracle = inverse_cholesky(gram_plus_lambda(h, lambda));
    CHECK(max_abs_diff(next.F.dense().bottomRightCorner(2, 2), gOracle.dense()) < 1e-15);
}

TEST_CASE("update_chol_stable: tiny-lambda factor still matches the direct route") {
    UniformRng rng(34);
    Matrix a = normalized_random(rng, 60, 8);
    Matrix h = normalized_random(rng, 60, 4);
    Matrix y = rng.uniform_matrix(60, 2);
    const double lambda = 1e-8;
    CholSolverState next = update_chol_stable(init_chol(a, y, lambda), h, y);
    TriangularMatrix direct = inverse_cholesky(gram_plus_lambda(hcat(a, h), lambda));
    CHECK(max_abs_diff(next.F.dense(), direct.dense()) < 1e-6);
}

TEST_CASE("plain and stable updates agree") {
    UniformRng rng(35);
    Matrix a = normalized_random(rng, 40, 6);
    Matrix h = normalized_random(rng, 40, 3);
    Matrix y = rng.uniform_matrix(40, 2);
    CholSolverState st = init_chol(a, y, 0.1);
    CholSolverState plain = update_chol_plain(st, h, y);
    CholSolverState stable = update_chol_stable(st, h, y);
    CHECK(max_abs_diff(plain.F.dense(), stable.F.dense()) < 1e-10);
    CHECK(max_abs_diff(plain.W, stable.W) < 1e-10);
}

// ---------------------------------------------------------------------------
// ridge inverse
// ---------------------------------------------------------------------------

TEST_CASE("init_ridge_inverse: identity and scalar cases") {
    RidgeInvSolverState st = init_ridge_inverse(Matrix::Identity(3, 3),
                                                Matrix::Identity(3, 3), 1.0);
    CHECK(max_abs_diff(st.Adag, 0.5 * Matrix::Identity(3, 3)) < 1e-14);

    Matrix a(1, 1), y(1, 1);
    a << 2.0;
    y << 1.0;
    RidgeInvSolverState sc = init_ridge_inverse(a, y, 1.0);
    CHECK(sc.Adag(0, 0) == doctest::Approx(0.4));  // (4+1)^-1 * 2
}

TEST_CASE("init_ridge_inverse: defining identity") {
    UniformRng rng(36);
    Matrix a = normalized_random(rng, 40, 12);
    Matrix y = rng.uniform_matrix(40, 3);
    const double lambda = 1e-4;
    RidgeInvSolverState st = init_ridge_inverse(a, y, lambda);
    Matrix r = gram_plus_lambda(a, lambda);
    CHECK(max_abs(r * st.Adag - a.transpose()) < 1e-9);
}

TEST_CASE("update_ridge_inverse: zero block appends zero rows") {
    UniformRng rng(37);
    Matrix a = normalized_random(rng, 20, 4);
    Matrix y = rng.uniform_matrix(20, 2);
    RidgeInvSolverState st = init_ridge_inverse(a, y, 0.5);
    RidgeInvSolverState next = update_ridge_inverse(st, Matrix::Zero(20, 2), y);
    CHECK(max_abs_diff(next.Adag.topRows(4), st.Adag) == 0.0);
    CHECK(max_abs(next.Adag.bottomRows(2)) == 0.0);
    CHECK(max_abs(next.W.bottomRows(2)) == 0.0);
    CHECK(max_abs_diff(next.W.topRows(4), st.W) == 0.0);
}

TEST_CASE("update_ridge_inverse: orthogonal single column collapses to a scalar solve") {
    Matrix a = Matrix::Zero(5, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    Matrix h = Matrix::Zero(5, 1);
    h(3, 0) = 3.0;
    Matrix y = Matrix::Ones(5, 1);
    RidgeInvSolverState st = init_ridge_inverse(a, y, 1.0);
    RidgeInvSolverState next = update_ridge_inverse(st, h, y);
    // D = 0, C = h, so the new row is (h'h + 1)^-1 h'.
    Matrix expected = h.transpose() / (h.squaredNorm() + 1.0);
    CHECK(max_abs_diff(next.Adag.bottomRows(1), expected) < 1e-15);
}

TEST_CASE("update_ridge_inverse: equals the direct ridge inverse of [A|H]") {
    UniformRng rng(38);
    Matrix a = normalized_random(rng, 50, 6);
    Matrix h = normalized_random(rng, 50, 3);
    Matrix y = rng.uniform_matrix(50, 2);
    const double lambda = 0.01;
    RidgeInvSolverState next = update_ridge_inverse(init_ridge_inverse(a, y, lambda), h, y);
    RidgeInvSolverState direct = init_ridge_inverse(hcat(a, h), y, lambda);
    CHECK(max_abs_diff(next.Adag, direct.Adag) < 1e-8);
    CHECK(rel_diff(next.W, standard_ridge(hcat(a, h), y, lambda)) < 1e-8);
    Matrix r = gram_plus_lambda(next.A, lambda);
    CHECK(max_abs(r * next.Adag - next.A.transpose()) < 1e-7);
}

// ---------------------------------------------------------------------------
// alternate B' formula
// ---------------------------------------------------------------------------

TEST_CASE("alt B': identical to the stable form for an orthogonal block") {
    Matrix a = Matrix::Zero(6, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    Matrix h = Matrix::Zero(6, 2);
    h(2, 0) = 1.0;
    h(3, 1) = 2.0;
    Matrix y = Matrix::Ones(6, 1);
    RidgeInvSolverState st = init_ridge_inverse(a, y, 1.0);
    Matrix alt = update_ridge_inverse_alt_b(st, h);
    RidgeInvSolverState next = update_ridge_inverse(st, h, y);
    CHECK(max_abs_diff(alt, next.Adag.bottomRows(2)) < 1e-15);
}

TEST_CASE("alt B': agrees with the stable form on a well-conditioned case") {
    UniformRng rng(39);
    Matrix a = normalized_random(rng, 40, 6);
    Matrix h = normalized_random(rng, 40, 3);
    Matrix y = rng.uniform_matrix(40, 1);
    RidgeInvSolverState st = init_ridge_inverse(a, y, 0.1);
    Matrix alt = update_ridge_inverse_alt_b(st, h);
    RidgeInvSolverState next = update_ridge_inverse(st, h, y);
    CHECK(max_abs_diff(alt, next.Adag.bottomRows(3)) < 1e-8);
}

TEST_CASE("alt B': near-collinear probe at tiny lambda (outcome recorded)") {
    UniformRng rng(40);
    Matrix a = normalized_random(rng, 40, 6);
    Matrix m = rng.uniform_matrix(6, 3);
    Matrix h = a * m + 1e-10 * normalized_random(rng, 40, 3);
    Matrix y = rng.uniform_matrix(40, 1);
    const double lambda = 1e-12;
    RidgeInvSolverState st = init_ridge_inverse(a, y, lambda);

    // The stable route must stay usable.
    RidgeInvSolverState next = update_ridge_inverse(st, h, y);
    CHECK(all_finite(next.Adag));
    CHECK(all_finite(next.W));

    try {
        Matrix alt = update_ridge_inverse_alt_b(st, h);
        Matrix d = st.Adag * h;
        Matrix c = h - a * d;
        Matrix inner = h.transpose() * c + lambda * Matrix::Identity(3, 3);
        const double residual = max_abs(inner * alt - c.transpose());
        MESSAGE("alt inner solve went through; residual = ", residual);
    } catch (const NonPositiveDefiniteError& e) {
        MESSAGE("alt inner matrix lost positive definiteness at pivot ", e.pivot());
    }
}

// ---------------------------------------------------------------------------
// generalized-inverse baselines
// ---------------------------------------------------------------------------

TEST_CASE("geninv: duplicated columns take the C=0 branch and keep the Penrose identity") {
    UniformRng rng(41);
    Matrix a = orthonormal_columns(rng, 30, 5);
    Matrix y = rng.uniform_matrix(30, 2);
    const double eps = 1e-10;
    GenInvSolverState st = init_geninv(a, y, eps);
    Matrix d = st.pinv() * a;  // H = A
    Matrix c = a - a * d;
    CHECK(greville_c_is_zero(c, a));
    GenInvSolverState next = update_geninv(st, a, y);
    Matrix full = next.A;
    Matrix penrose = full * next.pinv() * full - full;
    CHECK(max_abs(penrose) < 1e-6 * std::max(1.0, max_abs(full)));
}

TEST_CASE("geninv: orthogonal block reduces to its own pseudoinverse") {
    Matrix a = Matrix::Zero(8, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    Matrix h = Matrix::Zero(8, 2);
    h(2, 0) = 2.0;
    h(3, 1) = 0.5;
    Matrix y = Matrix::Ones(8, 1);
    const double eps = 1e-8;
    GenInvSolverState next = update_geninv(init_geninv(a, y, eps), h, y);
    Matrix r = h.transpose() * h;
    r.diagonal().array() += eps;
    Matrix hPinv = r.ldlt().solve(h.transpose());
    CHECK(max_abs_diff(next.pinv().bottomRows(2), hPinv) < 1e-12);
}

TEST_CASE("geninv: matches the normal-equations pseudoinverse oracle") {
    UniformRng rng(42);
    Matrix a = orthonormal_columns(rng, 40, 6);
    Matrix h = orthonormal_columns(rng, 40, 3);
    Matrix y = rng.uniform_matrix(40, 2);
    const double eps = 1e-10;
    GenInvSolverState next = update_geninv(init_geninv(a, y, eps), h, y);
    Matrix oracle = pinv_oracle(hcat(a, h), eps);
    CHECK(max_abs_diff(next.pinv(), oracle) < 1e-6);
}

TEST_CASE("genchol: orthogonal block agrees with the stable ridge update exactly") {
    Matrix a = Matrix::Zero(6, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 0.5;
    Matrix h = Matrix::Zero(6, 2);
    h(2, 0) = 2.0;
    h(3, 1) = 1.5;
    Matrix y = Matrix::Ones(6, 1);
    const double lambda = 0.3;  // shared between baseline eps and ridge lambda
    GenInvSolverState base = update_genchol(init_genchol(a, y, lambda), h, y);
    CholSolverState ridge = update_chol_stable(init_chol(a, y, lambda), h, y);
    CHECK(max_abs_diff(base.W, ridge.W) < 1e-14);
    CHECK(max_abs_diff(base.factor().dense(), ridge.F.dense()) < 1e-14);
}

TEST_CASE("genchol: tiny eps reproduces the least-squares solution") {
    UniformRng rng(43);
    Matrix a = orthonormal_columns(rng, 50, 8);
    Matrix h = orthonormal_columns(rng, 50, 4);
    Matrix y = rng.uniform_matrix(50, 2);
    GenInvSolverState next = update_genchol(init_genchol(a, y, 1e-10), h, y);
    Matrix full = hcat(a, h);
    Matrix ls = full.colPivHouseholderQr().solve(y);
    CHECK(max_abs_diff(next.W, ls) < 1e-5);
}

TEST_CASE("genchol: visible gap to the true ridge update at moderate lambda") {
    UniformRng rng(44);
    Matrix a = normalized_random(rng, 50, 8);
    Matrix h = normalized_random(rng, 50, 4);
    Matrix y = rng.uniform_matrix(50, 2);
    const double lambda = 1e-2;
    GenInvSolverState base = update_genchol(init_genchol(a, y, lambda), h, y);
    CholSolverState ridge = update_chol_stable(init_chol(a, y, lambda), h, y);
    CHECK(max_abs_diff(base.W, ridge.W) > 1e-6);  // the missing lambda*D'D term shows
}

// ---------------------------------------------------------------------------
// standard ridge
// ---------------------------------------------------------------------------

TEST_CASE("standard_ridge: identity and scalar cases") {
    Matrix y(2, 2);
    y << 1, 2, 3, 4;
    CHECK(max_abs_diff(standard_ridge(Matrix::Identity(2, 2), y, 1.0), 0.5 * y) < 1e-15);

    Matrix a(2, 1), yy(2, 1);
    a << 1, 1;
    yy << 1, 3;
    Matrix w = standard_ridge(a, yy, 2.0);
    CHECK(w(0, 0) == doctest::Approx(1.0));  // (2+2)^-1 * 4
}

TEST_CASE("standard_ridge: residual oracle") {
    UniformRng rng(45);
    Matrix a = normalized_random(rng, 100, 20);
    Matrix y = rng.uniform_matrix(100, 4);
    const double lambda = 1e-3;
    Matrix w = standard_ridge(a, y, lambda);
    CHECK(max_abs(gram_plus_lambda(a, lambda) * w - a.transpose() * y) < 1e-9);
}

// ---------------------------------------------------------------------------
// cross-solver properties
// ---------------------------------------------------------------------------

TEST_CASE("all incremental solvers track the direct ridge solution over update sequences") {
    UniformRng rng(46);
    for (int trial = 0; trial < 8; ++trial) {
        const double lambda = kLambdaLadder[trial % 4];
        const Index l = 80 + 15 * (trial % 5);
        const Index k = 6 + trial;
        Matrix a = normalized_random(rng, l, k);
        Matrix y = rng.uniform_matrix(l, 3);

        CholSolverState plain = init_chol(a, y, lambda);
        CholSolverState stable = plain;
        RidgeInvSolverState ridge = init_ridge_inverse(a, y, lambda);
        Matrix full = a;
        const int updates = 1 + trial % 3;
        for (int u = 0; u < updates; ++u) {
            Matrix h = normalized_random(rng, l, 2 + (trial + u) % 5);
            plain = update_chol_plain(plain, h, y);
            stable = update_chol_stable(stable, h, y);
            ridge = update_ridge_inverse(ridge, h, y);
            full = hcat(full, h);

            // Factor and defining identities hold after every update.
            Matrix r = gram_plus_lambda(full, lambda);
            CHECK(factor_identity_residual(stable.F, r) < 1e-7);
            CHECK(max_abs(r * ridge.Adag - full.transpose()) < 1e-7);
        }
        Matrix oracle = standard_ridge(full, y, lambda);
        const double tol = lambda <= 1e-8 ? 1e-4 : 1e-6;
        CHECK(rel_diff(plain.W, oracle) < tol);
        CHECK(rel_diff(stable.W, oracle) < tol);
        CHECK(rel_diff(ridge.W, oracle) < tol);
    }
}

TEST_CASE("cross-term identities of the stable inner matrix") {
    UniformRng rng(47);
    for (int trial = 0; trial < 6; ++trial) {
        const double lambda = kLambdaLadder[trial % 4];
        Matrix a = normalized_random(rng, 60, 7);
        Matrix h = normalized_random(rng, 60, 4);
        Matrix y = rng.uniform_matrix(60, 2);
        RidgeInvSolverState st = init_ridge_inverse(a, y, lambda);
        Matrix d = st.Adag * h;
        Matrix c = h - a * d;

        Matrix lhs = d.transpose() * a.transpose() * c;
        Matrix rhs = lambda * d.transpose() * d;
        CHECK(max_abs_diff(lhs, rhs) <= 1e-8 * (1.0 + max_abs(rhs)));

        Matrix hc = h.transpose() * c;
        Matrix decomp = c.transpose() * c + rhs;
        CHECK(max_abs_diff(hc, decomp) <= 1e-8 * (1.0 + max_abs(hc)));
    }
}

TEST_CASE("stable B' converges to the Greville branch values as lambda vanishes") {
    UniformRng rng(48);
    Matrix a = normalized_random(rng, 40, 8);
    Matrix y = rng.uniform_matrix(40, 2);
    Matrix hFresh = normalized_random(rng, 40, 3);  // C != 0 branch
    Matrix m = rng.uniform_matrix(8, 3);
    Matrix hSpan = a * m;  // C = 0 branch

    Matrix apinv = pinv_exact(a);

    SUBCASE("C != 0") {
        Matrix dBar = apinv * hFresh;
        Matrix cBar = hFresh - a * dBar;
        Matrix bBar = pinv_exact(cBar);  // (C'C)^-1 C'
        double prev = 1e300;
        for (double lambda : {1e-2, 1e-4, 1e-6, 1e-8}) {
            RidgeInvSolverState st = init_ridge_inverse(a, y, lambda);
            RidgeInvSolverState next = update_ridge_inverse(st, hFresh, y);
            const double gap = max_abs_diff(next.Adag.bottomRows(3), bBar);
            CHECK(gap < prev);
            prev = gap;
        }
        CHECK(prev < 1e-5);
    }

    SUBCASE("C = 0 (H inside the span of A)") {
        Matrix dBar = apinv * hSpan;
        Matrix s = dBar.transpose() * dBar + Matrix::Identity(3, 3);
        Matrix bBar = s.ldlt().solve(dBar.transpose() * apinv);
        double prev = 1e300;
        for (double lambda : {1e-2, 1e-4, 1e-6, 1e-8}) {
            RidgeInvSolverState st = init_ridge_inverse(a, y, lambda);
            RidgeInvSolverState next = update_ridge_inverse(st, hSpan, y);
            const double gap = max_abs_diff(next.Adag.bottomRows(3), bBar);
            CHECK(gap < prev);
            prev = gap;
        }
        CHECK(prev < 1e-5);
    }
}

TEST_CASE("ridge weights approach the pseudoinverse solution as lambda vanishes") {
    UniformRng rng(49);
    Matrix a = orthonormal_columns(rng, 50, 8);
    Matrix h = orthonormal_columns(rng, 50, 4);
    Matrix y = rng.uniform_matrix(50, 2);
    Matrix full = hcat(a, h);
    Matrix wPinv = pinv_oracle(full, 1e-12) * y;
    double prev = 1e300;
    for (double lambda : {1e-2, 1e-4, 1e-6, 1e-8}) {
        CholSolverState st = update_chol_stable(init_chol(a, y, lambda), h, y);
        const double gap = max_abs_diff(st.W, wPinv);
        CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("the stable inner matrix stays positive definite down to lambda = 1e-12") {
    UniformRng rng(50);
    for (double lambda : {1e-12, 1e-8, 1e-2, 1.0}) {
        Matrix a = normalized_random(rng, 40, 6);
        Matrix m = rng.uniform_matrix(6, 3);
        Matrix h = a * m;  // worst case: no fresh directions
        Matrix y = rng.uniform_matrix(40, 1);
        RidgeInvSolverState st = init_ridge_inverse(a, y, lambda);
        Matrix d = st.Adag * h;
        Matrix c = h - a * d;
        Matrix inner = c.transpose() * c + lambda * (d.transpose() * d);
        inner = 0.5 * (inner + inner.transpose()).eval();
        inner.diagonal().array() += lambda;
        CHECK_NOTHROW(cholesky(inner));
    }
}

TEST_CASE("chol-stable and ridge-inverse give identical classifications") {
    UniformRng rng(51);
    for (double lambda : {1e-6, 1e-1}) {
        Matrix a = normalized_random(rng, 70, 9);
        Matrix h = normalized_random(rng, 70, 5);
        Matrix y = random_one_hot(rng, 70, 4);
        CholSolverState chol = update_chol_stable(init_chol(a, y, lambda), h, y);
        RidgeInvSolverState ridge = update_ridge_inverse(init_ridge_inverse(a, y, lambda), h, y);
        Matrix full = hcat(a, h);
        Matrix predChol = full * chol.W;
        Matrix predRidge = full * ridge.W;
        for (Index i = 0; i < full.rows(); ++i) {
            Index ac, ar;
            predChol.row(i).maxCoeff(&ac);
            predRidge.row(i).maxCoeff(&ar);
            CHECK(ac == ar);
        }
    }
}

TEST_CASE("solver facade: kinds round-trip and clones are independent") {
    CHECK(solver_kind_from_string("chol") == SolverKind::CholStable);
    CHECK(solver_kind_from_string("ridge-inv") == SolverKind::RidgeInverse);
    CHECK_THROWS_AS(solver_kind_from_string("nope"), std::invalid_argument);
    for (SolverKind kind : {SolverKind::CholStable, SolverKind::CholPlain,
                            SolverKind::RidgeInverse, SolverKind::GenInv, SolverKind::GenChol,
                            SolverKind::Standard}) {
        CHECK(solver_kind_from_string(to_string(kind)) == kind);
        UniformRng rng(60 + static_cast<int>(kind));
        Matrix a = normalized_random(rng, 30, 5);
        Matrix h = normalized_random(rng, 30, 2);
        Matrix y = rng.uniform_matrix(30, 2);
        auto solver = make_solver(kind);
        solver->init(a, y, 1e-2);
        auto copy = solver->clone();
        copy->update(h, y);
        CHECK(solver->node_count() == 5);  // original untouched
        CHECK(copy->node_count() == 7);
        CHECK(copy->kind() == kind);
    }
}
