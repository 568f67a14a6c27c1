#include "bls/solvers.hpp"

#include <stdexcept>
#include <string>

namespace bls {

namespace {

void require_rows_match(const Matrix& a, const Matrix& b, const char* op, const char* bname) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument(std::string(op) + ": A is " + shape_of(a) + " but " + bname +
                                    " is " + shape_of(b));
    }
}

void require_nonempty(const Matrix& m, const char* op, const char* name) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw std::invalid_argument(std::string(op) + ": " + name + " must be nonempty, got " +
                                    shape_of(m));
    }
}

Matrix symmetrized(Matrix m) {
    return 0.5 * (m + m.transpose()).eval();
}

// C'C + lambda*D'D + lambda*I, the always-positive-definite inner matrix of
// the stable updates.
Matrix stable_inner(const Matrix& c, const Matrix& d, double lambda) {
    Matrix s(c.cols(), c.cols());
    s.noalias() = c.transpose() * c;
    s.noalias() += lambda * (d.transpose() * d);
    s = symmetrized(std::move(s));
    s.diagonal().array() += lambda;
    return s;
}

Matrix hcat(const Matrix& a, const Matrix& h) {
    Matrix out(a.rows(), a.cols() + h.cols());
    out.leftCols(a.cols()) = a;
    out.rightCols(h.cols()) = h;
    return out;
}

Matrix vcat(const Matrix& top, const Matrix& bottom) {
    Matrix out(top.rows() + bottom.rows(), top.cols());
    out.topRows(top.rows()) = top;
    out.bottomRows(bottom.rows()) = bottom;
    return out;
}

}  // namespace

// --------------------------------------------------------------------------
// Inverse-Cholesky route
// --------------------------------------------------------------------------

CholSolverState init_chol(const Matrix& a, const Matrix& y, double lambda) {
    require_nonempty(a, "init_chol", "A");
    require_rows_match(a, y, "init_chol", "Y");
    CholSolverState st;
    st.F = inverse_cholesky(gram_plus_lambda(a, lambda));
    // W = F*(F'*(A'*Y)), bracketed so the cost stays k^2*l + O(k^2*c).
    Matrix aty(a.cols(), y.cols());
    aty.noalias() = a.transpose() * y;
    Matrix fty(a.cols(), y.cols());
    fty.noalias() = st.F.dense().triangularView<Eigen::Upper>().transpose() * aty;
    st.W.resize(a.cols(), y.cols());
    st.W.noalias() = st.F.dense().triangularView<Eigen::Upper>() * fty;
    st.A = a;
    st.lambda = lambda;
    st.k = a.cols();
    return st;
}

CholSolverState update_chol_plain(const CholSolverState& state, const Matrix& h,
                                  const Matrix& y) {
    require_nonempty(h, "update_chol_plain", "H");
    require_rows_match(state.A, h, "update_chol_plain", "H");
    require_rows_match(state.A, y, "update_chol_plain", "Y");
    const auto f = state.F.dense().triangularView<Eigen::Upper>();

    Matrix p(state.k, h.cols());
    p.noalias() = state.A.transpose() * h;  // A'H, reused below
    Matrix m(state.k, h.cols());
    m.noalias() = f.transpose() * p;  // F'A'H, shared between G and T

    // Schur-complement inner matrix H'H + lambda*I - M'M.
    Matrix s(h.cols(), h.cols());
    s.noalias() = h.transpose() * h;
    s.noalias() -= m.transpose() * m;
    s = symmetrized(std::move(s));
    s.diagonal().array() += state.lambda;

    TriangularMatrix g;
    try {
        g = inverse_cholesky(s);
    } catch (const NonPositiveDefiniteError& e) {
        throw std::runtime_error(
            "update_chol_plain: inner matrix lost positive definiteness (pivot " +
            std::to_string(e.pivot()) +
            "); lambda too small for the plain update, use the stable variant");
    }
    const auto gv = g.dense().triangularView<Eigen::Upper>();

    Matrix t(state.k, h.cols());
    t.noalias() = m * gv;
    t = (f * t).eval();
    t *= -1.0;

    // W update through H'Y - (A'H)'W.
    Matrix e(h.cols(), y.cols());
    e.noalias() = h.transpose() * y;
    e.noalias() -= p.transpose() * state.W;
    Matrix gte(h.cols(), y.cols());
    gte.noalias() = gv.transpose() * e;

    CholSolverState out;
    out.F = extend_upper(state.F, t, g);
    out.A = hcat(state.A, h);
    Matrix top = state.W;
    top.noalias() += t * gte;
    Matrix bottom(h.cols(), y.cols());
    bottom.noalias() = gv * gte;
    out.W = vcat(top, bottom);
    out.lambda = state.lambda;
    out.k = state.k + h.cols();
    return out;
}

CholSolverState update_chol_stable(const CholSolverState& state, const Matrix& h,
                                   const Matrix& y) {
    require_nonempty(h, "update_chol_stable", "H");
    require_rows_match(state.A, h, "update_chol_stable", "H");
    require_rows_match(state.A, y, "update_chol_stable", "Y");
    const auto f = state.F.dense().triangularView<Eigen::Upper>();

    Matrix p(state.k, h.cols());
    p.noalias() = state.A.transpose() * h;
    Matrix d(state.k, h.cols());
    d.noalias() = f.transpose() * p;
    d = (f * d).eval();  // D = F*F'*A'H

    Matrix c = h;
    c.noalias() -= state.A * d;  // C = H - A*D

    TriangularMatrix g = inverse_cholesky(stable_inner(c, d, state.lambda));
    const auto gv = g.dense().triangularView<Eigen::Upper>();

    Matrix t(state.k, h.cols());
    t.noalias() = d * gv;
    t *= -1.0;

    Matrix e(h.cols(), y.cols());
    e.noalias() = c.transpose() * y;
    Matrix gte(h.cols(), y.cols());
    gte.noalias() = gv.transpose() * e;

    CholSolverState out;
    out.F = extend_upper(state.F, t, g);
    out.A = hcat(state.A, h);
    Matrix top = state.W;
    top.noalias() += t * gte;
    Matrix bottom(h.cols(), y.cols());
    bottom.noalias() = gv * gte;
    out.W = vcat(top, bottom);
    out.lambda = state.lambda;
    out.k = state.k + h.cols();
    return out;
}

// --------------------------------------------------------------------------
// Ridge-inverse route
// --------------------------------------------------------------------------

RidgeInvSolverState init_ridge_inverse(const Matrix& a, const Matrix& y, double lambda) {
    require_nonempty(a, "init_ridge_inverse", "A");
    require_rows_match(a, y, "init_ridge_inverse", "Y");
    RidgeInvSolverState st;
    st.Adag = spd_solve(gram_plus_lambda(a, lambda), a.transpose());
    st.W.resize(a.cols(), y.cols());
    st.W.noalias() = st.Adag * y;
    st.A = a;
    st.lambda = lambda;
    st.k = a.cols();
    return st;
}

RidgeInvSolverState update_ridge_inverse(const RidgeInvSolverState& state, const Matrix& h,
                                         const Matrix& y) {
    require_nonempty(h, "update_ridge_inverse", "H");
    require_rows_match(state.A, h, "update_ridge_inverse", "H");
    require_rows_match(state.A, y, "update_ridge_inverse", "Y");

    Matrix d(state.k, h.cols());
    d.noalias() = state.Adag * h;
    Matrix c = h;
    c.noalias() -= state.A * d;

    Matrix bt = spd_solve(stable_inner(c, d, state.lambda), c.transpose());  // q x l

    RidgeInvSolverState out;
    Matrix top = state.Adag;
    top.noalias() -= d * bt;
    out.Adag = vcat(top, bt);
    out.A = hcat(state.A, h);
    Matrix bty(h.cols(), y.cols());
    bty.noalias() = bt * y;
    Matrix wtop = state.W;
    wtop.noalias() -= d * bty;
    out.W = vcat(wtop, bty);
    out.lambda = state.lambda;
    out.k = state.k + h.cols();
    return out;
}

Matrix update_ridge_inverse_alt_b(const RidgeInvSolverState& state, const Matrix& h) {
    require_nonempty(h, "update_ridge_inverse_alt_b", "H");
    require_rows_match(state.A, h, "update_ridge_inverse_alt_b", "H");
    Matrix d(state.k, h.cols());
    d.noalias() = state.Adag * h;
    Matrix c = h;
    c.noalias() -= state.A * d;
    // H'C is symmetric positive definite in exact arithmetic; roundoff can
    // break that for small lambda, which surfaces here as a pivot failure.
    Matrix n(h.cols(), h.cols());
    n.noalias() = h.transpose() * c;
    n = symmetrized(std::move(n));
    n.diagonal().array() += state.lambda;
    return spd_solve(n, c.transpose());
}

// --------------------------------------------------------------------------
// Generalized-inverse baselines
// --------------------------------------------------------------------------

bool greville_c_is_zero(const Matrix& c, const Matrix& h) {
    const double cmax = c.size() == 0 ? 0.0 : c.cwiseAbs().maxCoeff();
    const double hmax = h.size() == 0 ? 0.0 : h.cwiseAbs().maxCoeff();
    return cmax <= 1e-10 * (1.0 + hmax);
}

GenInvSolverState init_geninv(const Matrix& a, const Matrix& y, double lambda_eps) {
    require_nonempty(a, "init_geninv", "A");
    require_rows_match(a, y, "init_geninv", "Y");
    GenInvSolverState st;
    st.variant = GenInvVariant::PseudoinverseExplicit;
    Matrix pinv = spd_solve(gram_plus_lambda(a, lambda_eps), a.transpose());
    st.W.resize(a.cols(), y.cols());
    st.W.noalias() = pinv * y;
    st.inv = std::move(pinv);
    st.A = a;
    st.lambda_eps = lambda_eps;
    st.k = a.cols();
    return st;
}

GenInvSolverState update_geninv(const GenInvSolverState& state, const Matrix& h,
                                const Matrix& y) {
    if (state.variant != GenInvVariant::PseudoinverseExplicit) {
        throw std::invalid_argument("update_geninv: state holds the factorized variant");
    }
    require_nonempty(h, "update_geninv", "H");
    require_rows_match(state.A, h, "update_geninv", "H");
    require_rows_match(state.A, y, "update_geninv", "Y");
    const Matrix& pinv = state.pinv();

    Matrix d(state.k, h.cols());
    d.noalias() = pinv * h;
    Matrix c = h;
    c.noalias() -= state.A * d;

    Matrix bt;
    if (greville_c_is_zero(c, h)) {
        // H lies in the span of A: B' = inv(I + D'D) * D' * Apinv.
        Matrix s(h.cols(), h.cols());
        s.noalias() = d.transpose() * d;
        s = symmetrized(std::move(s));
        s.diagonal().array() += 1.0;
        Matrix dt = spd_solve(s, d.transpose());  // q x k
        bt.resize(h.cols(), pinv.cols());
        bt.noalias() = dt * pinv;
    } else {
        Matrix s(h.cols(), h.cols());
        s.noalias() = c.transpose() * c;
        s = symmetrized(std::move(s));
        s.diagonal().array() += state.lambda_eps;
        bt = spd_solve(s, c.transpose());
    }

    GenInvSolverState out;
    out.variant = state.variant;
    Matrix top = pinv;
    top.noalias() -= d * bt;
    out.inv = vcat(top, bt);
    out.A = hcat(state.A, h);
    Matrix bty(h.cols(), y.cols());
    bty.noalias() = bt * y;
    Matrix wtop = state.W;
    wtop.noalias() -= d * bty;
    out.W = vcat(wtop, bty);
    out.lambda_eps = state.lambda_eps;
    out.k = state.k + h.cols();
    return out;
}

GenInvSolverState init_genchol(const Matrix& a, const Matrix& y, double lambda_eps) {
    require_nonempty(a, "init_genchol", "A");
    require_rows_match(a, y, "init_genchol", "Y");
    GenInvSolverState st;
    st.variant = GenInvVariant::Factorized;
    TriangularMatrix f = inverse_cholesky(gram_plus_lambda(a, lambda_eps));
    Matrix aty(a.cols(), y.cols());
    aty.noalias() = a.transpose() * y;
    Matrix fty(a.cols(), y.cols());
    fty.noalias() = f.dense().triangularView<Eigen::Upper>().transpose() * aty;
    st.W.resize(a.cols(), y.cols());
    st.W.noalias() = f.dense().triangularView<Eigen::Upper>() * fty;
    st.inv = std::move(f);
    st.A = a;
    st.lambda_eps = lambda_eps;
    st.k = a.cols();
    return st;
}

GenInvSolverState update_genchol(const GenInvSolverState& state, const Matrix& h,
                                 const Matrix& y) {
    if (state.variant != GenInvVariant::Factorized) {
        throw std::invalid_argument("update_genchol: state holds the explicit variant");
    }
    require_nonempty(h, "update_genchol", "H");
    require_rows_match(state.A, h, "update_genchol", "H");
    require_rows_match(state.A, y, "update_genchol", "Y");
    const auto f = state.factor().dense().triangularView<Eigen::Upper>();

    Matrix p(state.k, h.cols());
    p.noalias() = state.A.transpose() * h;
    Matrix d(state.k, h.cols());
    d.noalias() = f.transpose() * p;
    d = (f * d).eval();
    Matrix c = h;
    c.noalias() -= state.A * d;

    // Inner matrix without the lambda*D'D of the true ridge update.
    Matrix s(h.cols(), h.cols());
    s.noalias() = c.transpose() * c;
    s = symmetrized(std::move(s));
    s.diagonal().array() += state.lambda_eps;
    TriangularMatrix g = inverse_cholesky(s);
    const auto gv = g.dense().triangularView<Eigen::Upper>();

    Matrix t(state.k, h.cols());
    t.noalias() = d * gv;
    t *= -1.0;

    Matrix e(h.cols(), y.cols());
    e.noalias() = c.transpose() * y;
    Matrix gte(h.cols(), y.cols());
    gte.noalias() = gv.transpose() * e;

    GenInvSolverState out;
    out.variant = state.variant;
    out.inv = extend_upper(state.factor(), t, g);
    out.A = hcat(state.A, h);
    Matrix top = state.W;
    top.noalias() += t * gte;
    Matrix bottom(h.cols(), y.cols());
    bottom.noalias() = gv * gte;
    out.W = vcat(top, bottom);
    out.lambda_eps = state.lambda_eps;
    out.k = state.k + h.cols();
    return out;
}

Matrix standard_ridge(const Matrix& a, const Matrix& y, double lambda) {
    require_nonempty(a, "standard_ridge", "A");
    require_rows_match(a, y, "standard_ridge", "Y");
    Matrix aty(a.cols(), y.cols());
    aty.noalias() = a.transpose() * y;
    return spd_solve(gram_plus_lambda(a, lambda), aty);
}

// --------------------------------------------------------------------------
// Facade
// --------------------------------------------------------------------------

const char* to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::CholStable: return "chol";
        case SolverKind::CholPlain: return "chol-plain";
        case SolverKind::RidgeInverse: return "ridge-inv";
        case SolverKind::GenInv: return "gen-inv";
        case SolverKind::GenChol: return "gen-chol";
        case SolverKind::Standard: return "standard";
    }
    return "?";
}

SolverKind solver_kind_from_string(std::string_view name) {
    if (name == "chol") return SolverKind::CholStable;
    if (name == "chol-plain") return SolverKind::CholPlain;
    if (name == "ridge-inv") return SolverKind::RidgeInverse;
    if (name == "gen-inv") return SolverKind::GenInv;
    if (name == "gen-chol") return SolverKind::GenChol;
    if (name == "standard") return SolverKind::Standard;
    throw std::invalid_argument("unknown solver '" + std::string(name) +
                                "' (expected chol|chol-plain|ridge-inv|gen-chol|gen-inv|standard)");
}

namespace {

class CholFacade final : public OutputSolver {
public:
    explicit CholFacade(bool stable) : stable_(stable) {}
    void init(const Matrix& a, const Matrix& y, double lambda) override {
        state_ = init_chol(a, y, lambda);
    }
    void update(const Matrix& h, const Matrix& y) override {
        state_ = stable_ ? update_chol_stable(state_, h, y) : update_chol_plain(state_, h, y);
    }
    const Matrix& weights() const override { return state_.W; }
    const Matrix& expanded_input() const override { return state_.A; }
    Index node_count() const override { return state_.k; }
    SolverKind kind() const override {
        return stable_ ? SolverKind::CholStable : SolverKind::CholPlain;
    }
    std::unique_ptr<OutputSolver> clone() const override {
        return std::make_unique<CholFacade>(*this);
    }

private:
    bool stable_;
    CholSolverState state_;
};

class RidgeInvFacade final : public OutputSolver {
public:
    void init(const Matrix& a, const Matrix& y, double lambda) override {
        state_ = init_ridge_inverse(a, y, lambda);
    }
    void update(const Matrix& h, const Matrix& y) override {
        state_ = update_ridge_inverse(state_, h, y);
    }
    const Matrix& weights() const override { return state_.W; }
    const Matrix& expanded_input() const override { return state_.A; }
    Index node_count() const override { return state_.k; }
    SolverKind kind() const override { return SolverKind::RidgeInverse; }
    std::unique_ptr<OutputSolver> clone() const override {
        return std::make_unique<RidgeInvFacade>(*this);
    }

private:
    RidgeInvSolverState state_;
};

class GenInvFacade final : public OutputSolver {
public:
    explicit GenInvFacade(GenInvVariant variant) : variant_(variant) {}
    void init(const Matrix& a, const Matrix& y, double lambda) override {
        state_ = variant_ == GenInvVariant::Factorized ? init_genchol(a, y, lambda)
                                                       : init_geninv(a, y, lambda);
    }
    void update(const Matrix& h, const Matrix& y) override {
        state_ = variant_ == GenInvVariant::Factorized ? update_genchol(state_, h, y)
                                                       : update_geninv(state_, h, y);
    }
    const Matrix& weights() const override { return state_.W; }
    const Matrix& expanded_input() const override { return state_.A; }
    Index node_count() const override { return state_.k; }
    SolverKind kind() const override {
        return variant_ == GenInvVariant::Factorized ? SolverKind::GenChol : SolverKind::GenInv;
    }
    std::unique_ptr<OutputSolver> clone() const override {
        return std::make_unique<GenInvFacade>(*this);
    }

private:
    GenInvVariant variant_;
    GenInvSolverState state_;
};

class StandardFacade final : public OutputSolver {
public:
    void init(const Matrix& a, const Matrix& y, double lambda) override {
        lambda_ = lambda;
        a_ = a;
        w_ = standard_ridge(a_, y, lambda_);
    }
    void update(const Matrix& h, const Matrix& y) override {
        Matrix joined(a_.rows(), a_.cols() + h.cols());
        joined.leftCols(a_.cols()) = a_;
        joined.rightCols(h.cols()) = h;
        a_ = std::move(joined);
        w_ = standard_ridge(a_, y, lambda_);
    }
    const Matrix& weights() const override { return w_; }
    const Matrix& expanded_input() const override { return a_; }
    Index node_count() const override { return a_.cols(); }
    SolverKind kind() const override { return SolverKind::Standard; }
    std::unique_ptr<OutputSolver> clone() const override {
        return std::make_unique<StandardFacade>(*this);
    }

private:
    double lambda_ = 0.0;
    Matrix a_;
    Matrix w_;
};

}  // namespace

std::unique_ptr<OutputSolver> make_solver(SolverKind kind) {
    switch (kind) {
        case SolverKind::CholStable: return std::make_unique<CholFacade>(true);
        case SolverKind::CholPlain: return std::make_unique<CholFacade>(false);
        case SolverKind::RidgeInverse: return std::make_unique<RidgeInvFacade>();
        case SolverKind::GenInv:
            return std::make_unique<GenInvFacade>(GenInvVariant::PseudoinverseExplicit);
        case SolverKind::GenChol: return std::make_unique<GenInvFacade>(GenInvVariant::Factorized);
        case SolverKind::Standard: return std::make_unique<StandardFacade>();
    }
    throw std::invalid_argument("make_solver: unknown kind");
}

}  // namespace bls
