#include "bls/matrix.hpp"

#include <cmath>

namespace bls {

NonPositiveDefiniteError::NonPositiveDefiniteError(Index pivot, double value)
    : std::runtime_error("matrix is not positive definite: pivot " + std::to_string(pivot) +
                         " = " + std::to_string(value)),
      pivot_(pivot),
      value_(value) {}

std::string shape_of(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions disagree, A is " + shape_of(a) +
                                    ", B is " + shape_of(b));
    }
    Matrix c(a.rows(), b.cols());
    c.noalias() = a * b;
    return c;
}

Matrix gram_plus_lambda(const Matrix& a, double lambda) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("gram_plus_lambda: the ridge parameter must be a positive "
                                    "real number, got " + std::to_string(lambda));
    }
    const Index k = a.cols();
    Matrix m(k, k);
    m.noalias() = a.transpose() * a;
    Matrix r = 0.5 * (m + m.transpose());
    r.diagonal().array() += lambda;
    return r;
}

}  // namespace bls
