#include "core/matrix.hpp"

#include <cmath>
#include <cstdlib>

#include "errors.hpp"

namespace stablecone {

SquareMatrix::SquareMatrix(std::size_t n) : n_(n) {
    if (n == 0 || n > kMaxMatrixDim)
        throw ContractViolation("matrix dimension must be in [1, 8]");
    data_.fill(0.0);
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::operator+(const SquareMatrix& o) const {
    SquareMatrix r(n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& o) const {
    SquareMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const double a = at(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j)
                r.at(i, j) += a * o.at(k, j);
        }
    return r;
}

SquareMatrix SquareMatrix::scaled(double s) const {
    SquareMatrix r(n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) r.data_[i] = data_[i] * s;
    return r;
}

SquareMatrix SquareMatrix::transpose() const {
    SquareMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
    return r;
}

double SquareMatrix::inf_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n_; ++j) row += std::fabs(at(i, j));
        if (row > best) best = row;
    }
    return best;
}

void SquareMatrix::apply(const double* x, double* out) const {
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j) acc += at(i, j) * x[j];
        out[i] = acc;
    }
}

SquareMatrix expm(const SquareMatrix& m) {
    const std::size_t n = m.dim();
    const double norm = m.inf_norm();
    int s = 0;
    if (norm > 0.5) {
        s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
        if (s < 0) s = 0;
    }
    SquareMatrix b = m.scaled(std::ldexp(1.0, -s));

    SquareMatrix sum = SquareMatrix::identity(n);
    SquareMatrix term = SquareMatrix::identity(n);
    for (int k = 1; k <= 40; ++k) {
        term = (term * b).scaled(1.0 / k);
        sum = sum + term;
        if (term.inf_norm() <= 1e-17 * sum.inf_norm()) break;
    }
    for (int k = 0; k < s; ++k) sum = sum * sum;
    return sum;
}

double det(const SquareMatrix& m) {
    const std::size_t n = m.dim();
    double a[kMaxMatrixDim][kMaxMatrixDim];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m.at(i, j);

    double d = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::fabs(a[i][col]) > std::fabs(a[piv][col])) piv = i;
        if (a[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[piv][j], a[col][j]);
            d = -d;
        }
        d *= a[col][col];
        for (std::size_t i = col + 1; i < n; ++i) {
            const double f = a[i][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
        }
    }
    return d;
}

namespace {

bool cholesky(const SquareMatrix& s) {
    const std::size_t n = s.dim();
    double l[kMaxMatrixDim][kMaxMatrixDim] = {};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = s.at(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l[i][k] * l[j][k];
            if (i == j) {
                if (acc <= 0.0) return false;
                l[i][i] = std::sqrt(acc);
            } else {
                l[i][j] = acc / l[j][j];
            }
        }
    }
    return true;
}

SquareMatrix sym_part(const SquareMatrix& m) {
    return (m + m.transpose()).scaled(0.5);
}

} // namespace

bool sym_part_positive_definite(const SquareMatrix& m) {
    return cholesky(sym_part(m));
}

double sym_part_min_eigenvalue(const SquareMatrix& m) {
    SquareMatrix a = sym_part(m);
    const std::size_t n = a.dim();
    if (n == 1) return a.at(0, 0);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a.at(p, q) * a.at(p, q);
        if (off < 1e-28) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
            }
    }
    double least = a.at(0, 0);
    for (std::size_t i = 1; i < n; ++i)
        if (a.at(i, i) < least) least = a.at(i, i);
    return least;
}

} // namespace stablecone
