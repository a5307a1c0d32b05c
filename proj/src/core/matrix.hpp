#pragma once

#include <array>
#include <cstddef>

namespace stablecone {

// Small dense square matrix, stack storage, row major. Dimensions up to
// kMaxMatrixDim which is all the operator cones need.
inline constexpr std::size_t kMaxMatrixDim = 8;

class SquareMatrix {
public:
    SquareMatrix() : n_(0) { data_.fill(0.0); }
    explicit SquareMatrix(std::size_t n);
    static SquareMatrix identity(std::size_t n);

    std::size_t dim() const { return n_; }
    double& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    SquareMatrix operator+(const SquareMatrix& o) const;
    SquareMatrix operator*(const SquareMatrix& o) const;
    SquareMatrix scaled(double s) const;
    SquareMatrix transpose() const;

    // max absolute row sum
    double inf_norm() const;

    void apply(const double* x, double* out) const;

private:
    std::size_t n_;
    std::array<double, kMaxMatrixDim * kMaxMatrixDim> data_;
};

// exp(M) by scaling and squaring with a truncated power series; relative
// accuracy well below 1e-12 for the desk-scale matrices used here.
SquareMatrix expm(const SquareMatrix& m);

// determinant by partial-pivot LU
double det(const SquareMatrix& m);

// true when (M + M^T)/2 is positive definite (Cholesky succeeds)
bool sym_part_positive_definite(const SquareMatrix& m);

// smallest eigenvalue of (M + M^T)/2, cyclic Jacobi
double sym_part_min_eigenvalue(const SquareMatrix& m);

} // namespace stablecone
