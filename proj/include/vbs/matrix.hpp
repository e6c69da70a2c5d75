#pragma once

// Small dense complex-matrix core. Everything in this project lives in
// dimensions <= 3^8, so a single row-major dense type is all we need;
// clarity and exactness win over performance.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace vbs {

using cplx = std::complex<double>;

class ComplexMatrix {
public:
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> entries;  // row-major, entries[i*cols + j]

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}

    static ComplexMatrix zero(std::size_t r, std::size_t c) { return ComplexMatrix(r, c); }
    static ComplexMatrix identity(std::size_t d);
    // Row-by-row construction, e.g. ComplexMatrix::from_rows({{1,0},{0,-1}}).
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> data);
    // d x 1 column vector from a flat list.
    static ComplexMatrix column(const std::vector<cplx>& v);

    cplx& operator()(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

    bool is_square() const { return rows == cols; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    cplx trace() const;           // throws unless square
    double max_abs() const;       // max entrywise modulus
    double frobenius_norm() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);  // matrix product
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cplx s);

// Kronecker product: entry ((i1*b.rows+i2),(j1*b.cols+j2)) = a(i1,j1)*b(i2,j2).
// The left factor is the slowest-varying index block.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Hilbert-Schmidt inner product Tr(x^dagger y); conjugate-linear in x.
cplx hs_inner(const ComplexMatrix& x, const ComplexMatrix& y);

// Entrywise max |a - b|; dimensions must match.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigHermitianResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // orthonormal eigenvectors as columns, same order
};

// Eigendecomposition of a Hermitian matrix. The input must be Hermitian to
// within hermitian_tol (max entrywise |m - m^dagger|); otherwise throws with
// the measured deviation in the message.
EigHermitianResult eig_hermitian(const ComplexMatrix& m, double hermitian_tol = 1e-10);

// General (non-Hermitian) spectrum, unordered beyond a fixed deterministic
// sort (by real part, then imaginary). Used for channel spectra.
std::vector<cplx> eig_values(const ComplexMatrix& m);

}  // namespace vbs
