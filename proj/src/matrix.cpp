#include "vbs/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace vbs {

ComplexMatrix ComplexMatrix::identity(std::size_t d) {
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> data) {
    std::size_t r = data.size();
    std::size_t c = r ? data.begin()->size() : 0;
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : data) {
        if (row.size() != c) throw std::invalid_argument("from_rows: ragged row lengths");
        std::size_t j = 0;
        for (const auto& v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

ComplexMatrix ComplexMatrix::column(const std::vector<cplx>& v) {
    ComplexMatrix m(v.size(), 1);
    m.entries = v;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(rows, cols);
    for (std::size_t k = 0; k < entries.size(); ++k) m.entries[k] = std::conj(entries[k]);
    return m;
}

cplx ComplexMatrix::trace() const {
    if (!is_square()) throw std::invalid_argument("trace: matrix is not square");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : entries) m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : entries) s += std::norm(v);
    return std::sqrt(s);
}

static void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* who) {
    if (a.rows != b.rows || a.cols != b.cols) {
        std::ostringstream os;
        os << who << ": shape mismatch " << a.rows << "x" << a.cols << " vs " << b.rows << "x"
           << b.cols;
        throw std::invalid_argument(os.str());
    }
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    check_same_shape(*this, o, "operator+=");
    for (std::size_t k = 0; k < entries.size(); ++k) entries[k] += o.entries[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    check_same_shape(*this, o, "operator-=");
    for (std::size_t k = 0; k < entries.size(); ++k) entries[k] -= o.entries[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : entries) v *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) {
        std::ostringstream os;
        os << "operator*: inner dimensions differ, " << a.rows << "x" << a.cols << " times "
           << b.rows << "x" << b.cols;
        throw std::invalid_argument(os.str());
    }
    ComplexMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            const cplx* brow = &b.entries[k * b.cols];
            cplx* crow = &c.entries[i * c.cols];
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i1 = 0; i1 < a.rows; ++i1)
        for (std::size_t j1 = 0; j1 < a.cols; ++j1) {
            cplx av = a(i1, j1);
            if (av == cplx(0.0)) continue;
            for (std::size_t i2 = 0; i2 < b.rows; ++i2)
                for (std::size_t j2 = 0; j2 < b.cols; ++j2)
                    c(i1 * b.rows + i2, j1 * b.cols + j2) = av * b(i2, j2);
        }
    return c;
}

cplx hs_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (!x.is_square() || !y.is_square() || x.rows != y.rows)
        throw std::invalid_argument("hs_inner: operands must be square with equal dimensions");
    // Tr(x^dagger y) = sum_ij conj(x_ij) y_ij
    cplx t = 0.0;
    for (std::size_t k = 0; k < x.entries.size(); ++k) t += std::conj(x.entries[k]) * y.entries[k];
    return t;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t k = 0; k < a.entries.size(); ++k)
        m = std::max(m, std::abs(a.entries[k] - b.entries[k]));
    return m;
}

static Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    Eigen::MatrixXcd e(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
    return e;
}

EigHermitianResult eig_hermitian(const ComplexMatrix& m, double hermitian_tol) {
    if (!m.is_square()) throw std::invalid_argument("eig_hermitian: matrix is not square");
    double dev = max_abs_diff(m, m.adjoint());
    if (dev > hermitian_tol) {
        std::ostringstream os;
        os << "eig_hermitian: input is not Hermitian, max |m - m^dagger| = " << dev
           << " exceeds tolerance " << hermitian_tol;
        throw std::invalid_argument(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
    EigHermitianResult r;
    std::size_t d = m.rows;
    r.values.resize(d);
    r.vectors = ComplexMatrix(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        r.values[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
        for (std::size_t j = 0; j < d; ++j)
            r.vectors(i, j) = solver.eigenvectors()(static_cast<Eigen::Index>(i),
                                                    static_cast<Eigen::Index>(j));
    }
    return r;
}

std::vector<cplx> eig_values(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("eig_values: matrix is not square");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eig_values: eigensolver failed to converge");
    std::vector<cplx> vals(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        vals[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    std::sort(vals.begin(), vals.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return vals;
}

}  // namespace vbs
