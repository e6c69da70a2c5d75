#pragma once

// Completely positive maps in Kraus form, their Hilbert-Schmidt duals, and
// superoperator (matrix) representations on the space of d x d operators.
//
// Vectorization convention used throughout: vec(Z) lists the entries of Z by
// row-major (i,j) enumeration of matrix units, so column (i*d + j) of a
// superoperator matrix is vec(F(E_ij)). Composition of maps is then plain
// matrix multiplication of their superoperator matrices.

#include <cstddef>
#include <functional>
#include <vector>

#include "vbs/matrix.hpp"

namespace vbs {

struct KrausChannel {
    std::size_t dim_in = 0;   // input operators are dim_in x dim_in
    std::size_t dim_out = 0;  // output operators are dim_out x dim_out
    std::vector<ComplexMatrix> kraus;  // each dim_out x dim_in

    KrausChannel() = default;
    // Validates that all operators share one shape; throws otherwise.
    explicit KrausChannel(std::vector<ComplexMatrix> ops);

    bool unital(double tol = 1e-10) const;            // sum K K^dagger = I
    bool trace_preserving(double tol = 1e-10) const;  // sum K^dagger K = I
};

struct SuperOperator {
    std::size_t dim = 0;   // acts on dim x dim operators
    ComplexMatrix matrix;  // dim^2 x dim^2 in the matrix-unit basis

    SuperOperator() = default;
    SuperOperator(std::size_t d, ComplexMatrix m) : dim(d), matrix(std::move(m)) {}
    static SuperOperator identity(std::size_t d);
};

// Row-major flattening of a square matrix into a d^2 x 1 column, and back.
ComplexMatrix vec(const ComplexMatrix& z);
ComplexMatrix unvec(const ComplexMatrix& v, std::size_t d);

// Schroedinger-picture action sum_k K z K^dagger.
ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& z);

// Hilbert-Schmidt dual action sum_k K^dagger rho K; satisfies
// Tr(dual_apply(ch,rho) X) = Tr(rho apply(ch,X)).
ComplexMatrix dual_apply(const KrausChannel& ch, const ComplexMatrix& rho);

// Matrix representation of an arbitrary linear operator map. The map is
// sampled on matrix units; linearity is then spot-checked on two random
// linear combinations (deviation > 1e-8 throws), which catches callables
// that are not actually linear.
SuperOperator to_superoperator(const std::function<ComplexMatrix(const ComplexMatrix&)>& f,
                               std::size_t dim);
SuperOperator to_superoperator(const KrausChannel& ch);  // requires dim_in == dim_out

// Trace of the map as an operator on Hilbert-Schmidt space:
// sum_{i,j} <E_ij, F(E_ij)>_HS = trace of the superoperator matrix.
// Basis-independent (tested by recomputation in rotated operator bases).
cplx superop_trace(const SuperOperator& s);

// Apply a superoperator matrix to an operator: unvec(S vec(z)).
ComplexMatrix superop_apply(const SuperOperator& s, const ComplexMatrix& z);

// Composition f after g, i.e. (f o g)(z) = f(g(z)); matrix product F*G.
SuperOperator compose(const SuperOperator& f, const SuperOperator& g);
SuperOperator superop_power(const SuperOperator& s, unsigned n);

// Choi matrix of a superoperator: C[(i,a),(j,b)] = S[(i,j),(a,b)].
// PSD exactly when the map is completely positive.
ComplexMatrix choi_matrix(const SuperOperator& s);

struct PowerLimitResult {
    SuperOperator limit;
    double rate = 0.0;   // fitted geometric decay rate of |Phi^n - limit|
    unsigned steps = 0;  // iterations until successive powers differ < tol
};

// Iterates superoperator powers of a unital channel until successive powers
// agree within tol (max-entry norm). The decay rate is a least-squares fit
// of log |Phi^n - limit| over the last up-to-10 pre-convergence iterates.
// Throws if ch is not unital, or if 10000 steps pass without convergence
// (non-primitive channel, e.g. a unitary conjugation).
PowerLimitResult power_limit(const KrausChannel& ch, double tol);

}  // namespace vbs
