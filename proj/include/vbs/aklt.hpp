#pragma once

// AKLT-specific constructions: the three 2x2 site tensors, the finite
// periodic matrix product state they generate, the lifting of spin-chain
// observables to maps on the 2x2 bond space, spin-1 operators, the AKLT
// Hamiltonian, and a brute-force state-vector oracle used to cross-validate
// every transfer-operator computation.
//
// Basis conventions, fixed globally:
//   bond space    (|up>, |down>)      -> indices (0, 1)
//   physical site (|+>, |0>, |->)     -> indices (0, 1, 2)
//   multi-site states: site 1 is the leftmost (slowest-varying) factor.

#include <cstddef>
#include <vector>

#include "vbs/channel.hpp"
#include "vbs/matrix.hpp"

namespace vbs {

struct AkltTensors {
    ComplexMatrix a_plus;   // sqrt(2/3) |up><down|
    ComplexMatrix a_zero;   // sqrt(1/3) diag(1,-1)
    ComplexMatrix a_minus;  // -sqrt(2/3) |down><up|

    static const AkltTensors& standard();
    // k in {0,1,2} selects a_plus, a_zero, a_minus.
    const ComplexMatrix& op(std::size_t k) const;
};

// The bond-space channel Z -> sum_k A_k Z A_k^dagger (unital and
// trace-preserving; its spectrum controls all correlation decay).
KrausChannel transfer_channel();

// An observable on n spin-1 sites, either as a dense 3^n x 3^n matrix or as
// an ordered list of n one-site 3x3 factors (sites 1..n, left to right).
struct ObservableSpec {
    std::size_t n_sites = 0;
    bool factored = false;
    ComplexMatrix full;                  // when !factored
    std::vector<ComplexMatrix> factors;  // when factored, n_sites entries

    static ObservableSpec full_form(std::size_t n, ComplexMatrix m);
    static ObservableSpec factored_form(std::vector<ComplexMatrix> fs);
    static ObservableSpec identity(std::size_t n);  // factored identity

    // Throws std::invalid_argument on any dimension inconsistency.
    void validate() const;
    // Dense 3^n x 3^n matrix (kron of factors in site order when factored).
    ComplexMatrix expand_full() const;
};

struct MpsState {
    std::size_t n_sites = 0;
    std::vector<cplx> amplitudes;  // length 3^n, amplitude[k] = Tr(A_k1 ... A_kn)

    double squared_norm() const;
};

// Unnormalized periodic chain state; 1 <= n <= 10.
MpsState build_mps_state(std::size_t n);

// All ordered products A_{k_1} ... A_{k_n} indexed like the amplitudes.
std::vector<ComplexMatrix> site_products(std::size_t n);

// Lift an n-site observable to a map on 2x2 bond operators,
//   M -> sum_{k,l} <k|Y|l> A_{k_n}^dagger ... A_{k_1}^dagger M A_{l_1} ... A_{l_n},
// returned in superoperator form. For the identity observable this is the
// n-th power of the transfer channel. Blocks compose with the later block
// applied on the outside: lifting Y (x) Z gives lift(Z) o lift(Y).
// Requires n_sites <= 8.
SuperOperator hat_map(const ObservableSpec& y);

// <psi|Y|psi> on the n-site chain, evaluated as the Hilbert-Schmidt trace of
// hat_map(y); agrees with exact_oracle to machine precision.
cplx finite_expectation(const ObservableSpec& y);

// Independent verification path: builds the 3^n state vector and computes
// the raw quadratic form directly, with no transfer-operator machinery.
cplx exact_oracle(const ObservableSpec& y);

struct Spin1Operators {
    ComplexMatrix sx, sy, sz;  // spin-1 matrices in the (|+>,|0>,|->) basis
};
Spin1Operators spin1_operators();

// H = sum over bonds of S_i.S_j + (1/3)(S_i.S_j)^2, with bonds (i,i+1) and,
// when periodic, (n,1). Dense 3^n x 3^n Hermitian matrix; 2 <= n <= 8.
ComplexMatrix aklt_hamiltonian(std::size_t n, bool periodic);

}  // namespace vbs
