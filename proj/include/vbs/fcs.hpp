#pragma once

// The translation-invariant infinite-chain state generated by the AKLT
// tensors, evaluated three independent ways:
//   omega_local          - closed-form Kraus sum over the observable's sites
//   omega_fcs_form       - iterated transition-expectation maps against the
//                          reference functional (the finitely-correlated-state
//                          presentation)
//   embedded_expectation - a finite chain padded by m and p identity sites,
//                          which converges to omega_local geometrically
// plus two-point correlation functions along a spin axis.

#include <cstddef>
#include <vector>

#include "vbs/aklt.hpp"
#include "vbs/channel.hpp"
#include "vbs/matrix.hpp"

namespace vbs {

enum class ReferenceFunctional { Trace, NormalizedTrace };

// The generating triple of the state: bond algebra dimension, the Kraus data
// of the transition expectation, the reference functional, and the unit.
struct FcsTriple {
    std::size_t aux_dim = 2;
    std::vector<ComplexMatrix> kraus;  // {A_k}, indexed by the physical basis
    ReferenceFunctional reference_functional = ReferenceFunctional::NormalizedTrace;
    ComplexMatrix unit_element;  // identity on the bond space

    // E_Y(X) = sum_{k,k'} <k'|Y|k> A_k^dagger X A_k'; E_identity is the dual
    // of the transfer channel.
    ComplexMatrix transition(const ComplexMatrix& x, const ComplexMatrix& y) const;
    cplx reference(const ComplexMatrix& x) const;
};

// The AKLT instance. Only the normalized trace makes the state unital
// (reference(unit) = 1), so that is the preset.
const FcsTriple& aklt_fcs_triple();

// Closed-form infinite-volume expectation
//   omega(Y) = 1/2 sum_{k,l} <k|Y|l> Tr(A_{k_1}..A_{k_n} A_{l_n}^dag..A_{l_1}^dag),
// the Kraus arrangement with daggered products on the right. n_sites <= 8.
cplx omega_local(const ObservableSpec& y);

// Same quantity evaluated through hat_map (daggered products on the left):
// 1/2 Tr(hat(Y)(identity)). The two arrangements agree for the AKLT family;
// the test suite certifies this, including on non-Hermitian observables.
cplx omega_local_via_hat(const ObservableSpec& y);

// FCS presentation on factored observables; 1 <= factors.size() <= 12.
cplx omega_fcs_form(const std::vector<ComplexMatrix>& factors);
cplx omega_fcs_form(const FcsTriple& triple, const std::vector<ComplexMatrix>& factors);

// Finite-volume value with m identity sites before and p after the support
// of y: the Hilbert-Schmidt trace of Phi^p o hat(y) o Phi^m. Converges to
// omega_local(y) as C*(1/3)^(m+p). Requires n_sites <= 6 and m, p <= 200.
cplx embedded_expectation(const ObservableSpec& y, unsigned m, unsigned p);

enum class SpinAxis { x, y, z };

// Two-point function omega(S^a (x) identity^(r-1) (x) S^a) at distance r,
// 1 <= r <= 20. Real up to 1e-10 imaginary residue (checked).
double correlator(SpinAxis axis, unsigned r);

}  // namespace vbs
