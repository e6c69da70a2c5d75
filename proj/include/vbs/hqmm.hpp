#pragma once

// Hidden quantum Markov model engine. A model is an initial functional on
// the hidden algebra, a hidden transition expectation, an emission
// expectation coupling hidden and output algebras, and a one-step composition
// order. The causal order threads the hidden transition inside the emission;
// the conventional order does the opposite, and the two generate genuinely
// different processes (a concrete witness is part of the test fixtures).

#include <cstddef>
#include <utility>
#include <vector>

#include "vbs/aklt.hpp"
#include "vbs/matrix.hpp"

namespace vbs {

// A completely positive unital map B(C^da) (x) B(C^db) -> B(C^dout),
// in one of three concrete forms:
//   KrausFamily        E(X (x) Y) = sum_{k,l} <k|Y|l> K_k X K_l^dagger,
//                      one operator per output-basis index (CP by form)
//   RankOneTrace       E(X (x) Z) = scale * Tr(X) * Z
//   IsometryConjugation E(W) = V^dagger W V on the joint algebra, evaluated
//                      on product slots as V^dagger (x (x) y) V
struct TransitionExpectation {
    enum class Kind { KrausFamily, RankOneTrace, IsometryConjugation };

    Kind kind = Kind::RankOneTrace;
    std::size_t d_a = 0, d_b = 0, d_out = 0;
    std::vector<ComplexMatrix> family;  // KrausFamily: d_b operators, d_out x d_a
    double scale = 0.0;                 // RankOneTrace
    ComplexMatrix v;                    // IsometryConjugation: (d_a*d_b) x d_out

    static TransitionExpectation kraus_family(std::vector<ComplexMatrix> ops);
    static TransitionExpectation rank_one_trace(std::size_t d, double scale);
    static TransitionExpectation isometry(std::size_t d_a, std::size_t d_b, ComplexMatrix v);

    // Bilinear evaluation on a product slot pair (x in B(C^da), y in B(C^db)).
    ComplexMatrix evaluate(const ComplexMatrix& x, const ComplexMatrix& y) const;
    bool unital(double tol = 1e-10) const;  // evaluate(I,I) == I
};

struct HqmmModel {
    enum class Functional { Trace, NormalizedTrace, Density };
    enum class Ordering { Conventional, Causal };

    Functional initial_state = Functional::NormalizedTrace;
    ComplexMatrix density;  // used only when initial_state == Density
    TransitionExpectation hidden;    // B_H (x) B_H -> B_H
    TransitionExpectation emission;  // B_H (x) B_O -> B_H
    Ordering ordering = Ordering::Causal;

    std::size_t dim_hidden() const { return emission.d_a; }
    std::size_t dim_output() const { return emission.d_b; }
    cplx initial_apply(const ComplexMatrix& x) const;
    void validate() const;  // dimension consistency, positivity of the initial functional
};

// The model whose observation process is the infinite AKLT state: hidden
// dimension 2, output dimension 3, rank-one hidden transition (half-trace),
// emission built from the AKLT tensors, causal ordering, normalized trace.
HqmmModel aklt_hqmm_model();

// Hidden transition of the AKLT model: (1/2) Tr(x) z.
ComplexMatrix e_hidden(const ComplexMatrix& x, const ComplexMatrix& z);

// Emission of the AKLT model: sum_{k,l} <k|y|l> A_k x A_l^dagger.
ComplexMatrix e_emission(const ComplexMatrix& x, const ComplexMatrix& y);

// One time step, emission first then hidden transition:
// (1/2) Tr(e_emission(a,b)) x.
ComplexMatrix block_map_conventional(const ComplexMatrix& a, const ComplexMatrix& b,
                                     const ComplexMatrix& x);

// One time step, hidden transition first then emission:
// e_emission((1/2) Tr(a) x, b).
ComplexMatrix block_map_causal(const ComplexMatrix& a, const ComplexMatrix& b,
                               const ComplexMatrix& x);

// Joint hidden/output expectation of (x)_m (a_m (x) b_m) under the causal
// composition: backward recursion T <- emission(hidden(a_m, T), b_m) from the
// last pair to the first, seeded with the hidden identity, then the initial
// functional. Throws for conventionally ordered models (compose
// block_map_conventional directly for those). n <= 12 pairs.
cplx joint_state(const HqmmModel& model,
                 const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& pairs);

// Independent evaluation path for models with a rank-one hidden transition:
// the fully expanded Kraus sum
//   scale^n prod_m Tr(a_m) * initial( sum_{k,l} prod_m <k_m|b_m|l_m>
//                                     K_{k_1}..K_{k_n} K_{l_n}^dag..K_{l_1}^dag ).
// Exponential in n; intended for cross-validation at n <= 4.
cplx joint_state_closed_form(const HqmmModel& model,
                             const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& pairs);

// Restriction of the joint state to the outputs: all hidden slots set to the
// identity. y must be factored; n_sites <= 8. For the AKLT model this equals
// omega_local(y) — the headline property of the artifact.
cplx observation_process(const HqmmModel& model, const ObservableSpec& y);

// The bond-pair isometry: V|up> = (|ud> - |du>)/sqrt2, V|down> = (|ud> + |du>)/sqrt2.
ComplexMatrix isometry_v();

// The two one-step compositions with the hidden transition realized as
// conjugation by isometry_v():
//   Conventional: sum <k|b|l> V^dag (A_k a A_l^dag (x) x) V
//   Causal:       sum <k|b|l> A_k V^dag (x (x) a) V A_l^dag
ComplexMatrix block_map_isometry(HqmmModel::Ordering ordering, const ComplexMatrix& a,
                                 const ComplexMatrix& b, const ComplexMatrix& x);

}  // namespace vbs
