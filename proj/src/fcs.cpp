#include "vbs/fcs.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vbs {

ComplexMatrix FcsTriple::transition(const ComplexMatrix& x, const ComplexMatrix& y) const {
    std::size_t no = kraus.size();
    if (y.rows != no || y.cols != no)
        throw std::invalid_argument("FcsTriple::transition: observable dimension mismatch");
    if (x.rows != aux_dim || x.cols != aux_dim)
        throw std::invalid_argument("FcsTriple::transition: bond operand dimension mismatch");
    ComplexMatrix out(aux_dim, aux_dim);
    for (std::size_t k = 0; k < no; ++k)
        for (std::size_t kp = 0; kp < no; ++kp) {
            cplx w = y(kp, k);
            if (w == cplx(0.0)) continue;
            out += w * (kraus[k].adjoint() * x * kraus[kp]);
        }
    return out;
}

cplx FcsTriple::reference(const ComplexMatrix& x) const {
    cplx t = x.trace();
    return reference_functional == ReferenceFunctional::NormalizedTrace
               ? t / cplx(static_cast<double>(aux_dim))
               : t;
}

const FcsTriple& aklt_fcs_triple() {
    static const FcsTriple triple = [] {
        const AkltTensors& t = AkltTensors::standard();
        FcsTriple f;
        f.aux_dim = 2;
        f.kraus = {t.a_plus, t.a_zero, t.a_minus};
        f.reference_functional = ReferenceFunctional::NormalizedTrace;
        f.unit_element = ComplexMatrix::identity(2);
        return f;
    }();
    return triple;
}

namespace {

// Inside-out evaluation of the closed-form sum for factored observables:
// T <- sum_{k,l} <k|b|l> A_k T A_l^dagger from the last site to the first,
// which reproduces the literal product ordering of the closed form without
// enumerating multi-indices.
ComplexMatrix contract_factored(const std::vector<ComplexMatrix>& factors) {
    const AkltTensors& t = AkltTensors::standard();
    ComplexMatrix acc = ComplexMatrix::identity(2);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        const ComplexMatrix& b = *it;
        ComplexMatrix next(2, 2);
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t l = 0; l < 3; ++l) {
                cplx w = b(k, l);
                if (w == cplx(0.0)) continue;
                next += w * (t.op(k) * acc * t.op(l).adjoint());
            }
        acc = next;
    }
    return acc;
}

// Shared iteration core of the FCS presentation, without the public size
// bound (the correlator needs longer factor lists than the public entry
// point admits).
cplx fcs_core(const FcsTriple& triple, const std::vector<ComplexMatrix>& factors) {
    if (factors.empty()) throw std::invalid_argument("omega_fcs_form: empty factor list");
    ComplexMatrix x = triple.unit_element;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) x = triple.transition(x, *it);
    return triple.reference(x);
}

}  // namespace

cplx omega_local(const ObservableSpec& y) {
    y.validate();
    if (y.n_sites > 8) throw std::invalid_argument("omega_local: n_sites must be <= 8");
    if (y.factored) return 0.5 * contract_factored(y.factors).trace();
    std::vector<ComplexMatrix> prods = site_products(y.n_sites);
    std::size_t d = prods.size();
    cplx total = 0.0;
    for (std::size_t ki = 0; ki < d; ++ki)
        for (std::size_t li = 0; li < d; ++li) {
            cplx w = y.full(ki, li);
            if (w == cplx(0.0)) continue;
            // Tr(P_k P_l^dagger) = sum_ij P_k(i,j) conj(P_l(i,j))
            cplx tr = 0.0;
            for (std::size_t e = 0; e < 4; ++e)
                tr += prods[ki].entries[e] * std::conj(prods[li].entries[e]);
            total += w * tr;
        }
    return 0.5 * total;
}

cplx omega_local_via_hat(const ObservableSpec& y) {
    SuperOperator s = hat_map(y);
    return 0.5 * superop_apply(s, ComplexMatrix::identity(2)).trace();
}

cplx omega_fcs_form(const std::vector<ComplexMatrix>& factors) {
    return omega_fcs_form(aklt_fcs_triple(), factors);
}

cplx omega_fcs_form(const FcsTriple& triple, const std::vector<ComplexMatrix>& factors) {
    if (factors.size() > 12)
        throw std::invalid_argument("omega_fcs_form: at most 12 factors supported");
    return fcs_core(triple, factors);
}

cplx embedded_expectation(const ObservableSpec& y, unsigned m, unsigned p) {
    y.validate();
    if (y.n_sites > 6)
        throw std::invalid_argument("embedded_expectation: n_sites must be <= 6");
    if (m > 200 || p > 200)
        throw std::invalid_argument("embedded_expectation: padding must be <= 200");
    SuperOperator phi = to_superoperator(transfer_channel());
    SuperOperator mid = hat_map(y);
    SuperOperator total = compose(superop_power(phi, p), compose(mid, superop_power(phi, m)));
    return superop_trace(total);
}

double correlator(SpinAxis axis, unsigned r) {
    if (r < 1 || r > 20) throw std::invalid_argument("correlator: r must be between 1 and 20");
    Spin1Operators s1 = spin1_operators();
    const ComplexMatrix& s = axis == SpinAxis::x ? s1.sx : axis == SpinAxis::y ? s1.sy : s1.sz;
    std::vector<ComplexMatrix> factors;
    factors.push_back(s);
    for (unsigned i = 1; i < r; ++i) factors.push_back(ComplexMatrix::identity(3));
    factors.push_back(s);
    cplx v = fcs_core(aklt_fcs_triple(), factors);
    if (std::abs(v.imag()) > 1e-10) {
        std::ostringstream os;
        os << "correlator: imaginary residue " << v.imag() << " exceeds 1e-10";
        throw std::runtime_error(os.str());
    }
    return v.real();
}

}  // namespace vbs
