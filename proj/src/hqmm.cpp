#include "vbs/hqmm.hpp"

#include <cmath>
#include <stdexcept>

namespace vbs {

TransitionExpectation TransitionExpectation::kraus_family(std::vector<ComplexMatrix> ops) {
    if (ops.empty())
        throw std::invalid_argument("TransitionExpectation: empty Kraus family");
    TransitionExpectation e;
    e.kind = Kind::KrausFamily;
    e.d_out = ops.front().rows;
    e.d_a = ops.front().cols;
    e.d_b = ops.size();
    for (const auto& k : ops)
        if (k.rows != e.d_out || k.cols != e.d_a)
            throw std::invalid_argument("TransitionExpectation: mixed Kraus shapes");
    e.family = std::move(ops);
    return e;
}

TransitionExpectation TransitionExpectation::rank_one_trace(std::size_t d, double scale) {
    TransitionExpectation e;
    e.kind = Kind::RankOneTrace;
    e.d_a = e.d_b = e.d_out = d;
    e.scale = scale;
    return e;
}

TransitionExpectation TransitionExpectation::isometry(std::size_t d_a, std::size_t d_b,
                                                      ComplexMatrix v) {
    if (v.rows != d_a * d_b || v.cols == 0)
        throw std::invalid_argument("TransitionExpectation: isometry shape mismatch");
    TransitionExpectation e;
    e.kind = Kind::IsometryConjugation;
    e.d_a = d_a;
    e.d_b = d_b;
    e.d_out = v.cols;
    e.v = std::move(v);
    return e;
}

ComplexMatrix TransitionExpectation::evaluate(const ComplexMatrix& x,
                                              const ComplexMatrix& y) const {
    if (x.rows != d_a || x.cols != d_a || y.rows != d_b || y.cols != d_b)
        throw std::invalid_argument("TransitionExpectation::evaluate: slot dimension mismatch");
    switch (kind) {
        case Kind::RankOneTrace:
            return (scale * x.trace()) * y;
        case Kind::IsometryConjugation:
            return v.adjoint() * kron(x, y) * v;
        case Kind::KrausFamily: {
            ComplexMatrix out(d_out, d_out);
            for (std::size_t k = 0; k < d_b; ++k)
                for (std::size_t l = 0; l < d_b; ++l) {
                    cplx w = y(k, l);
                    if (w == cplx(0.0)) continue;
                    out += w * (family[k] * x * family[l].adjoint());
                }
            return out;
        }
    }
    throw std::logic_error("TransitionExpectation::evaluate: unreachable");
}

bool TransitionExpectation::unital(double tol) const {
    ComplexMatrix img =
        evaluate(ComplexMatrix::identity(d_a), ComplexMatrix::identity(d_b));
    return max_abs_diff(img, ComplexMatrix::identity(d_out)) <= tol;
}

cplx HqmmModel::initial_apply(const ComplexMatrix& x) const {
    switch (initial_state) {
        case Functional::Trace:
            return x.trace();
        case Functional::NormalizedTrace:
            return x.trace() / cplx(static_cast<double>(x.rows));
        case Functional::Density:
            return hs_inner(density.adjoint(), x);  // Tr(density * x)
    }
    throw std::logic_error("HqmmModel::initial_apply: unreachable");
}

void HqmmModel::validate() const {
    if (hidden.d_a != dim_hidden() || hidden.d_out != dim_hidden() ||
        hidden.d_b != dim_hidden())
        throw std::invalid_argument("HqmmModel: hidden transition dimensions inconsistent");
    if (emission.d_out != dim_hidden())
        throw std::invalid_argument("HqmmModel: emission output dimension inconsistent");
    if (initial_state == Functional::Density &&
        (density.rows != dim_hidden() || density.cols != dim_hidden()))
        throw std::invalid_argument("HqmmModel: density dimension inconsistent");
    cplx on_unit = initial_apply(ComplexMatrix::identity(dim_hidden()));
    if (!(on_unit.real() > 0.0) || std::abs(on_unit.imag()) > 1e-12)
        throw std::invalid_argument("HqmmModel: initial functional is not positive on the unit");
}

HqmmModel aklt_hqmm_model() {
    const AkltTensors& t = AkltTensors::standard();
    HqmmModel m;
    m.initial_state = HqmmModel::Functional::NormalizedTrace;
    m.hidden = TransitionExpectation::rank_one_trace(2, 0.5);
    m.emission = TransitionExpectation::kraus_family({t.a_plus, t.a_zero, t.a_minus});
    m.ordering = HqmmModel::Ordering::Causal;
    m.validate();
    return m;
}

ComplexMatrix e_hidden(const ComplexMatrix& x, const ComplexMatrix& z) {
    if (x.rows != 2 || x.cols != 2 || z.rows != 2 || z.cols != 2)
        throw std::invalid_argument("e_hidden: operands must be 2x2");
    return (0.5 * x.trace()) * z;
}

ComplexMatrix e_emission(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.rows != 2 || x.cols != 2 || y.rows != 3 || y.cols != 3)
        throw std::invalid_argument("e_emission: operands must be 2x2 and 3x3");
    const AkltTensors& t = AkltTensors::standard();
    ComplexMatrix out(2, 2);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) {
            cplx w = y(k, l);
            if (w == cplx(0.0)) continue;
            out += w * (t.op(k) * x * t.op(l).adjoint());
        }
    return out;
}

ComplexMatrix block_map_conventional(const ComplexMatrix& a, const ComplexMatrix& b,
                                     const ComplexMatrix& x) {
    return e_hidden(e_emission(a, b), x);
}

ComplexMatrix block_map_causal(const ComplexMatrix& a, const ComplexMatrix& b,
                               const ComplexMatrix& x) {
    return e_emission(e_hidden(a, x), b);
}

cplx joint_state(const HqmmModel& model,
                 const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& pairs) {
    model.validate();
    if (model.ordering != HqmmModel::Ordering::Causal)
        throw std::invalid_argument(
            "joint_state: model is conventionally ordered; compose block_map_conventional "
            "directly instead of the causal recursion");
    if (pairs.size() > 12)
        throw std::invalid_argument("joint_state: at most 12 site pairs supported");
    ComplexMatrix t = ComplexMatrix::identity(model.dim_hidden());
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it)
        t = model.emission.evaluate(model.hidden.evaluate(it->first, t), it->second);
    return model.initial_apply(t);
}

cplx joint_state_closed_form(const HqmmModel& model,
                             const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& pairs) {
    model.validate();
    if (model.hidden.kind != TransitionExpectation::Kind::RankOneTrace)
        throw std::invalid_argument(
            "joint_state_closed_form: requires a rank-one-trace hidden transition");
    if (model.emission.kind != TransitionExpectation::Kind::KrausFamily)
        throw std::invalid_argument(
            "joint_state_closed_form: requires a Kraus-family emission");
    std::size_t n = pairs.size();
    if (n > 4)
        throw std::invalid_argument(
            "joint_state_closed_form: expansion is exponential, n <= 4 only");
    std::size_t db = model.emission.d_b;
    std::size_t dh = model.dim_hidden();

    cplx prefactor = 1.0;
    for (const auto& [a, b] : pairs) prefactor *= model.hidden.scale * a.trace();

    // Enumerate all multi-index pairs (k, l); for each, weight
    // prod_m <k_m|b_m|l_m> times K_{k_1}..K_{k_n} K_{l_n}^dag..K_{l_1}^dag.
    std::size_t count = 1;
    for (std::size_t i = 0; i < n; ++i) count *= db;
    ComplexMatrix acc(dh, dh);
    std::vector<std::size_t> kd(n), ld(n);
    for (std::size_t ki = 0; ki < count; ++ki) {
        std::size_t rem = ki;
        for (std::size_t m = n; m-- > 0;) { kd[m] = rem % db; rem /= db; }
        ComplexMatrix pk = ComplexMatrix::identity(dh);
        for (std::size_t m = 0; m < n; ++m) pk = pk * model.emission.family[kd[m]];
        for (std::size_t li = 0; li < count; ++li) {
            rem = li;
            for (std::size_t m = n; m-- > 0;) { ld[m] = rem % db; rem /= db; }
            cplx w = 1.0;
            for (std::size_t m = 0; m < n && w != cplx(0.0); ++m)
                w *= pairs[m].second(kd[m], ld[m]);
            if (w == cplx(0.0)) continue;
            ComplexMatrix pl = ComplexMatrix::identity(dh);
            for (std::size_t m = 0; m < n; ++m) pl = pl * model.emission.family[ld[m]];
            acc += w * (pk * pl.adjoint());
        }
    }
    return prefactor * model.initial_apply(acc);
}

cplx observation_process(const HqmmModel& model, const ObservableSpec& y) {
    y.validate();
    if (!y.factored)
        throw std::invalid_argument("observation_process: observable must be factored");
    if (y.n_sites > 8)
        throw std::invalid_argument("observation_process: n_sites must be <= 8");
    std::vector<std::pair<ComplexMatrix, ComplexMatrix>> pairs;
    pairs.reserve(y.n_sites);
    ComplexMatrix unit = ComplexMatrix::identity(model.dim_hidden());
    for (const auto& b : y.factors) pairs.emplace_back(unit, b);
    return joint_state(model, pairs);
}

ComplexMatrix isometry_v() {
    const double r = 1.0 / std::sqrt(2.0);
    // Rows are the pair basis |uu>, |ud>, |du>, |dd>; columns the bond basis.
    return ComplexMatrix::from_rows({{0.0, 0.0}, {r, r}, {-r, r}, {0.0, 0.0}});
}

ComplexMatrix block_map_isometry(HqmmModel::Ordering ordering, const ComplexMatrix& a,
                                 const ComplexMatrix& b, const ComplexMatrix& x) {
    if (a.rows != 2 || a.cols != 2 || b.rows != 3 || b.cols != 3 || x.rows != 2 || x.cols != 2)
        throw std::invalid_argument("block_map_isometry: operands must be 2x2, 3x3, 2x2");
    const AkltTensors& t = AkltTensors::standard();
    static const ComplexMatrix v = isometry_v();
    static const ComplexMatrix vd = v.adjoint();
    ComplexMatrix out(2, 2);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) {
            cplx w = b(k, l);
            if (w == cplx(0.0)) continue;
            if (ordering == HqmmModel::Ordering::Conventional) {
                out += w * (vd * kron(t.op(k) * a * t.op(l).adjoint(), x) * v);
            } else {
                out += w * (t.op(k) * (vd * kron(x, a) * v) * t.op(l).adjoint());
            }
        }
    return out;
}

}  // namespace vbs
