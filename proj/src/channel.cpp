#include "vbs/channel.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <sstream>
#include <stdexcept>

namespace vbs {

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops) : kraus(std::move(ops)) {
    if (kraus.empty()) throw std::invalid_argument("KrausChannel: empty Kraus family");
    dim_out = kraus.front().rows;
    dim_in = kraus.front().cols;
    if (dim_out == 0 || dim_in == 0)
        throw std::invalid_argument("KrausChannel: zero-dimensional Kraus operator");
    for (const auto& k : kraus)
        if (k.rows != dim_out || k.cols != dim_in)
            throw std::invalid_argument("KrausChannel: Kraus operators have mixed shapes");
}

bool KrausChannel::unital(double tol) const {
    ComplexMatrix s(dim_out, dim_out);
    for (const auto& k : kraus) s += k * k.adjoint();
    return max_abs_diff(s, ComplexMatrix::identity(dim_out)) <= tol;
}

bool KrausChannel::trace_preserving(double tol) const {
    ComplexMatrix s(dim_in, dim_in);
    for (const auto& k : kraus) s += k.adjoint() * k;
    return max_abs_diff(s, ComplexMatrix::identity(dim_in)) <= tol;
}

SuperOperator SuperOperator::identity(std::size_t d) {
    return SuperOperator(d, ComplexMatrix::identity(d * d));
}

ComplexMatrix vec(const ComplexMatrix& z) {
    if (!z.is_square()) throw std::invalid_argument("vec: matrix is not square");
    ComplexMatrix v(z.rows * z.cols, 1);
    v.entries = z.entries;  // row-major flattening is exactly the entry order
    return v;
}

ComplexMatrix unvec(const ComplexMatrix& v, std::size_t d) {
    if (v.cols != 1 || v.rows != d * d) throw std::invalid_argument("unvec: bad vector shape");
    ComplexMatrix z(d, d);
    z.entries = v.entries;
    return z;
}

ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& z) {
    if (!z.is_square() || z.rows != ch.dim_in)
        throw std::invalid_argument("apply: operand dimension does not match channel input");
    ComplexMatrix out(ch.dim_out, ch.dim_out);
    for (const auto& k : ch.kraus) out += k * z * k.adjoint();
    return out;
}

ComplexMatrix dual_apply(const KrausChannel& ch, const ComplexMatrix& rho) {
    if (!rho.is_square() || rho.rows != ch.dim_out)
        throw std::invalid_argument("dual_apply: operand dimension does not match channel output");
    ComplexMatrix out(ch.dim_in, ch.dim_in);
    for (const auto& k : ch.kraus) out += k.adjoint() * rho * k;
    return out;
}

SuperOperator to_superoperator(const std::function<ComplexMatrix(const ComplexMatrix&)>& f,
                               std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("to_superoperator: dim must be positive");
    SuperOperator s(dim, ComplexMatrix(dim * dim, dim * dim));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            ComplexMatrix unit(dim, dim);
            unit(i, j) = 1.0;
            ComplexMatrix img = f(unit);
            if (img.rows != dim || img.cols != dim)
                throw std::invalid_argument("to_superoperator: map changes dimensions");
            std::size_t col = i * dim + j;
            for (std::size_t r = 0; r < dim * dim; ++r) s.matrix(r, col) = img.entries[r];
        }
    // Spot-check linearity: the matrix-unit sampling above is only a faithful
    // representation when f is linear, so compare f against the sampled matrix
    // on two fixed pseudo-random linear combinations.
    std::mt19937_64 gen(0x9e3779b97f4a7c15ULL);
    auto rnd = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0; };
    for (int check = 0; check < 2; ++check) {
        ComplexMatrix z(dim, dim);
        for (auto& e : z.entries) e = cplx(rnd(), rnd());
        ComplexMatrix via_matrix = superop_apply(s, z);
        double dev = max_abs_diff(f(z), via_matrix);
        if (dev > 1e-8) {
            std::ostringstream os;
            os << "to_superoperator: map is not linear (deviation " << dev
               << " on a random linear combination)";
            throw std::invalid_argument(os.str());
        }
    }
    return s;
}

SuperOperator to_superoperator(const KrausChannel& ch) {
    if (ch.dim_in != ch.dim_out)
        throw std::invalid_argument(
            "to_superoperator: channel must have equal input/output dimensions");
    return to_superoperator([&ch](const ComplexMatrix& z) { return apply(ch, z); }, ch.dim_in);
}

cplx superop_trace(const SuperOperator& s) { return s.matrix.trace(); }

ComplexMatrix superop_apply(const SuperOperator& s, const ComplexMatrix& z) {
    if (!z.is_square() || z.rows != s.dim)
        throw std::invalid_argument("superop_apply: operand dimension mismatch");
    return unvec(s.matrix * vec(z), s.dim);
}

SuperOperator compose(const SuperOperator& f, const SuperOperator& g) {
    if (f.dim != g.dim) throw std::invalid_argument("compose: superoperator dimension mismatch");
    return SuperOperator(f.dim, f.matrix * g.matrix);
}

SuperOperator superop_power(const SuperOperator& s, unsigned n) {
    SuperOperator p = SuperOperator::identity(s.dim);
    for (unsigned i = 0; i < n; ++i) p = compose(p, s);
    return p;
}

ComplexMatrix choi_matrix(const SuperOperator& s) {
    std::size_t d = s.dim;
    ComplexMatrix c(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t b = 0; b < d; ++b)
                    c(i * d + a, j * d + b) = s.matrix(i * d + j, a * d + b);
    return c;
}

PowerLimitResult power_limit(const KrausChannel& ch, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("power_limit: tol must be positive");
    if (!ch.unital()) throw std::invalid_argument("power_limit: channel is not unital");
    const SuperOperator s = to_superoperator(ch);

    const unsigned max_steps = 10000;
    std::deque<ComplexMatrix> history;  // last few powers, oldest first
    SuperOperator prev = s;             // Phi^1
    SuperOperator next = prev;
    unsigned steps = 0;
    bool converged = false;
    for (unsigned n = 1; n <= max_steps; ++n) {
        next = compose(prev, s);  // Phi^(n+1)
        steps = n;
        if (max_abs_diff(next.matrix, prev.matrix) < tol) {
            converged = true;
            break;
        }
        history.push_back(prev.matrix);
        if (history.size() > 10) history.pop_front();
        prev = next;
    }
    if (!converged)
        throw std::runtime_error(
            "power_limit: no convergence within 10000 steps; the channel has peripheral "
            "spectrum beyond the fixed point (non-primitive)");

    // Refine the limit well past the stopping tolerance so that the decay fit
    // below is not contaminated by the limit's own residual error.
    SuperOperator limit = next;
    for (int i = 0; i < 40; ++i) limit = compose(limit, s);

    // Least-squares slope of log-error over the recorded pre-convergence tail.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    unsigned count = 0;
    for (std::size_t idx = 0; idx < history.size(); ++idx) {
        double err = max_abs_diff(history[idx], limit.matrix);
        if (err <= 0.0) continue;
        double x = static_cast<double>(idx);
        double y = std::log(err);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++count;
    }
    double rate = 0.0;
    if (count >= 2) {
        double denom = count * sxx - sx * sx;
        if (denom != 0.0) rate = std::exp((count * sxy - sx * sy) / denom);
    }
    return PowerLimitResult{limit, rate, steps};
}

}  // namespace vbs
