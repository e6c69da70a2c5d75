#include "vbs/aklt.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vbs {

namespace {

std::size_t pow3(std::size_t n) {
    std::size_t p = 1;
    while (n--) p *= 3;
    return p;
}

}  // namespace

const AkltTensors& AkltTensors::standard() {
    static const AkltTensors t = [] {
        const double r23 = std::sqrt(2.0 / 3.0);
        const double r13 = std::sqrt(1.0 / 3.0);
        AkltTensors a;
        a.a_plus = ComplexMatrix::from_rows({{0.0, r23}, {0.0, 0.0}});
        a.a_zero = ComplexMatrix::from_rows({{r13, 0.0}, {0.0, -r13}});
        a.a_minus = ComplexMatrix::from_rows({{0.0, 0.0}, {-r23, 0.0}});
        return a;
    }();
    return t;
}

const ComplexMatrix& AkltTensors::op(std::size_t k) const {
    switch (k) {
        case 0: return a_plus;
        case 1: return a_zero;
        case 2: return a_minus;
        default: throw std::invalid_argument("AkltTensors::op: index must be 0, 1 or 2");
    }
}

KrausChannel transfer_channel() {
    const AkltTensors& t = AkltTensors::standard();
    return KrausChannel({t.a_plus, t.a_zero, t.a_minus});
}

ObservableSpec ObservableSpec::full_form(std::size_t n, ComplexMatrix m) {
    ObservableSpec y;
    y.n_sites = n;
    y.factored = false;
    y.full = std::move(m);
    y.validate();
    return y;
}

ObservableSpec ObservableSpec::factored_form(std::vector<ComplexMatrix> fs) {
    ObservableSpec y;
    y.n_sites = fs.size();
    y.factored = true;
    y.factors = std::move(fs);
    y.validate();
    return y;
}

ObservableSpec ObservableSpec::identity(std::size_t n) {
    std::vector<ComplexMatrix> fs(n, ComplexMatrix::identity(3));
    return factored_form(std::move(fs));
}

void ObservableSpec::validate() const {
    if (n_sites == 0) throw std::invalid_argument("ObservableSpec: n_sites must be positive");
    if (factored) {
        if (factors.size() != n_sites)
            throw std::invalid_argument("ObservableSpec: factor count differs from n_sites");
        for (const auto& f : factors)
            if (f.rows != 3 || f.cols != 3)
                throw std::invalid_argument("ObservableSpec: factors must be 3x3");
    } else {
        std::size_t d = pow3(n_sites);
        if (full.rows != d || full.cols != d) {
            std::ostringstream os;
            os << "ObservableSpec: full matrix is " << full.rows << "x" << full.cols
               << " but n_sites = " << n_sites << " requires " << d << "x" << d;
            throw std::invalid_argument(os.str());
        }
    }
}

ComplexMatrix ObservableSpec::expand_full() const {
    validate();
    if (!factored) return full;
    ComplexMatrix m = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) m = kron(m, factors[i]);
    return m;
}

double MpsState::squared_norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
}

std::vector<ComplexMatrix> site_products(std::size_t n) {
    const AkltTensors& t = AkltTensors::standard();
    std::vector<ComplexMatrix> cur{ComplexMatrix::identity(2)};
    for (std::size_t depth = 0; depth < n; ++depth) {
        std::vector<ComplexMatrix> next;
        next.reserve(cur.size() * 3);
        for (const auto& p : cur)
            for (std::size_t k = 0; k < 3; ++k) next.push_back(p * t.op(k));
        cur = std::move(next);
    }
    return cur;
}

MpsState build_mps_state(std::size_t n) {
    if (n < 1 || n > 10)
        throw std::invalid_argument("build_mps_state: n must be between 1 and 10");
    std::vector<ComplexMatrix> prods = site_products(n);
    MpsState s;
    s.n_sites = n;
    s.amplitudes.resize(prods.size());
    for (std::size_t i = 0; i < prods.size(); ++i) s.amplitudes[i] = prods[i].trace();
    return s;
}

namespace {

// One-site lift: M -> sum_{k,l} <k|b|l> A_k^dagger M A_l, as a 4x4 matrix.
ComplexMatrix one_site_hat(const ComplexMatrix& b) {
    const AkltTensors& t = AkltTensors::standard();
    ComplexMatrix s(4, 4);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) {
            cplx w = b(k, l);
            if (w == cplx(0.0)) continue;
            const ComplexMatrix& ak = t.op(k);
            const ComplexMatrix& al = t.op(l);
            // superoperator of M -> B M C is kron(B, C^T) with B = A_k^dagger,
            // C = A_l; accumulate without forming temporaries
            for (std::size_t i1 = 0; i1 < 2; ++i1)
                for (std::size_t i2 = 0; i2 < 2; ++i2)
                    for (std::size_t j1 = 0; j1 < 2; ++j1)
                        for (std::size_t j2 = 0; j2 < 2; ++j2)
                            s(i1 * 2 + i2, j1 * 2 + j2) +=
                                w * std::conj(ak(j1, i1)) * al(j2, i2);
        }
    return s;
}

}  // namespace

SuperOperator hat_map(const ObservableSpec& y) {
    y.validate();
    if (y.n_sites > 8) throw std::invalid_argument("hat_map: n_sites must be <= 8");
    if (y.factored) {
        // Blocks on consecutive sites compose with the later site applied on
        // the outside (validated against the state-vector oracle), so the
        // total matrix is M_n * ... * M_1.
        ComplexMatrix total = one_site_hat(y.factors[0]);
        for (std::size_t m = 1; m < y.n_sites; ++m) total = one_site_hat(y.factors[m]) * total;
        return SuperOperator(2, std::move(total));
    }
    std::vector<ComplexMatrix> prods = site_products(y.n_sites);
    ComplexMatrix s(4, 4);
    std::size_t d = prods.size();
    for (std::size_t ki = 0; ki < d; ++ki)
        for (std::size_t li = 0; li < d; ++li) {
            cplx w = y.full(ki, li);
            if (w == cplx(0.0)) continue;
            const ComplexMatrix& pk = prods[ki];  // A_{k_1}...A_{k_n}; its adjoint
                                                  // is the daggered left factor
            const ComplexMatrix& pl = prods[li];
            for (std::size_t i1 = 0; i1 < 2; ++i1)
                for (std::size_t i2 = 0; i2 < 2; ++i2)
                    for (std::size_t j1 = 0; j1 < 2; ++j1)
                        for (std::size_t j2 = 0; j2 < 2; ++j2)
                            s(i1 * 2 + i2, j1 * 2 + j2) +=
                                w * std::conj(pk(j1, i1)) * pl(j2, i2);
        }
    return SuperOperator(2, std::move(s));
}

cplx finite_expectation(const ObservableSpec& y) { return superop_trace(hat_map(y)); }

cplx exact_oracle(const ObservableSpec& y) {
    y.validate();
    if (y.n_sites > 8) throw std::invalid_argument("exact_oracle: n_sites must be <= 8");
    MpsState psi = build_mps_state(y.n_sites);
    std::size_t dim = psi.amplitudes.size();
    std::vector<cplx> img(dim);
    if (y.factored) {
        // Apply one 3x3 factor per site to the amplitude vector in turn.
        img = psi.amplitudes;
        std::size_t stride = dim / 3;  // stride of site 1, shrinks by 3 per site
        for (std::size_t site = 0; site < y.n_sites; ++site) {
            const ComplexMatrix& b = y.factors[site];
            std::vector<cplx> out(dim);
            for (std::size_t base = 0; base < dim; ++base) {
                std::size_t digit = (base / stride) % 3;
                std::size_t root = base - digit * stride;
                cplx acc = 0.0;
                for (std::size_t l = 0; l < 3; ++l) acc += b(digit, l) * img[root + l * stride];
                out[base] = acc;
            }
            img = std::move(out);
            stride /= 3;
        }
    } else {
        for (std::size_t i = 0; i < dim; ++i) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < dim; ++j) acc += y.full(i, j) * psi.amplitudes[j];
            img[i] = acc;
        }
    }
    cplx val = 0.0;
    for (std::size_t i = 0; i < dim; ++i) val += std::conj(psi.amplitudes[i]) * img[i];
    return val;
}

Spin1Operators spin1_operators() {
    const double r = 1.0 / std::sqrt(2.0);
    Spin1Operators s;
    s.sx = ComplexMatrix::from_rows({{0.0, r, 0.0}, {r, 0.0, r}, {0.0, r, 0.0}});
    s.sy = ComplexMatrix::from_rows({{0.0, cplx(0.0, -r), 0.0},
                                     {cplx(0.0, r), 0.0, cplx(0.0, -r)},
                                     {0.0, cplx(0.0, r), 0.0}});
    s.sz = ComplexMatrix::from_rows({{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, -1.0}});
    return s;
}

ComplexMatrix aklt_hamiltonian(std::size_t n, bool periodic) {
    if (n < 2 || n > 8)
        throw std::invalid_argument("aklt_hamiltonian: n must be between 2 and 8");
    Spin1Operators s1 = spin1_operators();
    // Two-site bond term S.S + (1/3)(S.S)^2 as a 9x9 block, first site slow.
    ComplexMatrix ss(9, 9);
    ss += kron(s1.sx, s1.sx);
    ss += kron(s1.sy, s1.sy);
    ss += kron(s1.sz, s1.sz);
    ComplexMatrix bond = ss + cplx(1.0 / 3.0) * (ss * ss);

    std::size_t dim = pow3(n);
    ComplexMatrix h(dim, dim);
    std::vector<std::pair<std::size_t, std::size_t>> bonds;  // 0-based site pairs
    for (std::size_t i = 0; i + 1 < n; ++i) bonds.emplace_back(i, i + 1);
    if (periodic) bonds.emplace_back(n - 1, 0);

    // Accumulate each bond directly into h by index arithmetic rather than
    // materializing kron embeddings (keeps peak memory at one 3^n x 3^n).
    for (auto [i, j] : bonds) {
        std::size_t stride_i = pow3(n - 1 - i);
        std::size_t stride_j = pow3(n - 1 - j);
        for (std::size_t col = 0; col < dim; ++col) {
            std::size_t ki = (col / stride_i) % 3;
            std::size_t kj = (col / stride_j) % 3;
            std::size_t root = col - ki * stride_i - kj * stride_j;
            for (std::size_t kip = 0; kip < 3; ++kip)
                for (std::size_t kjp = 0; kjp < 3; ++kjp) {
                    cplx v = bond(kip * 3 + kjp, ki * 3 + kj);
                    if (v == cplx(0.0)) continue;
                    h(root + kip * stride_i + kjp * stride_j, col) += v;
                }
        }
    }
    return h;
}

}  // namespace vbs
