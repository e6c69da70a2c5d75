#pragma once

// Seeded random matrices for property tests and reproducible CLI trials.
// Gaussian variates come from an explicit Box-Muller transform over raw
// mt19937_64 output, so a given seed produces the same stream on every
// platform and standard library (std::normal_distribution does not promise
// that).

#include <cmath>
#include <cstdint>
#include <random>

#include "vbs/matrix.hpp"

namespace vbs {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double gauss() {
        double u1 = uniform(), u2 = uniform();
        // 1 - u1 keeps the argument of log strictly positive
        return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    cplx cgauss() {
        double re = gauss();
        double im = gauss();
        return {re, im};
    }

private:
    std::mt19937_64 gen_;
};

inline ComplexMatrix random_matrix(Rng& rng, std::size_t d) {
    ComplexMatrix m(d, d);
    for (auto& e : m.entries) e = rng.cgauss();
    return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t d) {
    ComplexMatrix m = random_matrix(rng, d);
    ComplexMatrix h = m + m.adjoint();
    return 0.5 * h;
}

}  // namespace vbs
