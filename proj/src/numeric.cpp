#include "ntk/numeric.hpp"

namespace ntk {

namespace {

cplx lgamma_stirling(cplx z) {
    // z has Re z >= 15 here.
    static const double coef[] = {1.0 / 12.0,          -1.0 / 360.0,       1.0 / 1260.0,
                                  -1.0 / 1680.0,       1.0 / 1188.0,       -691.0 / 360360.0,
                                  1.0 / 156.0,         -3617.0 / 122400.0};
    cplx zi = 1.0 / z, zi2 = zi * zi;
    cplx series = 0.0;
    cplx p = zi;
    for (double c : coef) {
        series += c * p;
        p *= zi2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
}

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace

cplx lgamma_c(cplx z) {
    if (is_nonpositive_integer(z)) throw std::domain_error("lgamma_c: pole");
    if (z.real() < 0.5) {
        // Reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z).
        cplx s = std::sin(kPi * z);
        return std::log(kPi) - std::log(s) - lgamma_c(1.0 - z);
    }
    cplx shift = 0.0;
    while (z.real() < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    return lgamma_stirling(z) - shift;
}

cplx gamma_c(cplx z) {
    if (is_nonpositive_integer(z)) throw std::domain_error("gamma_c: pole");
    if (z.imag() == 0.0) return std::tgamma(z.real());
    return std::exp(lgamma_c(z));
}

cplx rgamma_c(cplx z) {
    if (is_nonpositive_integer(z)) return 0.0;
    if (z.imag() == 0.0 && z.real() < 170.0) return 1.0 / std::tgamma(z.real());
    return std::exp(-lgamma_c(z));
}

}  // namespace ntk
