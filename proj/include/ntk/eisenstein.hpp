// Local newvectors of induced representations H(chi, chi^{-1}), Eisenstein
// Hecke eigenvalues and oldform coefficients, constant-term local factors.
#pragma once

#include "ntk/characters.hpp"
#include "ntk/field.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <optional>

namespace ntk {

using Rational = boost::multiprecision::cpp_rational;

// a + b sqrt(N) with rational a, b.
struct QuadSurd {
    Rational a = 0, b = 0;
    i64 N = 1;
    QuadSurd operator+(const QuadSurd& o) const;
    QuadSurd operator-(const QuadSurd& o) const;
    QuadSurd operator*(const QuadSurd& o) const;
    bool is_zero() const { return a == 0 && b == 0; }
    double to_double() const;
};

// N^{e/2} as a surd.
QuadSurd half_power(i64 N, int e);

int local_dimension(int n, int m);

// Local basis vector phi_j at a prime of norm N for a character with
// conductor exponent m. Only the profile in v(b) matters; the unit phase of
// the ramified vectors is carried symbolically.
struct LocalVectorSpec {
    i64 N = 2;
    int j = 0;
    int m = 0;
};

// Haar measure (total mass 1) of {k : v(b) = v}, and of {v(b) >= v}.
Rational level_measure(i64 N, int v);
Rational tail_measure(i64 N, int v);

// Value of phi_j on the level set v(b) = v (m = 0), or the magnitude on its
// support level m + j (m > 0).
QuadSurd local_vector_value(const LocalVectorSpec& s, int v);
// <phi_i, phi_j> for two vectors of the same representation (same N, m).
QuadSurd local_inner_product(const LocalVectorSpec& x, const LocalVectorSpec& y);
Rational local_vector_norm_sq(const LocalVectorSpec& s);

// prod over p^j || c of N p^j (1 + 1/N p)
i64 coset_index(const Field& K, const Ideal& c);

// Characters used here must be primitive (modulus equal to conductor).
std::complex<double> eis_hecke_eigenvalue(const Field& K, const HeckeCharacter& chi, const Ideal& m);

struct EisPrimeData {
    PrimeIdeal P;
    int vt = 0;          // v_p(t)
    int m = 0;           // v_p(c_chi)
    int e = 0;           // v_p(t_chi)
    std::complex<double> chi_p;  // chi(p) when unramified
    std::complex<double> F0;     // local normalised integral at n = e
};

class EisContext {
public:
    EisContext(const Field& K, HeckeCharacter chi, Ideal t);

    const Ideal& t() const { return t_; }
    const Ideal& t_chi() const { return t_chi_; }
    const Ideal& conductor() const { return c_chi_; }
    double F() const { return F_; }
    const HeckeCharacter& chi() const { return chi_; }

    // Multiplicative lambda_{chi,t}.
    std::complex<double> lambda(const Ideal& m) const;
    // lambda^{(t)}_{chi,chi^{-1}}(m)
    std::complex<double> oldform_coefficient(const Ideal& m) const;

    // Local Fourier integral at p, normalised by N^{-n/2} chi(p)^{-n}, for
    // v_p(m) = n; only for primes dividing t.
    std::complex<double> local_factor(const EisPrimeData& d, int n) const;
    const std::vector<EisPrimeData>& primes() const { return primes_; }

private:
    const Field* K_;
    HeckeCharacter chi_;
    Ideal t_, c_chi_, t_chi_;
    double F_ = 1;
    std::vector<EisPrimeData> primes_;
};

enum class ConstTermCase { unramified, level, level_eta };

// Closed forms of the local constant-term integrals. For level_eta,
// eta_val is v_p(eta) (nullopt for eta = 0).
std::complex<double> constant_term_local_factor(i64 N, std::complex<double> s, ConstTermCase c, int v = 0,
                                                std::optional<int> eta_val = std::nullopt);
// Same integrals as layer sums over the shells of xi, truncated at depth.
std::complex<double> constant_term_layer_sum(i64 N, std::complex<double> s, ConstTermCase c, int v = 0,
                                             std::optional<int> eta_val = std::nullopt, int depth = 40);

Rational constant_term_H_at_half(const Field& K, const Ideal& c);

struct HCheck {
    double H_delta1 = 0, H_delta2 = 0;
    double extrapolated = 0;
    double exact = 0;
    double rel_error = 0;
};
// Assemble the constant-term integral at s = 1/2 + delta (quadrature at the
// infinite places, layer sums at the primes, Euler product up to the prime
// bound), divide by Lambda_K(1 + 2 delta) / Lambda_K(2 + 2 delta), and
// Richardson-extrapolate delta -> 0.
HCheck constant_term_H_check(const Field& K, const Ideal& c, double delta1 = 1e-2, double delta2 = 5e-3,
                             i64 prime_bound = 20000);

struct PartialL {
    std::complex<double> value;
    double tail_bound = 0;  // relative
    i64 prime_bound = 0;
};
// L^{(removed)}(s, chi) by Euler product over N p <= prime_bound.
PartialL partial_L(const Field& K, const HeckeCharacter& chi, std::complex<double> s, const Ideal& removed,
                   i64 prime_bound = 100000);

struct FourierMagnitude {
    double value = 0;
    PartialL L;
    double condition = 0;  // 1 / |L|
};
// |rho(t_chi)| = pi^{d/2} |D_K|^{-1/2} / (|L^{(t/t_chi)}(1, chi^2)| N(t/t_chi)^{1/2} F)
FourierMagnitude newvector_fourier_magnitude(const EisContext& ctx, i64 prime_bound = 100000);

// Primes (as ideals) of norm <= bound in ascending norm, HNF ties.
std::vector<PrimeIdeal> primes_up_to(const Field& K, i64 bound);

}  // namespace ntk
