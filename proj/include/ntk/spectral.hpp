// Hecke eigenvalue systems with trivial central character, the inner products
// of their shifted oldforms R_t phi, and the orthonormalised oldform basis.
#pragma once

#include "ntk/characters.hpp"
#include "ntk/field.hpp"
#include "ntk/numeric.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ntk {

struct LocalSatake {
    cplx alpha{1, 0};      // the pair is {alpha, 1/alpha}
    bool ramified = false;  // lambda(p^k) = 0 for k >= 1
};

class EigenvalueSystem {
public:
    enum class Source { eisenstein, synthetic, divisor, custom };

    // Satake angles uniform on the unit circle, drawn from (seed, prime) so the
    // value at a prime does not depend on evaluation order. With exceptional
    // set, each prime instead gets a real alpha = +-Np^{u theta}, u uniform.
    static EigenvalueSystem synthetic(const Field& K, std::uint64_t seed, bool exceptional = false,
                                      double theta = 1.0 / 9);
    // lambda = sum over ab = m of chi(a) chi^{-1}(b); conductor cond(chi)^2.
    static EigenvalueSystem eisenstein(const Field& K, const HeckeCharacter& chi);
    // alpha = 1 everywhere: lambda(m) = number of divisors of m.
    static EigenvalueSystem divisor(const Field& K);
    static EigenvalueSystem custom(const Field& K, std::function<LocalSatake(const PrimeIdeal&)> local,
                                   Ideal conductor, double theta);

    LocalSatake local(const PrimeIdeal& P) const;
    cplx lambda_prime_power(const PrimeIdeal& P, int k) const;
    cplx lambda(const Ideal& m) const;  // 0 for fractional m

    const Field& field() const { return *K_; }
    Source source() const { return source_; }
    std::uint64_t seed() const { return seed_; }
    double theta() const { return theta_; }
    const Ideal& conductor() const { return conductor_; }
    std::string describe() const;

private:
    EigenvalueSystem(const Field& K, Source src) : K_(&K), source_(src) {}
    const Field* K_;
    Source source_;
    std::uint64_t seed_ = 0;
    bool exceptional_ = false;
    double theta_ = 0;
    Ideal conductor_;
    std::function<LocalSatake(const PrimeIdeal&)> local_;
};

// <R_{t1} phi, R_{t2} phi> / <phi, phi>, conjugate-linear in t2. Each local
// series stops once its geometric tail bound is below 1e-12.
// Throws std::domain_error when theta >= 1/2.
cplx shifted_inner_ratio(const EigenvalueSystem& sys, const Ideal& t1, const Ideal& t2);

struct OldformBasis {
    Ideal level;
    Ideal conductor;
    std::vector<Ideal> t;  // divisors of level / conductor, ascending norm then HNF
    // alpha[i][j] = coefficient of R_{t[j]} in R^{(t[i])}; zero unless t[j] | t[i].
    std::vector<std::vector<cplx>> alpha;
    std::vector<std::vector<cplx>> gram;  // Gram matrix of the R^{(t)}
    double gram_deviation = 0;            // max |gram - I|
    int index_of(const Ideal& x) const;   // -1 if absent
};

// Throws std::invalid_argument if the conductor does not divide c or there are
// more than 64 divisors, std::runtime_error for a numerically singular Gram
// matrix.
OldformBasis oldform_gram_schmidt(const EigenvalueSystem& sys, const Ideal& c);

// Fourier coefficient of R^{(t)} phi at m.
cplx lambda_t(const EigenvalueSystem& sys, const OldformBasis& basis, const Ideal& t, const Ideal& m);

}  // namespace ntk
