// Shifted convolution sums of Hecke eigenvalues, the associated Dirichlet
// series in its region of absolute convergence, the unit fundamental domain,
// and the amplified second moment with its character-orthogonality identity.
#pragma once

#include "ntk/characters.hpp"
#include "ntk/field.hpp"
#include "ntk/numeric.hpp"
#include "ntk/spectral.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace ntk {

// Real function with compact support [lo, hi] inside (0, inf).
struct Profile {
    std::function<double(double)> f;
    double lo = 0.5, hi = 2;
    // exp(1 - 1/(1 - u^2)) with u the affine map of [lo, hi] onto [-1, 1]
    static Profile bump(double lo, double hi);
};

// Weight on the totally positive part of K_oo; zero outside `support`.
struct Weight {
    std::function<cplx(const std::vector<double>&)> f;
    std::vector<std::pair<double, double>> support;
    cplx operator()(const std::vector<double>& x) const;
    // prod_j V(x_j / scale_j)
    static Weight product(const Profile& V, std::vector<double> scale);
};

struct ShiftedQuery {
    const EigenvalueSystem* sys1 = nullptr;
    const EigenvalueSystem* sys2 = nullptr;
    Elem l1{1, 0}, l2{1, 0};  // totally positive
    Ideal y;                  // integral
    Elem q{1, 0};             // nonzero
    std::vector<double> Y;    // per place
    Weight W1, W2;
};

struct ShiftedResult {
    cplx value;
    i64 candidates = 0;  // lattice points r1 in the W1 box
    i64 solutions = 0;   // of those, with r2 in y and nonzero
};

// sum over l1 r1 - l2 r2 = q (r1, r2 in y nonzero) of
// lambda1(r1/y) conj lambda2(r2/y) / sqrt N(r1 r2 / y^2) W1(l1 r1 / Y) conj W2(l2 r2 / Y).
// Empty when q is not in y.
ShiftedResult shifted_sum(const ShiftedQuery& Q);

struct DirichletQuery {
    const EigenvalueSystem* sys1 = nullptr;
    const EigenvalueSystem* sys2 = nullptr;
    Elem l1{1, 0}, l2{1, 0};
    Ideal y;
    Elem q{1, 0};  // totally positive (swap the two sides otherwise)
};

struct DirichletResult {
    cplx value;
    double height = 0;      // r1 with max_j sigma_j(l1 r1) <= height were summed
    double tail_bound = 0;  // bound on the omitted terms; inf if none is available
    i64 terms = 0;
    cplx leading_term;      // the summed term of largest modulus
    bool beta_warning = false;  // beta <= 66 d
};

// sum over totally positive r1, r2 in y with l1 r1 - l2 r2 = q of
// lambda1 conj lambda2 N(l1 r1 l2 r2)^{(beta-1)/2} / prod_j sigma_j(l1 r1 + l2 r2)^{s_j + beta - 1}.
// The tail bound uses |lambda(m)| <= tau(m) N(m)^theta in mean square and is
// finite when Re s_j > 1 + theta1 + theta2. Throws std::domain_error when
// some Re s_j <= 1 or the tail bound exceeds tol.
DirichletResult dirichlet_D(const DirichletQuery& Q, const std::vector<cplx>& s, int beta, double height,
                            double tol = std::numeric_limits<double>::infinity());

struct FdReduction {
    int power = 0;              // u = positive_unit^power
    Elem unit{1, 0};
    std::vector<double> point;  // u y
    double coordinate = 0;      // log-coordinate of u y / N(y)^{1/d}, in [0, 1) for d = 2
};

// Translate of y by the totally positive units into the fundamental domain
// {0 <= log(y1/y2) / (2 log eps+) < 1}. Throws std::domain_error for a
// nonpositive coordinate.
FdReduction fd_reduce(const Field& K, const std::vector<double>& y);
// The same for a totally positive element, applied exactly.
Elem fd_reduce_element(const Field& K, Elem x);

struct AmplifierPrime {
    Elem generator;  // totally positive, reduced into the fundamental domain
    Ideal ideal;
    i64 norm = 0;
};

// Totally positive generators of prime ideals l with L <= N(l) <= 2L and l not dividing q.
std::vector<AmplifierPrime> amplifier_primes(const Field& K, double L, const Ideal& q);

struct AmplifiedReport {
    i64 phi = 0;
    std::vector<AmplifierPrime> primes;
    i64 support = 0;          // totally positive r with nonzero weight
    double side_A = 0;        // sum over characters xi mod q
    double side_B = 0;        // phi(q) times the sum over unit residues
    double relative_gap = 0;  // |A - B| / max(A, B)
    double extended = 0;      // phi(q) times the sum over all residues
    cplx diagonal;            // l1 r1 = l2 r2 pairs (times phi)
    cplx offdiagonal;         // remaining congruent pairs (times phi)
    cplx offdiagonal_shifted; // the same through shifted_sum over q' in q
    i64 diagonal_pairs = 0;
    i64 offdiagonal_shifts = 0;  // nonzero q' in q visited
};

// Amplifier sum_l xi(l) conj chi(l); r runs over the totally positive
// elements of o with weight prod_j V(sigma_j r / Y^{1/d}). Requires h = 1.
// Throws std::invalid_argument when no amplifier prime lies in [L, 2L].
AmplifiedReport amplified_moment(const Field& K, const Ideal& q, double L, const EigenvalueSystem& sys,
                                 const HeckeCharacter& chi, const Profile& V, double Y, bool with_shifted = true);

// sum over integral m of lambda(m) chi(m) / sqrt N(m) V(N(m) / Y).
cplx afe_sum(const EigenvalueSystem& sys, const HeckeCharacter& chi, double Y, const Profile& V);

}  // namespace ntk
