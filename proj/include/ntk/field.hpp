// Exact arithmetic in Q and real quadratic fields Q(sqrt D).
//
// Elements are a + b*w with w = (1 + sqrt D)/2 for D = 1 mod 4 and w = sqrt D
// otherwise. Ideals are stored as (1/den) * (Z*A + Z*(B + C*w)) with
// C | A, C | B, 0 <= B < A; over Q only A (and den) matter.
#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ntk {

using i64 = std::int64_t;
using i128 = __int128;

struct Elem {
    i64 a = 0;
    i64 b = 0;
    auto operator<=>(const Elem&) const = default;
};

class Field;

struct Ideal {
    const Field* K = nullptr;
    i64 A = 1, B = 0, C = 1;
    i64 den = 1;
    bool operator==(const Ideal& o) const {
        return K == o.K && A == o.A && B == o.B && C == o.C && den == o.den;
    }
    bool integral() const { return den == 1; }
};

// HNF lexicographic order, used for deterministic tie-breaks.
bool ideal_less(const Ideal& x, const Ideal& y);

struct PrimeIdeal {
    i64 p = 0;
    int f = 1;  // residue degree
    int e = 1;  // ramification index
    Ideal ideal;
    Elem second;  // (p, second) generates the ideal
    i64 norm() const { return f == 1 ? p : p * p; }
    bool operator==(const PrimeIdeal& o) const { return ideal == o.ideal; }
};

using Factorization = std::vector<std::pair<PrimeIdeal, int>>;

struct ArithValues {
    int mu;
    i64 phi;
    i64 tau;
};

struct Box {
    std::vector<std::pair<double, double>> intervals;  // one per embedding
};

struct FieldOptions {
    bool allow_class_number = false;  // accept h != 1
    i64 minkowski_limit = 100000;     // refuse class-group searches beyond this
};

class Field {
public:
    static std::shared_ptr<const Field> make(i64 D, FieldOptions opt = {});

    int degree() const { return d_; }
    i64 D() const { return D_; }
    i64 disc() const { return disc_; }
    i64 omega_trace() const { return t_; }
    i64 omega_norm() const { return n_; }
    int class_number() const { return h_; }

    // Fundamental unit (> 1 at the first embedding); 1 over Q.
    Elem fundamental_unit() const { return eps_; }
    int fundamental_unit_norm() const { return eps_norm_; }
    // Generator of the totally positive units (eps or eps^2); 1 over Q.
    Elem positive_unit() const { return eps_plus_; }
    long double regulator() const { return reg_; }
    const Ideal& different() const { return diff_; }
    // Totally positive generator of the different with minimal trace.
    std::optional<Elem> different_generator() const { return diff_gen_; }

    // --- elements ---
    Elem from_int(i64 n) const { return {n, 0}; }
    Elem add(Elem x, Elem y) const;
    Elem sub(Elem x, Elem y) const;
    Elem neg(Elem x) const;
    Elem mul(Elem x, Elem y) const;
    Elem scale(Elem x, i64 k) const;
    Elem conj(Elem x) const;
    Elem pow(Elem x, int k) const;  // k >= 0
    i64 norm(Elem x) const;
    i64 trace(Elem x) const;
    bool is_zero(Elem x) const { return x.a == 0 && x.b == 0; }
    bool is_unit(Elem x) const;
    std::optional<Elem> div_exact(Elem x, Elem y) const;
    Elem inverse_unit(Elem u) const;
    std::array<long double, 2> embed(Elem x) const;
    std::array<double, 2> embed_d(Elem x) const;
    bool totally_positive(Elem x) const;
    // Element-valued w = embedding of omega.
    long double omega_embedding(int j) const { return omega_emb_[j]; }

    // --- ideals ---
    Ideal unit_ideal() const;
    Ideal principal(Elem x) const;
    Ideal principal_int(i64 n) const { return principal(from_int(n)); }
    Ideal generated(const std::vector<Elem>& gens) const;
    Ideal mul(const Ideal& x, const Ideal& y) const;
    Ideal pow(const Ideal& x, int k) const;
    Ideal gcd(const Ideal& x, const Ideal& y) const;
    Ideal lcm(const Ideal& x, const Ideal& y) const;
    bool divides(const Ideal& x, const Ideal& y) const;  // x | y
    bool contains(const Ideal& x, Elem e) const;
    Ideal conj(const Ideal& x) const;
    Ideal inverse(const Ideal& x) const;
    // Exact quotient x * y^{-1} (may be fractional).
    Ideal quotient(const Ideal& x, const Ideal& y) const;
    // Norm of an integral ideal.
    i64 norm(const Ideal& x) const;
    // Norm as a rational number (numerator, denominator).
    std::pair<i64, i64> norm_rational(const Ideal& x) const;
    // Z-basis elements {A, B + C w} (scaled by den).
    std::array<Elem, 2> basis(const Ideal& x) const;

    Factorization factor(const Ideal& x, i64 bound = 10000000) const;
    std::vector<PrimeIdeal> primes_above(i64 p) const;
    int valuation(const PrimeIdeal& P, const Ideal& x) const;
    ArithValues arith(const Ideal& x) const;
    std::vector<Ideal> ideals_of_norm(i64 n) const;
    std::vector<Ideal> divisors(const Ideal& x) const;  // ascending norm, HNF ties
    Ideal from_factorization(const Factorization& f) const;

    // Generator of a principal ideal, normalised: totally positive with
    // minimal trace when possible, else positive first embedding and
    // minimal |s1| + |s2|. nullopt if not principal.
    std::optional<Elem> generator(const Ideal& x) const;
    // Move a generator to the canonical representative of its unit class.
    Elem canonical_associate(Elem x) const;

    // Elements of the integral ideal y inside the box, lexicographic order.
    std::vector<Elem> enumerate_in_box(const Ideal& y, const Box& box, bool totally_positive_only) const;

    std::string to_string(Elem x) const;
    std::string to_string(const Ideal& x) const;

private:
    explicit Field(i64 D);
    void init_units();
    void init_class_number(const FieldOptions& opt);
    void init_different();
    Ideal hnf(std::vector<std::pair<i128, i128>> vecs, i64 den) const;
    Ideal normalise(Ideal I) const;
    std::optional<Elem> find_generator_raw(const Ideal& x) const;

    i64 D_ = 1;
    int d_ = 1;
    i64 disc_ = 1;
    i64 t_ = 0, n_ = 0;  // w^2 = t w - n
    std::array<long double, 2> omega_emb_{0, 0};
    Elem eps_{1, 0};
    int eps_norm_ = 1;
    Elem eps_plus_{1, 0};
    long double reg_ = 0;
    int h_ = 1;
    Ideal diff_;
    std::optional<Elem> diff_gen_;
};

using FieldPtr = std::shared_ptr<const Field>;

bool is_squarefree(i64 n);
std::vector<std::pair<i64, int>> factor_integer(i64 n);
i64 mod_floor(i64 a, i64 m);

// psi(x) = e(Tr x) for x = num / den with num integral.
std::complex<double> psi(const Field& K, Elem num, i64 den);

// Embedded reference table (D, D_K, eps coordinates, h) for squarefree D <= 100.
struct FieldTableRow {
    i64 D, disc, eps_a, eps_b;
    int h;
};
const std::vector<FieldTableRow>& field_table();
// Recomputes every row; returns the list of mismatching D values.
std::vector<i64> verify_field_table();

}  // namespace ntk
