#include "ntk/field.hpp"
#include "ntk/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ntk {

namespace {

i64 to64(i128 v) {
    if (v > (i128)INT64_MAX || v < (i128)INT64_MIN) throw std::overflow_error("integer overflow in field arithmetic");
    return (i64)v;
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Returns g = gcd(a, b) >= 0 and x, y with a x + b y = g.
i128 ext_gcd(i128 a, i128 b, i128& x, i128& y) {
    i128 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i128 q = a / b;
        i128 t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i64 isqrt(i64 n) {
    i64 r = (i64)std::sqrt((long double)n);
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

i64 mulmod(i64 a, i64 b, i64 m) { return (i64)((i128)a * b % m); }

i64 powmod(i64 a, i64 e, i64 m) {
    i64 r = 1 % m;
    a = mod_floor(a, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Square root of a quadratic residue a modulo an odd prime p.
i64 sqrt_mod(i64 a, i64 p) {
    a = mod_floor(a, p);
    if (a == 0) return 0;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    i64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    i64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    i64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        i64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        i64 b = c;
        for (i64 j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

}  // namespace

i64 mod_floor(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + (m < 0 ? -m : m) : r;
}

bool is_squarefree(i64 n) {
    if (n <= 0) return false;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
    }
    return true;
}

std::vector<std::pair<i64, int>> factor_integer(i64 n) {
    std::vector<std::pair<i64, int>> out;
    if (n < 0) n = -n;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

bool ideal_less(const Ideal& x, const Ideal& y) {
    return std::tie(x.den, x.A, x.C, x.B) < std::tie(y.den, y.A, y.C, y.B);
}

// ---------------------------------------------------------------- construction

Field::Field(i64 D) : D_(D) {
    if (D == 1) {
        d_ = 1;
        disc_ = 1;
        t_ = 0;
        n_ = 0;
    } else {
        d_ = 2;
        if (mod_floor(D, 4) == 1) {
            disc_ = D;
            t_ = 1;
            n_ = (1 - D) / 4;
        } else {
            disc_ = 4 * D;
            t_ = 0;
            n_ = -D;
        }
        long double root = std::sqrt((long double)(t_ * t_ - 4 * n_));
        omega_emb_ = {(t_ + root) / 2, (t_ - root) / 2};
    }
}

std::shared_ptr<const Field> Field::make(i64 D, FieldOptions opt) {
    if (!is_squarefree(D)) throw std::invalid_argument("D must be a positive squarefree integer");
    std::shared_ptr<Field> K(new Field(D));
    K->diff_ = K->unit_ideal();
    K->init_units();
    K->init_class_number(opt);
    K->init_different();
    return K;
}

void Field::init_units() {
    if (d_ == 1) return;
    // Continued fraction of w_1 = (P + sqrt(Delta))/Q; the first convergent
    // p/q with p - q w a unit gives the fundamental unit up to sign/inverse.
    i64 Delta = t_ * t_ - 4 * n_;
    i64 s = isqrt(Delta);
    i128 P = t_, Q = 2;
    i128 p1 = 1, p2 = 0, q1 = 0, q2 = 1;
    for (int k = 0; k < 100000; ++k) {
        i128 a = Q > 0 ? floor_div(P + s, Q) : -(floor_div(P + s, -Q) + 1);
        i128 p = a * p1 + p2, q = a * q1 + q2;
        p2 = p1;
        p1 = p;
        q2 = q1;
        q1 = q;
        Elem x{to64(p), to64(-q)};
        i64 N = norm(x);
        if (N == 1 || N == -1) {
            Elem cands[4] = {x, neg(x), inverse_unit(x), neg(inverse_unit(x))};
            for (Elem c : cands) {
                if (embed(c)[0] > 1) {
                    eps_ = c;
                    break;
                }
            }
            eps_norm_ = (int)N;
            eps_plus_ = N == -1 ? mul(eps_, eps_) : eps_;
            reg_ = std::log(embed(eps_)[0]);
            return;
        }
        i128 Pn = a * Q - P;
        i128 Qn = (Delta - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
    }
    throw std::runtime_error("fundamental unit search did not terminate");
}

void Field::init_class_number(const FieldOptions& opt) {
    if (d_ == 1) {
        h_ = 1;
        return;
    }
    i64 M = (i64)std::floor(std::sqrt((long double)disc_) / 2);
    if (M > opt.minkowski_limit) throw std::runtime_error("class number computation exceeds the configured bound");
    std::vector<Ideal> reps;
    for (i64 n = 1; n <= M; ++n) {
        for (const Ideal& J : ideals_of_norm(n)) {
            bool found = false;
            for (const Ideal& R : reps) {
                if (find_generator_raw(mul(J, conj(R)))) {
                    found = true;
                    break;
                }
            }
            if (!found) reps.push_back(J);
        }
    }
    h_ = (int)reps.size();
    if (h_ != 1 && !opt.allow_class_number)
        throw std::domain_error("class number " + std::to_string(h_) + " != 1 (pass allow_class_number)");
}

void Field::init_different() {
    if (d_ == 1) {
        diff_ = unit_ideal();
        diff_gen_ = Elem{1, 0};
        return;
    }
    Elem g = (t_ == 1) ? Elem{-1, 2} : Elem{0, 2};
    diff_ = principal(g);
    Elem c = canonical_associate(g);
    if (totally_positive(c)) diff_gen_ = c;
}

// ---------------------------------------------------------------- elements

Elem Field::add(Elem x, Elem y) const { return {to64((i128)x.a + y.a), to64((i128)x.b + y.b)}; }
Elem Field::sub(Elem x, Elem y) const { return {to64((i128)x.a - y.a), to64((i128)x.b - y.b)}; }
Elem Field::neg(Elem x) const { return {-x.a, -x.b}; }
Elem Field::scale(Elem x, i64 k) const { return {to64((i128)x.a * k), to64((i128)x.b * k)}; }

Elem Field::mul(Elem x, Elem y) const {
    i128 bb = (i128)x.b * y.b;
    i128 a = (i128)x.a * y.a - (i128)n_ * bb;
    i128 b = (i128)x.a * y.b + (i128)y.a * x.b + (i128)t_ * bb;
    return {to64(a), to64(b)};
}

Elem Field::conj(Elem x) const {
    if (d_ == 1) return x;
    return {to64((i128)x.a + (i128)x.b * t_), -x.b};
}

Elem Field::pow(Elem x, int k) const {
    Elem r{1, 0};
    while (k > 0) {
        if (k & 1) r = mul(r, x);
        k >>= 1;
        if (k) x = mul(x, x);
    }
    return r;
}

i64 Field::norm(Elem x) const {
    if (d_ == 1) return x.a;
    i128 v = (i128)x.a * x.a + (i128)t_ * x.a * x.b + (i128)n_ * x.b * x.b;
    return to64(v);
}

i64 Field::trace(Elem x) const {
    if (d_ == 1) return x.a;
    return to64(2 * (i128)x.a + (i128)t_ * x.b);
}

bool Field::is_unit(Elem x) const {
    i64 N = norm(x);
    return N == 1 || N == -1;
}

std::optional<Elem> Field::div_exact(Elem x, Elem y) const {
    if (is_zero(y)) throw std::domain_error("division by zero");
    if (d_ == 1) {
        if (x.a % y.a) return std::nullopt;
        return Elem{x.a / y.a, 0};
    }
    Elem q = mul(x, conj(y));
    i64 N = norm(y);
    if (q.a % N || q.b % N) return std::nullopt;
    return Elem{q.a / N, q.b / N};
}

Elem Field::inverse_unit(Elem u) const {
    i64 N = norm(u);
    if (N != 1 && N != -1) throw std::domain_error("not a unit");
    if (d_ == 1) return u;
    return scale(conj(u), N);
}

std::array<long double, 2> Field::embed(Elem x) const {
    if (d_ == 1) return {(long double)x.a, 0};
    return {x.a + x.b * omega_emb_[0], x.a + x.b * omega_emb_[1]};
}

std::array<double, 2> Field::embed_d(Elem x) const {
    auto e = embed(x);
    return {(double)e[0], (double)e[1]};
}

bool Field::totally_positive(Elem x) const {
    if (d_ == 1) return x.a > 0;
    // exact: s1 > 0 and s2 > 0 iff trace > 0 and norm > 0
    return norm(x) > 0 && trace(x) > 0;
}

// ---------------------------------------------------------------- ideals

Ideal Field::unit_ideal() const {
    Ideal I;
    I.K = this;
    return I;
}

Ideal Field::normalise(Ideal I) const {
    I.K = this;
    if (d_ == 1) {
        I.B = 0;
        I.C = 1;
        i64 g = std::gcd(I.A, I.den);
        I.A /= g;
        I.den /= g;
        return I;
    }
    i64 g = std::gcd(std::gcd(I.A, I.B), std::gcd(I.C, I.den));
    if (g > 1) {
        I.A /= g;
        I.B /= g;
        I.C /= g;
        I.den /= g;
    }
    I.B = mod_floor(I.B, I.A);
    return I;
}

Ideal Field::hnf(std::vector<std::pair<i128, i128>> vecs, i64 den) const {
    if (den <= 0) throw std::invalid_argument("nonpositive denominator");
    Ideal I;
    I.K = this;
    I.den = den;
    if (d_ == 1) {
        i128 g = 0;
        for (auto& v : vecs) g = gcd128(g, v.first);
        if (g == 0) throw std::domain_error("zero ideal");
        I.A = to64(g);
        return normalise(I);
    }
    bool have_pivot = false;
    i128 pa = 0, pb = 0, agcd = 0;
    for (auto [a, b] : vecs) {
        if (b == 0) {
            agcd = gcd128(agcd, a);
            continue;
        }
        if (!have_pivot) {
            pa = a;
            pb = b;
            have_pivot = true;
            continue;
        }
        i128 x, y;
        i128 g = ext_gcd(pb, b, x, y);
        i128 na = x * pa + y * a, nb = g;
        // the complementary combination has zero w-coordinate
        i128 ra = (b / g) * pa - (pb / g) * a;
        agcd = gcd128(agcd, ra);
        pa = na;
        pb = nb;
        if (agcd != 0) pa %= agcd;
    }
    if (!have_pivot || agcd == 0) throw std::domain_error("degenerate lattice (zero ideal)");
    if (pb < 0) {
        pb = -pb;
        pa = -pa;
    }
    I.A = to64(abs128(agcd));
    I.C = to64(pb);
    I.B = to64(((pa % agcd) + agcd) % agcd);
    return normalise(I);
}

std::array<Elem, 2> Field::basis(const Ideal& x) const {
    if (d_ == 1) return {Elem{x.A, 0}, Elem{0, 0}};
    return {Elem{x.A, 0}, Elem{x.B, x.C}};
}

Ideal Field::principal(Elem x) const { return generated({x}); }

Ideal Field::generated(const std::vector<Elem>& gens) const {
    std::vector<std::pair<i128, i128>> v;
    for (Elem g : gens) {
        v.emplace_back(g.a, g.b);
        if (d_ == 2) {
            Elem gw = mul(g, Elem{0, 1});
            v.emplace_back(gw.a, gw.b);
        }
    }
    return hnf(v, 1);
}

Ideal Field::mul(const Ideal& x, const Ideal& y) const {
    if (x.K != this || y.K != this) throw std::invalid_argument("ideals from different fields");
    if (d_ == 1) {
        Ideal I = unit_ideal();
        I.A = to64((i128)x.A * y.A);
        I.den = to64((i128)x.den * y.den);
        return normalise(I);
    }
    auto bx = basis(x), by = basis(y);
    std::vector<std::pair<i128, i128>> v;
    for (Elem e : bx)
        for (Elem f : by) {
            Elem p = mul(e, f);
            v.emplace_back(p.a, p.b);
        }
    return hnf(v, to64((i128)x.den * y.den));
}

Ideal Field::pow(const Ideal& x, int k) const {
    if (k < 0) return pow(inverse(x), -k);
    Ideal r = unit_ideal();
    for (int i = 0; i < k; ++i) r = mul(r, x);
    return r;
}

Ideal Field::gcd(const Ideal& x, const Ideal& y) const {
    if (x.K != this || y.K != this) throw std::invalid_argument("ideals from different fields");
    i64 L = std::lcm(x.den, y.den);
    i64 sx = L / x.den, sy = L / y.den;
    std::vector<std::pair<i128, i128>> v;
    for (Elem e : basis(x)) v.emplace_back((i128)e.a * sx, (i128)e.b * sx);
    for (Elem e : basis(y)) v.emplace_back((i128)e.a * sy, (i128)e.b * sy);
    return hnf(v, L);
}

Ideal Field::lcm(const Ideal& x, const Ideal& y) const { return quotient(mul(x, y), gcd(x, y)); }

bool Field::divides(const Ideal& x, const Ideal& y) const { return gcd(x, y) == x; }

bool Field::contains(const Ideal& x, Elem e) const {
    i128 ea = (i128)e.a * x.den, eb = (i128)e.b * x.den;
    if (d_ == 1) return eb == 0 && ea % x.A == 0;
    if (eb % x.C != 0) return false;
    i128 v = eb / x.C;
    return (ea - v * x.B) % x.A == 0;
}

Ideal Field::conj(const Ideal& x) const {
    if (d_ == 1) return x;
    auto b = basis(x);
    Elem c = conj(b[1]);
    return hnf({{b[0].a, 0}, {c.a, c.b}}, x.den);
}

Ideal Field::inverse(const Ideal& x) const {
    // x = L/den, x^{-1} = den * conj(L) / N(L)
    Ideal L = x;
    L.den = 1;
    i64 N = norm(L);
    if (d_ == 1) {
        Ideal I = unit_ideal();
        I.A = x.den;
        I.den = x.A;
        return normalise(I);
    }
    auto b = basis(conj(L));
    std::vector<std::pair<i128, i128>> v;
    for (Elem e : b) v.emplace_back((i128)e.a * x.den, (i128)e.b * x.den);
    return hnf(v, N);
}

Ideal Field::quotient(const Ideal& x, const Ideal& y) const { return mul(x, inverse(y)); }

i64 Field::norm(const Ideal& x) const {
    if (x.den != 1) throw std::domain_error("norm of a fractional ideal requested as an integer");
    return d_ == 1 ? x.A : to64((i128)x.A * x.C);
}

std::pair<i64, i64> Field::norm_rational(const Ideal& x) const {
    i128 num = d_ == 1 ? (i128)x.A : (i128)x.A * x.C;
    i128 den = d_ == 1 ? (i128)x.den : (i128)x.den * x.den;
    i128 g = gcd128(num, den);
    return {to64(num / g), to64(den / g)};
}

// ---------------------------------------------------------------- primes

std::vector<PrimeIdeal> Field::primes_above(i64 p) const {
    std::vector<PrimeIdeal> out;
    if (d_ == 1) {
        PrimeIdeal P;
        P.p = p;
        P.ideal = principal_int(p);
        P.second = Elem{p, 0};
        out.push_back(P);
        return out;
    }
    std::vector<i64> roots;
    if (p == 2) {
        for (i64 x = 0; x < 2; ++x)
            if (mod_floor(x * x - t_ * x + n_, 2) == 0) roots.push_back(x);
    } else {
        i64 Delta = mod_floor(t_ * t_ - 4 * n_, p);
        i64 inv2 = (p + 1) / 2;
        if (Delta == 0) {
            roots.push_back(mulmod(mod_floor(t_, p), inv2, p));
        } else if (powmod(Delta, (p - 1) / 2, p) == 1) {
            i64 s = sqrt_mod(Delta, p);
            roots.push_back(mulmod(mod_floor(t_ + s, p), inv2, p));
            roots.push_back(mulmod(mod_floor(t_ - s, p), inv2, p));
        }
    }
    bool ramified = (p == 2) ? (roots.size() == 1) : (mod_floor(t_ * t_ - 4 * n_, p) == 0);
    if (roots.empty()) {
        PrimeIdeal P;
        P.p = p;
        P.f = 2;
        P.ideal = principal_int(p);
        P.second = Elem{p, 0};
        out.push_back(P);
        return out;
    }
    for (i64 r : roots) {
        PrimeIdeal P;
        P.p = p;
        P.f = 1;
        P.e = ramified ? 2 : 1;
        Elem g{-r, 1};
        // v_P(w - r) = 1 unless p^2 | N(w - r); shift by p in that case
        if (!ramified && mod_floor(norm(g), p * p) == 0) g.a += p;
        P.second = g;
        P.ideal = generated({Elem{p, 0}, g});
        out.push_back(P);
    }
    std::sort(out.begin(), out.end(), [](const PrimeIdeal& x, const PrimeIdeal& y) { return ideal_less(x.ideal, y.ideal); });
    return out;
}

int Field::valuation(const PrimeIdeal& P, const Ideal& x) const {
    // fractional part: v(L/den) = v(L) - e * v_p(den)
    int v = 0;
    i64 den = x.den;
    while (den % P.p == 0) {
        den /= P.p;
        v -= P.e;
    }
    Ideal L = x;
    L.den = 1;
    if (d_ == 1) {
        while (L.A % P.p == 0) {
            L.A /= P.p;
            ++v;
        }
        return v;
    }
    if (P.f == 2) {
        while (L.A % P.p == 0 && L.B % P.p == 0 && L.C % P.p == 0) {
            L.A /= P.p;
            L.B /= P.p;
            L.C /= P.p;
            ++v;
        }
        return v;
    }
    Ideal Pc = conj(P.ideal);
    for (;;) {
        Ideal M = mul(L, Pc);
        if (M.A % P.p || M.B % P.p || M.C % P.p) break;
        M.A /= P.p;
        M.B /= P.p;
        M.C /= P.p;
        L = normalise(M);
        ++v;
    }
    return v;
}

Factorization Field::factor(const Ideal& x, i64 bound) const {
    if (!x.integral()) throw std::domain_error("factor: ideal is not integral");
    i64 N = norm(x);
    if (N > bound) throw std::domain_error("factor: norm exceeds bound");
    Factorization out;
    for (auto [p, e] : factor_integer(N)) {
        (void)e;
        for (const PrimeIdeal& P : primes_above(p)) {
            int v = valuation(P, x);
            if (v > 0) out.emplace_back(P, v);
        }
    }
    return out;
}

ArithValues Field::arith(const Ideal& x) const {
    ArithValues r{1, 1, 1};
    for (auto& [P, k] : factor(x)) {
        i64 N = P.norm();
        i64 pk = 1;
        for (int i = 0; i < k - 1; ++i) pk *= N;
        r.phi *= pk * (N - 1);
        r.tau *= k + 1;
        r.mu = (k > 1) ? 0 : -r.mu;
    }
    return r;
}

Ideal Field::from_factorization(const Factorization& f) const {
    Ideal r = unit_ideal();
    for (auto& [P, k] : f) r = mul(r, pow(P.ideal, k));
    return r;
}

std::vector<Ideal> Field::ideals_of_norm(i64 n) const {
    if (n <= 0) return {};
    std::vector<Ideal> acc{unit_ideal()};
    for (auto [p, e] : factor_integer(n)) {
        std::vector<Ideal> local;
        auto primes = primes_above(p);
        if (d_ == 1) {
            local.push_back(pow(primes[0].ideal, e));
        } else if (primes.size() == 2) {
            for (int a = 0; a <= e; ++a) local.push_back(mul(pow(primes[0].ideal, a), pow(primes[1].ideal, e - a)));
        } else if (primes[0].f == 2) {
            if (e % 2) return {};
            local.push_back(pow(primes[0].ideal, e / 2));
        } else {
            local.push_back(pow(primes[0].ideal, e));
        }
        std::vector<Ideal> next;
        for (auto& I : acc)
            for (auto& J : local) next.push_back(mul(I, J));
        acc.swap(next);
    }
    std::sort(acc.begin(), acc.end(), ideal_less);
    return acc;
}

std::vector<Ideal> Field::divisors(const Ideal& x) const {
    std::vector<Ideal> acc{unit_ideal()};
    for (auto& [P, k] : factor(x)) {
        std::vector<Ideal> next;
        for (auto& I : acc) {
            Ideal cur = I;
            for (int i = 0; i <= k; ++i) {
                next.push_back(cur);
                cur = mul(cur, P.ideal);
            }
        }
        acc.swap(next);
    }
    std::sort(acc.begin(), acc.end(), [&](const Ideal& a, const Ideal& b) {
        i64 na = norm(a), nb = norm(b);
        if (na != nb) return na < nb;
        return ideal_less(a, b);
    });
    return acc;
}

// ---------------------------------------------------------------- generators

std::optional<Elem> Field::find_generator_raw(const Ideal& x) const {
    if (!x.integral()) throw std::domain_error("generator: fractional ideal");
    if (d_ == 1) return Elem{x.A, 0};
    i64 N = norm(x);
    long double e1 = embed(eps_)[0];
    long double R = std::sqrt((long double)N * e1) * (1 + 1e-12L) + 1e-9L;
    long double w1 = omega_emb_[0], w2 = omega_emb_[1];
    long double gap = w1 - w2;
    i64 vmax = (i64)std::floor(2 * R / (gap * x.C)) + 1;
    for (i64 v = -vmax; v <= vmax; ++v) {
        i64 b = v * x.C;
        long double lo = std::max(-R - b * w1, -R - b * w2);
        long double hi = std::min(R - b * w1, R - b * w2);
        if (lo > hi) continue;
        // a = u*A + v*B
        i64 ulo = (i64)std::floor((lo - (long double)v * x.B) / x.A) - 1;
        i64 uhi = (i64)std::ceil((hi - (long double)v * x.B) / x.A) + 1;
        for (i64 u = ulo; u <= uhi; ++u) {
            Elem e{to64((i128)u * x.A + (i128)v * x.B), b};
            if (is_zero(e)) continue;
            i64 n = norm(e);
            if (n == N || n == -N) return e;
        }
    }
    return std::nullopt;
}

Elem Field::canonical_associate(Elem x) const {
    if (is_zero(x)) throw std::domain_error("canonical_associate of zero");
    if (d_ == 1) return Elem{x.a < 0 ? -x.a : x.a, 0};
    if (norm(x) < 0 && eps_norm_ == -1) x = mul(x, eps_);
    if (embed(x)[0] < 0) x = neg(x);
    bool tp = totally_positive(x);
    Elem u = tp ? eps_plus_ : eps_;
    Elem uinv = inverse_unit(u);
    long double L = std::log(embed(u)[0]);
    auto cost = [&](Elem y) -> long double {
        auto e = embed(y);
        return std::fabs(e[0]) + std::fabs(e[1]);
    };
    // balance |s1| and |s2|
    auto e = embed(x);
    long double k = (std::log(std::fabs(e[1])) - std::log(std::fabs(e[0]))) / (2 * L);
    int k0 = (int)std::llround(k);
    auto shift = [&](Elem y, int m) {
        if (m >= 0) return mul(y, pow(u, m));
        return mul(y, pow(uinv, -m));
    };
    Elem best = shift(x, k0 - 1);
    for (int m = k0; m <= k0 + 1; ++m) {
        Elem c = shift(x, m);
        if (tp) {
            i64 tc = trace(c), tb = trace(best);
            if (tc < tb || (tc == tb && c < best)) best = c;
        } else {
            long double cc = cost(c), cb = cost(best);
            if (cc < cb * (1 - 1e-15L) || (std::fabs(cc - cb) <= cb * 1e-15L && c < best)) best = c;
        }
    }
    return best;
}

std::optional<Elem> Field::generator(const Ideal& x) const {
    auto g = find_generator_raw(x);
    if (!g) return std::nullopt;
    return canonical_associate(*g);
}

// ---------------------------------------------------------------- enumeration

std::vector<Elem> Field::enumerate_in_box(const Ideal& y, const Box& box, bool tp_only) const {
    if (!y.integral()) throw std::domain_error("enumerate_in_box: ideal must be integral");
    if ((int)box.intervals.size() != d_) throw std::invalid_argument("box dimension mismatch");
    for (auto [lo, hi] : box.intervals)
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("unbounded box");
    std::vector<Elem> out;
    for (auto [lo, hi] : box.intervals)
        if (lo > hi) return out;
    auto slack = [](long double v) { return 1e-12L * (1 + std::fabs(v)); };
    auto inside = [&](Elem e) {
        auto s = embed(e);
        for (int j = 0; j < d_; ++j) {
            long double lo = box.intervals[j].first, hi = box.intervals[j].second;
            long double tol = 8 * std::numeric_limits<long double>::epsilon() * (1 + std::fabs(s[j]));
            if (s[j] < lo - tol || s[j] > hi + tol) return false;
        }
        return true;
    };
    if (d_ == 1) {
        long double lo = box.intervals[0].first, hi = box.intervals[0].second;
        i64 kl = (i64)std::floor((lo - slack(lo)) / y.A), kh = (i64)std::ceil((hi + slack(hi)) / y.A);
        for (i64 k = kl; k <= kh; ++k) {
            Elem e{to64((i128)k * y.A), 0};
            if (inside(e) && (!tp_only || e.a > 0)) out.push_back(e);
        }
        return out;
    }
    long double w1 = omega_emb_[0], w2 = omega_emb_[1], gap = w1 - w2;
    long double lo1 = box.intervals[0].first, hi1 = box.intervals[0].second;
    long double lo2 = box.intervals[1].first, hi2 = box.intervals[1].second;
    long double bmin = (lo1 - hi2) / gap, bmax = (hi1 - lo2) / gap;
    i64 vlo = (i64)std::floor((bmin - slack(bmin)) / y.C), vhi = (i64)std::ceil((bmax + slack(bmax)) / y.C);
    for (i64 v = vlo; v <= vhi; ++v) {
        i64 b = to64((i128)v * y.C);
        long double alo = std::max(lo1 - b * w1, lo2 - b * w2);
        long double ahi = std::min(hi1 - b * w1, hi2 - b * w2);
        if (alo > ahi + slack(ahi)) continue;
        i64 ulo = (i64)std::floor((alo - slack(alo) - (long double)v * y.B) / y.A);
        i64 uhi = (i64)std::ceil((ahi + slack(ahi) - (long double)v * y.B) / y.A);
        for (i64 u = ulo; u <= uhi; ++u) {
            Elem e{to64((i128)u * y.A + (i128)v * y.B), b};
            if (!inside(e)) continue;
            if (tp_only && !totally_positive(e)) continue;
            out.push_back(e);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- misc

std::string Field::to_string(Elem x) const {
    if (d_ == 1 || x.b == 0) return std::to_string(x.a);
    std::ostringstream os;
    if (x.a != 0) os << x.a << (x.b > 0 ? "+" : "");
    if (x.b == -1) os << "-";
    else if (x.b != 1) os << x.b;
    os << "w";
    return os.str();
}

std::string Field::to_string(const Ideal& x) const {
    std::ostringstream os;
    if (d_ == 1) os << "(" << x.A << ")";
    else os << "[" << x.A << "," << x.B << "," << x.C << "]";
    if (x.den != 1) os << "/" << x.den;
    return os.str();
}

std::complex<double> psi(const Field& K, Elem num, i64 den) {
    if (den == 0) throw std::domain_error("psi: zero denominator");
    i64 tr = K.trace(num);
    if (den < 0) {
        den = -den;
        tr = -tr;
    }
    i64 r = mod_floor(tr, den);
    double ang = 2 * kPi * (double)r / (double)den;
    return {std::cos(ang), std::sin(ang)};
}

}  // namespace ntk

namespace ntk {

std::vector<i64> verify_field_table() {
    std::vector<i64> bad;
    FieldOptions opt;
    opt.allow_class_number = true;
    for (const auto& row : field_table()) {
        try {
            auto K = Field::make(row.D, opt);
            Elem e = K->fundamental_unit();
            if (K->disc() != row.disc || e.a != row.eps_a || e.b != row.eps_b || K->class_number() != row.h)
                bad.push_back(row.D);
        } catch (const std::exception&) {
            bad.push_back(row.D);
        }
    }
    return bad;
}

}  // namespace ntk
