#include "ntk/characters.hpp"

#include "ntk/numeric.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ntk {

namespace {

// Smith normal form of a square relation matrix; returns the diagonal and the
// accumulated column transform V (A * V has the diagonal after row moves).
void smith(std::vector<std::vector<i64>> A, std::vector<i64>& diag, std::vector<std::vector<i64>>& V) {
    size_t n = A.size();
    V.assign(n, std::vector<i64>(n, 0));
    for (size_t i = 0; i < n; ++i) V[i][i] = 1;
    auto col_sub = [&](size_t dst, size_t src, i64 q) {
        for (size_t i = 0; i < n; ++i) {
            A[i][dst] -= q * A[i][src];
            V[i][dst] -= q * V[i][src];
        }
    };
    auto col_swap = [&](size_t a, size_t b) {
        for (size_t i = 0; i < n; ++i) {
            std::swap(A[i][a], A[i][b]);
            std::swap(V[i][a], V[i][b]);
        }
    };
    diag.assign(n, 0);
    for (size_t t = 0; t < n; ++t) {
        for (;;) {
            size_t bi = n, bj = n;
            i64 best = 0;
            for (size_t i = t; i < n; ++i)
                for (size_t j = t; j < n; ++j)
                    if (A[i][j] != 0 && (best == 0 || std::llabs(A[i][j]) < best)) {
                        best = std::llabs(A[i][j]);
                        bi = i;
                        bj = j;
                    }
            if (best == 0) throw std::logic_error("relation matrix is singular");
            std::swap(A[t], A[bi]);
            col_swap(t, bj);
            bool clean = true;
            for (size_t i = t + 1; i < n; ++i) {
                i64 q = A[i][t] / A[t][t];
                for (size_t j = t; j < n; ++j) A[i][j] -= q * A[t][j];
                if (A[i][t] != 0) clean = false;
            }
            for (size_t j = t + 1; j < n; ++j) {
                col_sub(j, t, A[t][j] / A[t][t]);
                if (A[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            bool divides = true;
            for (size_t i = t + 1; i < n && divides; ++i)
                for (size_t j = t + 1; j < n; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        for (size_t k = t; k < n; ++k) A[t][k] += A[i][k];
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (A[t][t] < 0) {
            for (size_t i = 0; i < n; ++i) {
                A[i][t] = -A[i][t];
                V[i][t] = -V[i][t];
            }
        }
        diag[t] = A[t][t];
    }
}

}  // namespace

UnitGroup::UnitGroup(const Field& K, const Ideal& q, i64 bound) : ring_(K, q, bound) {
    const i64 n = ring_.size();
    pos_.assign(n, -1);
    for (size_t j = 0; j < ring_.units().size(); ++j) pos_[ring_.units()[j]] = (i64)j;

    // Polycyclic presentation: greedy generators, each element written as
    // g_1^{e_1} ... g_r^{e_r} with 0 <= e_i < relative order.
    std::vector<i64> in_h(n, -1);  // residue -> index into elems
    std::vector<i64> elems{ring_.one()};
    std::vector<std::vector<i64>> coords{{}};
    in_h[ring_.one()] = 0;
    std::vector<std::vector<i64>> relations;  // o_i e_i - (coords of g_i^{o_i})
    for (i64 u : ring_.units()) {
        if (in_h[u] >= 0) continue;
        i64 p = u, o = 1;
        while (in_h[p] < 0) {
            p = ring_.mul(p, u);
            ++o;
        }
        std::vector<i64> rel = coords[in_h[p]];
        for (auto& x : rel) x = -x;
        rel.push_back(o);
        relations.push_back(rel);
        size_t old = elems.size();
        for (size_t i = 0; i < old; ++i) coords[i].push_back(0);
        i64 ue = ring_.one();
        for (i64 e = 1; e < o; ++e) {
            ue = ring_.mul(ue, u);
            for (size_t i = 0; i < old; ++i) {
                i64 x = ring_.mul(ue, elems[i]);
                std::vector<i64> c = coords[i];
                c.back() = e;
                in_h[x] = (i64)elems.size();
                elems.push_back(x);
                coords.push_back(std::move(c));
            }
        }
    }
    size_t r = relations.size();
    std::vector<std::vector<i64>> R(r, std::vector<i64>(r, 0));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < relations[i].size(); ++j) R[i][j] = relations[i][j];
    std::vector<i64> diag;
    std::vector<std::vector<i64>> V;
    if (r > 0) smith(R, diag, V);
    std::vector<size_t> keep;
    for (size_t k = 0; k < diag.size(); ++k)
        if (diag[k] > 1) keep.push_back(k);
    for (size_t k : keep) {
        inv_.push_back(diag[k]);
        exponent_ = std::lcm(exponent_, diag[k]);
    }
    dlog_.assign(ring_.units().size(), {});
    for (size_t i = 0; i < elems.size(); ++i) {
        std::vector<i64> c;
        for (size_t k : keep) {
            i128 s = 0;
            for (size_t j = 0; j < r; ++j) s += (i128)coords[i][j] * V[j][k];
            c.push_back(mod_floor((i64)(s % diag[k]), diag[k]));
        }
        dlog_[pos_[elems[i]]] = std::move(c);
    }
}

const std::vector<i64>& UnitGroup::dlog(i64 residue) const {
    i64 p = pos_.at(residue);
    if (p < 0) return empty_[0];
    return dlog_[p];
}

i64 UnitGroup::value_exponent(const std::vector<i64>& m, i64 residue) const {
    const auto& c = dlog(residue);
    i128 s = 0;
    for (size_t k = 0; k < inv_.size(); ++k) s += (i128)c[k] * m[k] * (exponent_ / inv_[k]);
    return mod_floor((i64)(s % exponent_), exponent_);
}

FiniteCharacter::FiniteCharacter(std::shared_ptr<const UnitGroup> G, std::vector<i64> m) : G_(std::move(G)), m_(std::move(m)) {
    const auto& inv = G_->invariants();
    if (m_.size() != inv.size()) throw std::invalid_argument("character index has wrong length");
    for (size_t k = 0; k < inv.size(); ++k) m_[k] = mod_floor(m_[k], inv[k]);
}

i64 FiniteCharacter::order() const {
    i64 o = 1;
    const auto& inv = G_->invariants();
    for (size_t k = 0; k < inv.size(); ++k) o = std::lcm(o, inv[k] / std::gcd(inv[k], m_[k]));
    return o;
}

bool FiniteCharacter::is_trivial() const {
    for (i64 x : m_)
        if (x) return false;
    return true;
}

std::optional<i64> FiniteCharacter::exponent_at(Elem x) const {
    const auto& R = G_->ring();
    i64 r = R.index(x);
    if (!R.is_unit(r)) return std::nullopt;
    return G_->value_exponent(m_, r);
}

std::complex<double> FiniteCharacter::operator()(Elem x) const {
    auto e = exponent_at(x);
    if (!e) return 0.0;
    return std::polar(1.0, 2 * kPi * (double)*e / (double)G_->exponent());
}

FiniteCharacter FiniteCharacter::inverse() const {
    std::vector<i64> m = m_;
    for (auto& x : m) x = -x;
    return FiniteCharacter(G_, m);
}

FiniteCharacter FiniteCharacter::operator*(const FiniteCharacter& o) const {
    if (G_ != o.G_) throw std::invalid_argument("characters on different groups");
    std::vector<i64> m = m_;
    for (size_t k = 0; k < m.size(); ++k) m[k] += o.m_[k];
    return FiniteCharacter(G_, m);
}

FiniteCharacter FiniteCharacter::pow(i64 k) const {
    std::vector<i64> m = m_;
    for (auto& x : m) x = (i64)((i128)x * k % G_->exponent());
    return FiniteCharacter(G_, m);
}

Ideal FiniteCharacter::conductor() const {
    const auto& R = G_->ring();
    const Field& K = R.field();
    for (const Ideal& d : K.divisors(R.modulus())) {
        bool trivial = true;
        for (i64 u : R.units()) {
            Elem x = R.rep(u);
            if (!K.contains(d, K.sub(x, Elem{1, 0}))) continue;
            if (G_->value_exponent(m_, u) != 0) {
                trivial = false;
                break;
            }
        }
        if (trivial) return d;
    }
    return R.modulus();
}

std::vector<FiniteCharacter> characters_mod(const Field& K, const Ideal& q, i64 bound) {
    auto G = std::make_shared<const UnitGroup>(K, q, bound);
    const auto& inv = G->invariants();
    std::vector<FiniteCharacter> out;
    std::vector<i64> m(inv.size(), 0);
    for (;;) {
        out.emplace_back(G, m);
        int k = (int)m.size() - 1;
        while (k >= 0 && ++m[k] == inv[k]) m[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

HeckeCharacter::HeckeCharacter(const Field& K, FiniteCharacter fin, std::vector<std::complex<double>> s, std::vector<int> signs)
    : K_(&K), fin_(std::move(fin)), s_(std::move(s)), signs_(std::move(signs)) {
    if ((int)s_.size() != K.degree()) throw std::invalid_argument("exponent vector has wrong length");
    if (signs_.empty()) signs_.assign(K.degree(), 0);
    if ((int)signs_.size() != K.degree()) throw std::invalid_argument("sign vector has wrong length");
}

std::complex<double> HeckeCharacter::at_element(Elem x) const {
    std::complex<double> v = fin_(x);
    if (v == 0.0) return v;
    auto e = K_->embed(x);
    for (int j = 0; j < K_->degree(); ++j) {
        double sj = (double)e[j];
        if (signs_[j] && sj < 0) v = -v;
        v *= std::exp(s_[j] * std::log(std::fabs(sj)));
    }
    return v;
}

double HeckeCharacter::unit_residual() const {
    double r = std::abs(at_element(Elem{-1, 0}) - 1.0);
    if (K_->degree() == 2) r = std::max(r, std::abs(at_element(K_->fundamental_unit()) - 1.0));
    return r;
}

std::complex<double> HeckeCharacter::eval_on_ideal(const Ideal& a) const {
    if (!a.integral()) {
        Ideal num = K_->mul(a, K_->principal_int(a.den));
        std::complex<double> d = eval_on_ideal(K_->principal_int(a.den));
        if (d == 0.0) return 0.0;
        return eval_on_ideal(num) / d;
    }
    if (!(K_->gcd(a, fin_.modulus()) == K_->unit_ideal())) return 0.0;
    auto g = K_->generator(a);
    if (!g) throw std::domain_error("eval_on_ideal: ideal is not principal");
    return at_element(*g);
}

HeckeCharacter HeckeCharacter::pow(int k) const {
    std::vector<std::complex<double>> s = s_;
    for (auto& x : s) x *= (double)k;
    std::vector<int> sg = signs_;
    for (auto& x : sg) x = (x * k) & 1;
    return HeckeCharacter(*K_, fin_.pow(k), s, sg);
}

ExponentLattice unramified_exponent_lattice(const Field& K) {
    ExponentLattice L;
    int d = K.degree();
    L.M.assign(d, std::vector<double>(d, 1.0));
    if (d == 2) {
        auto e = K.embed(K.positive_unit());
        L.M[1] = {(double)std::log(e[0]), (double)std::log(e[1])};
        L.spacing = 2 * kPi / (double)K.regulator();
    }
    return L;
}

EisensteinCount enumerate_eisenstein_pairs(const Field& K, const Ideal& c, double X, double resolution) {
    if (X < 0) throw std::invalid_argument("X must be nonnegative");
    if (!(resolution > 0)) throw std::invalid_argument("resolution must be positive");
    EisensteinCount out;
    out.c1 = K.unit_ideal();
    for (auto& [P, k] : K.factor(c)) out.c1 = K.mul(out.c1, K.pow(P.ideal, k / 2));
    out.grid_points = (i64)std::floor(2 * X / resolution + 1e-9) + 1;
    double logeps = (double)K.regulator();
    for (const auto& chi : characters_mod(K, out.c1)) {
        auto sign_exp = chi.exponent_at(Elem{-1, 0});
        if (!sign_exp || *sign_exp != 0) continue;
        Ideal f = chi.conductor();
        if (K.degree() == 1) {
            out.branches.push_back({chi.index(), f, 0, 0.0});
            continue;
        }
        // chi(eps) exp(i delta log eps) = 1
        double frac = (double)*chi.exponent_at(K.fundamental_unit()) / (double)chi.group().exponent();
        long kmax = (long)std::floor(X * logeps / (2 * kPi) + frac) + 1;
        for (long k = -kmax; k <= kmax; ++k) {
            double delta = 2 * kPi * ((double)k - frac) / logeps;
            if (std::fabs(delta) <= X * (1 + 1e-12)) out.branches.push_back({chi.index(), f, k, delta});
        }
    }
    out.total = (i64)out.branches.size() * out.grid_points;
    return out;
}

}  // namespace ntk
