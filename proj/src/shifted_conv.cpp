#include "ntk/shifted_conv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ntk {

Profile Profile::bump(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("Profile::bump: empty support");
    Profile p;
    p.lo = lo;
    p.hi = hi;
    p.f = [lo, hi](double x) {
        if (!(x > lo && x < hi)) return 0.0;
        double u = (2 * x - lo - hi) / (hi - lo);
        return std::exp(1 - 1 / (1 - u * u));
    };
    return p;
}

cplx Weight::operator()(const std::vector<double>& x) const {
    for (size_t j = 0; j < support.size(); ++j)
        if (x[j] < support[j].first || x[j] > support[j].second) return 0.0;
    return f(x);
}

Weight Weight::product(const Profile& V, std::vector<double> scale) {
    Weight w;
    for (double s : scale) w.support.push_back({V.lo * s, V.hi * s});
    w.f = [V, scale](const std::vector<double>& x) {
        double v = 1;
        for (size_t j = 0; j < scale.size(); ++j) v *= V.f(x[j] / scale[j]);
        return cplx(v);
    };
    return w;
}

namespace {

std::vector<double> embed_vec(const Field& K, Elem x) {
    auto e = K.embed(x);
    std::vector<double> v(K.degree());
    for (int j = 0; j < K.degree(); ++j) v[j] = (double)e[j];
    return v;
}

cplx lambda_at(const EigenvalueSystem& sys, Elem r, const Ideal& y) {
    const Field& K = sys.field();
    return sys.lambda(K.quotient(K.principal(r), y));
}

void check_weight(const Weight& W, int d, const char* what) {
    if ((int)W.support.size() != d || !W.f) throw std::invalid_argument(std::string(what) + ": weight dimension mismatch");
    for (auto [lo, hi] : W.support)
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument(std::string(what) + ": unbounded support");
}

}  // namespace

ShiftedResult shifted_sum(const ShiftedQuery& Q) {
    if (!Q.sys1 || !Q.sys2) throw std::invalid_argument("shifted_sum: missing eigenvalue system");
    const Field& K = Q.sys1->field();
    int d = K.degree();
    check_weight(Q.W1, d, "shifted_sum");
    check_weight(Q.W2, d, "shifted_sum");
    if ((int)Q.Y.size() != d) throw std::invalid_argument("shifted_sum: scale dimension mismatch");
    if (!K.totally_positive(Q.l1) || !K.totally_positive(Q.l2))
        throw std::invalid_argument("shifted_sum: shifts must be totally positive");
    if (K.is_zero(Q.q)) throw std::invalid_argument("shifted_sum: q = 0");
    if (!Q.y.integral()) throw std::invalid_argument("shifted_sum: y must be integral");
    ShiftedResult res;
    if (!K.contains(Q.y, Q.q)) return res;

    auto s1 = embed_vec(K, Q.l1);
    Box box;
    for (int j = 0; j < d; ++j)
        box.intervals.push_back({Q.W1.support[j].first * Q.Y[j] / s1[j], Q.W1.support[j].second * Q.Y[j] / s1[j]});
    double Ny = (double)K.norm(Q.y);
    CompensatedSum<cplx> acc;
    for (Elem r1 : K.enumerate_in_box(Q.y, box, false)) {
        if (K.is_zero(r1)) continue;
        ++res.candidates;
        Elem x1 = K.mul(Q.l1, r1);
        auto r2 = K.div_exact(K.sub(x1, Q.q), Q.l2);
        if (!r2 || K.is_zero(*r2) || !K.contains(Q.y, *r2)) continue;
        ++res.solutions;
        auto z1 = embed_vec(K, x1), z2 = embed_vec(K, K.mul(Q.l2, *r2));
        for (int j = 0; j < d; ++j) {
            z1[j] /= Q.Y[j];
            z2[j] /= Q.Y[j];
        }
        cplx w = Q.W1(z1) * std::conj(Q.W2(z2));
        if (w == 0.0) continue;
        double n = std::fabs((double)K.norm(r1) * (double)K.norm(*r2)) / (Ny * Ny);
        acc.add(lambda_at(*Q.sys1, r1, Q.y) * std::conj(lambda_at(*Q.sys2, *r2, Q.y)) * w / std::sqrt(n));
    }
    res.value = acc.value();
    return res;
}

namespace {

// Dyadic sums of g(k) = A^-sigma (2A)^{1+th} (1+log+ 2A)^p [sqrt(1 + log+(2A)/L)],
// A = a0 2^k, split at 2A <= height. Returns {inside, outside}; outside is
// inf when the series does not converge.
std::pair<double, double> dyadic_envelope(double a0, double sigma, double th, int p, double logeps, double height) {
    const double inf = std::numeric_limits<double>::infinity();
    auto logg = [&](long k) {
        double la = std::log(a0) + k * std::log(2.0);
        double l2a = la + std::log(2.0);
        double lp = std::max(0.0, l2a);
        double v = -sigma * la + (1 + th) * l2a + p * std::log1p(lp);
        if (logeps > 0) v += 0.5 * std::log1p(lp / logeps);
        return v;
    };
    double inside = 0, outside = 0;
    for (long k = 0; k < 2000000; ++k) {
        double g = std::exp(logg(k));
        bool in = a0 * std::ldexp(2.0, (int)std::min<long>(k, 4000)) <= height;
        (in ? inside : outside) += g;
        if (in) continue;
        double twoA = std::log(a0) + (k + 1) * std::log(2.0);
        if (twoA < 0) continue;  // ratios are monotone only once log+ is active
        double r = std::exp(logg(k + 1) - logg(k));
        if (r >= 1) continue;
        double rest = g * r / (1 - r);
        if (rest <= 1e-6 * outside || (rest < 1e-300 && g < 1e-300)) return {inside, outside + rest};
    }
    return {inside, inf};
}

}  // namespace

DirichletResult dirichlet_D(const DirichletQuery& Q, const std::vector<cplx>& s, int beta, double height,
                            double tol) {
    if (!Q.sys1 || !Q.sys2) throw std::invalid_argument("dirichlet_D: missing eigenvalue system");
    const Field& K = Q.sys1->field();
    int d = K.degree();
    if ((int)s.size() != d) throw std::invalid_argument("dirichlet_D: s has the wrong dimension");
    for (auto sj : s)
        if (!(sj.real() > 1)) throw std::domain_error("dirichlet_D: requires Re s_j > 1");
    if (beta < 2 || beta % 2) throw std::invalid_argument("dirichlet_D: beta must be a positive even integer");
    if (!K.totally_positive(Q.l1) || !K.totally_positive(Q.l2) || !K.totally_positive(Q.q))
        throw std::invalid_argument("dirichlet_D: l1, l2 and q must be totally positive");
    if (!Q.y.integral()) throw std::invalid_argument("dirichlet_D: y must be integral");
    if (!(height > 0)) throw std::invalid_argument("dirichlet_D: height must be positive");

    DirichletResult res;
    res.height = height;
    res.beta_warning = beta <= 66 * d;
    auto sl1 = K.embed(Q.l1), sq = K.embed(Q.q);
    Box box;
    for (int j = 0; j < d; ++j) box.intervals.push_back({(double)(sq[j] / sl1[j]), (double)(height / sl1[j])});
    double best = -1;
    CompensatedSum<cplx> acc;
    for (Elem r1 : K.enumerate_in_box(Q.y, box, true)) {
        Elem x1 = K.mul(Q.l1, r1);
        Elem x2 = K.sub(x1, Q.q);
        auto u = K.embed(x1), v = K.embed(x2);
        bool keep = true;
        for (int j = 0; j < d; ++j) keep = keep && u[j] <= height && v[j] > 0;
        if (!keep) continue;
        auto r2 = K.div_exact(x2, Q.l2);
        if (!r2 || !K.contains(Q.y, *r2)) continue;
        cplx E = 0;
        for (int j = 0; j < d; ++j) {
            E += 0.5 * (beta - 1) * (double)(std::log(u[j]) + std::log(v[j]));
            E -= (s[j] + (double)(beta - 1)) * (double)std::log(u[j] + v[j]);
        }
        cplx t = lambda_at(*Q.sys1, r1, Q.y) * std::conj(lambda_at(*Q.sys2, *r2, Q.y)) * std::exp(E);
        acc.add(t);
        ++res.terms;
        if (std::abs(t) > best) {
            best = std::abs(t);
            res.leading_term = t;
        }
    }
    res.value = acc.value();

    // Tail: dyadic boxes A_j <= u_j < 2 A_j above q_j meeting max_j u_j > height.
    // AM-GM gives (u v)^{(beta-1)/2} <= ((u+v)/2)^{beta-1}, and u + v >= u >= A, so
    // per box |term| <= prod 2^{1-beta} A_j^{-Re s_j} |lambda1 lambda2|; Cauchy-Schwarz with
    // sum_{N m <= X} tau(m)^2 <= X (1 + log X)^{4d-1} bounds the lambda sum.
    double th1 = Q.sys1->theta(), th2 = Q.sys2->theta();
    double Ny = (double)K.norm(Q.y);
    double c1 = 1 / ((double)K.norm(Q.l1) * Ny), c2 = 1 / ((double)K.norm(Q.l2) * Ny);
    double pref = std::sqrt(std::pow(c1, 1 + 2 * th1) * std::pow(c2, 1 + 2 * th2));
    double logeps = d == 2 ? (double)std::log(K.embed(K.positive_unit())[0]) : 0.0;
    std::vector<std::pair<double, double>> parts;
    for (int j = 0; j < d; ++j)
        parts.push_back(dyadic_envelope((double)sq[j], s[j].real(), th1 + th2, 4 * d - 1, logeps, height));
    // prod(in + out) - prod(in), expanded to avoid cancellation
    double tail = 0;
    for (int j = 0; j < d; ++j) {
        double t = parts[j].second;
        for (int i = 0; i < d; ++i)
            if (i < j) t *= parts[i].first;
            else if (i > j) t *= parts[i].first + parts[i].second;
        tail += t;
    }
    // 2^{(1-beta) d} underflows for large beta; an underflowed bound is reported as DBL_MIN, not 0
    res.tail_bound = std::ldexp(pref * tail, (1 - beta) * d);
    if (std::isnan(res.tail_bound)) res.tail_bound = std::numeric_limits<double>::infinity();
    if (tail > 0 && res.tail_bound == 0) res.tail_bound = std::numeric_limits<double>::min();
    if (res.tail_bound > tol) throw std::domain_error("dirichlet_D: tail bound above tolerance");
    return res;
}

FdReduction fd_reduce(const Field& K, const std::vector<double>& y) {
    int d = K.degree();
    if ((int)y.size() != d) throw std::invalid_argument("fd_reduce: dimension mismatch");
    for (double v : y)
        if (!(v > 0) || !std::isfinite(v)) throw std::domain_error("fd_reduce: coordinates must be positive");
    FdReduction r;
    r.point = y;
    if (d == 1) return r;
    double L = (double)std::log(K.embed(K.positive_unit())[0]);
    double c = 0.5 * std::log(y[0] / y[1]) / L;
    int k = -(int)std::floor(c);
    // half-open [0, 1): fix rounding at the upper end
    if (c + k >= 1) --k;
    if (c + k < 0) ++k;
    if (std::abs(k) > 40) throw std::domain_error("fd_reduce: point too far from the domain");
    r.power = k;
    r.coordinate = c + k;
    Elem e = K.positive_unit();
    r.unit = k >= 0 ? K.pow(e, k) : K.pow(K.inverse_unit(e), -k);
    double s = std::exp(k * L);
    r.point = {y[0] * s, y[1] / s};
    return r;
}

Elem fd_reduce_element(const Field& K, Elem x) {
    if (!K.totally_positive(x)) throw std::domain_error("fd_reduce_element: element must be totally positive");
    auto red = fd_reduce(K, embed_vec(K, x));
    return K.mul(red.unit, x);
}

std::vector<AmplifierPrime> amplifier_primes(const Field& K, double L, const Ideal& q) {
    std::vector<AmplifierPrime> out;
    i64 top = (i64)std::floor(2 * L);
    for (i64 p = 2; p <= top; ++p) {
        auto f = factor_integer(p);
        if (f.size() != 1 || f[0].second != 1) continue;
        for (const auto& P : K.primes_above(p)) {
            i64 n = P.norm();
            if (n < L || n > 2 * L || K.divides(P.ideal, q)) continue;
            auto g = K.generator(P.ideal);
            if (!g || !K.totally_positive(*g)) continue;
            out.push_back({fd_reduce_element(K, *g), P.ideal, n});
        }
    }
    std::sort(out.begin(), out.end(), [](const AmplifierPrime& a, const AmplifierPrime& b) {
        return a.norm != b.norm ? a.norm < b.norm : ideal_less(a.ideal, b.ideal);
    });
    return out;
}

AmplifiedReport amplified_moment(const Field& K, const Ideal& q, double L, const EigenvalueSystem& sys,
                                 const HeckeCharacter& chi, const Profile& V, double Y, bool with_shifted) {
    if (K.class_number() != 1) throw std::invalid_argument("amplified_moment: requires class number one");
    if (!q.integral()) throw std::invalid_argument("amplified_moment: q must be integral");
    if (!(Y > 0)) throw std::invalid_argument("amplified_moment: Y must be positive");
    int d = K.degree();
    AmplifiedReport rep;
    rep.primes = amplifier_primes(K, L, q);
    if (rep.primes.empty()) throw std::invalid_argument("amplified_moment: no amplifier primes in [L, 2L]");

    double Yd = std::pow(Y, 1.0 / d);
    Box box;
    for (int j = 0; j < d; ++j) box.intervals.push_back({V.lo * Yd, V.hi * Yd});
    Ideal o = K.unit_ideal();
    std::vector<Elem> rs;
    std::vector<cplx> a;
    for (Elem r : K.enumerate_in_box(o, box, true)) {
        double w = 1;
        for (double s : embed_vec(K, r)) w *= V.f(s / Yd);
        if (w == 0) continue;
        rs.push_back(r);
        a.push_back(sys.lambda(K.principal(r)) * w / std::sqrt((double)K.norm(r)));
    }
    rep.support = (i64)rs.size();

    auto chars = characters_mod(K, q);
    rep.phi = (i64)chars.size();
    const ResidueRing& R = chars.front().group().ring();
    std::vector<cplx> camp;  // conj chi(l)
    for (auto& l : rep.primes) camp.push_back(std::conj(chi.at_element(l.generator)));

    CompensatedSum<double> A;
    for (const auto& xi : chars) {
        CompensatedSum<cplx> Lx, amp;
        for (size_t i = 0; i < rs.size(); ++i) Lx.add(a[i] * xi(rs[i]));
        for (size_t i = 0; i < rep.primes.size(); ++i) amp.add(xi(rep.primes[i].generator) * camp[i]);
        A.add(std::norm(Lx.value() * amp.value()));
    }
    rep.side_A = A.value();

    struct Item {
        Elem prod;
        cplx w;
    };
    std::map<i64, std::vector<Item>> classes;
    for (size_t l = 0; l < rep.primes.size(); ++l)
        for (size_t i = 0; i < rs.size(); ++i) {
            Elem x = K.mul(rep.primes[l].generator, rs[i]);
            classes[R.index(x)].push_back({x, camp[l] * a[i]});
        }
    CompensatedSum<double> B, E;
    CompensatedSum<cplx> diag, off;
    for (auto& [idx, items] : classes) {
        CompensatedSum<cplx> c;
        for (auto& it : items) c.add(it.w);
        double n2 = std::norm(c.value());
        E.add(n2);
        if (R.is_unit(idx)) B.add(n2);
        for (auto& x : items)
            for (auto& z : items) {
                cplx t = x.w * std::conj(z.w);
                if (x.prod == z.prod) {
                    diag.add(t);
                    ++rep.diagonal_pairs;
                } else {
                    off.add(t);
                }
            }
    }
    double phi = (double)rep.phi;
    rep.side_B = phi * B.value();
    rep.extended = phi * E.value();
    rep.diagonal = phi * diag.value();
    rep.offdiagonal = phi * off.value();
    double big = std::max(rep.side_A, rep.side_B);
    rep.relative_gap = big > 0 ? std::abs(rep.side_A - rep.side_B) / big : 0.0;

    if (with_shifted) {
        CompensatedSum<cplx> sh;
        std::vector<double> Yv(d, Yd);
        for (size_t i = 0; i < rep.primes.size(); ++i)
            for (size_t k = 0; k < rep.primes.size(); ++k) {
                Elem l1 = rep.primes[i].generator, l2 = rep.primes[k].generator;
                auto e1 = embed_vec(K, l1), e2 = embed_vec(K, l2);
                ShiftedQuery Q;
                Q.sys1 = Q.sys2 = &sys;
                Q.l1 = l1;
                Q.l2 = l2;
                Q.y = o;
                Q.Y = Yv;
                Q.W1 = Weight::product(V, e1);
                Q.W2 = Weight::product(V, e2);
                Box qb;
                for (int j = 0; j < d; ++j)
                    qb.intervals.push_back({Yd * (V.lo * e1[j] - V.hi * e2[j]), Yd * (V.hi * e1[j] - V.lo * e2[j])});
                cplx coeff = camp[i] * std::conj(camp[k]);
                for (Elem qq : K.enumerate_in_box(q, qb, false)) {
                    if (K.is_zero(qq)) continue;
                    ++rep.offdiagonal_shifts;
                    Q.q = qq;
                    sh.add(coeff * shifted_sum(Q).value);
                }
            }
        rep.offdiagonal_shifted = phi * sh.value();
    }
    return rep;
}

cplx afe_sum(const EigenvalueSystem& sys, const HeckeCharacter& chi, double Y, const Profile& V) {
    const Field& K = sys.field();
    if (!(Y > 0)) throw std::invalid_argument("afe_sum: Y must be positive");
    i64 lo = std::max<i64>(1, (i64)std::ceil(V.lo * Y)), hi = (i64)std::floor(V.hi * Y);
    CompensatedSum<cplx> acc;
    for (i64 n = lo; n <= hi; ++n) {
        double v = V.f(n / Y);
        if (v == 0) continue;
        for (const Ideal& m : K.ideals_of_norm(n)) {
            cplx c = chi.eval_on_ideal(m);
            if (c == 0.0) continue;
            acc.add(sys.lambda(m) * c * v / std::sqrt((double)n));
        }
    }
    return acc.value();
}

}  // namespace ntk
