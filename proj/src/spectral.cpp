#include "ntk/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ntk {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t prime_key(std::uint64_t seed, const PrimeIdeal& P) {
    std::uint64_t h = splitmix(seed);
    for (i64 v : {P.p, P.ideal.A, P.ideal.B, P.ideal.C}) h = splitmix(h ^ (std::uint64_t)v);
    return h;
}

}  // namespace

EigenvalueSystem EigenvalueSystem::synthetic(const Field& K, std::uint64_t seed, bool exceptional, double theta) {
    EigenvalueSystem s(K, Source::synthetic);
    s.seed_ = seed;
    s.exceptional_ = exceptional;
    s.theta_ = exceptional ? theta : 0.0;
    s.conductor_ = K.unit_ideal();
    s.local_ = [seed, exceptional, theta](const PrimeIdeal& P) {
        std::mt19937_64 rng(prime_key(seed, P));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        LocalSatake l;
        if (exceptional) {
            double sign = U(rng) < 0.5 ? -1.0 : 1.0;
            l.alpha = sign * std::pow((double)P.norm(), U(rng) * theta);
        } else {
            l.alpha = std::polar(1.0, 2 * kPi * U(rng));
        }
        return l;
    };
    return s;
}

EigenvalueSystem EigenvalueSystem::eisenstein(const Field& K, const HeckeCharacter& chi) {
    for (auto e : chi.exponents())
        if (std::abs(e.real()) > 1e-12) throw std::invalid_argument("eisenstein system: character must be unitary");
    EigenvalueSystem s(K, Source::eisenstein);
    Ideal f = chi.finite().conductor();
    s.conductor_ = K.mul(f, f);
    s.local_ = [&K, chi, f](const PrimeIdeal& P) {
        LocalSatake l;
        if (K.divides(P.ideal, f)) {
            l.ramified = true;
        } else {
            l.alpha = chi.eval_on_ideal(P.ideal);
        }
        return l;
    };
    return s;
}

EigenvalueSystem EigenvalueSystem::divisor(const Field& K) {
    EigenvalueSystem s(K, Source::divisor);
    s.conductor_ = K.unit_ideal();
    s.local_ = [](const PrimeIdeal&) { return LocalSatake{}; };
    return s;
}

EigenvalueSystem EigenvalueSystem::custom(const Field& K, std::function<LocalSatake(const PrimeIdeal&)> local,
                                          Ideal conductor, double theta) {
    EigenvalueSystem s(K, Source::custom);
    s.conductor_ = conductor;
    s.theta_ = theta;
    s.local_ = std::move(local);
    return s;
}

LocalSatake EigenvalueSystem::local(const PrimeIdeal& P) const { return local_(P); }

cplx EigenvalueSystem::lambda_prime_power(const PrimeIdeal& P, int k) const {
    if (k < 0) return 0;
    if (k == 0) return 1;
    LocalSatake l = local_(P);
    if (l.ramified) return 0;
    cplx lp = l.alpha + 1.0 / l.alpha;
    cplx prev = 1, cur = lp;
    for (int j = 1; j < k; ++j) {
        cplx next = lp * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx EigenvalueSystem::lambda(const Ideal& m) const {
    if (!m.integral()) return 0;
    cplx v = 1;
    for (auto& [P, k] : K_->factor(m)) v *= lambda_prime_power(P, k);
    return v;
}

std::string EigenvalueSystem::describe() const {
    std::ostringstream os;
    switch (source_) {
        case Source::synthetic:
            os << "synthetic(seed=" << seed_ << (exceptional_ ? ", exceptional" : "") << ")";
            break;
        case Source::eisenstein: os << "eisenstein"; break;
        case Source::divisor: os << "divisor"; break;
        case Source::custom: os << "custom"; break;
    }
    return os.str();
}

namespace {

// sum_k lambda(p^{k+a}) conj(lambda(p^{k+b})) Np^{-k}, stopped on the tail bound
// (k+a+1)(k+b+1) R^{2k+a+b} Np^{-k} summed geometrically, R = max(|alpha|, 1/|alpha|).
cplx local_series(const EigenvalueSystem& sys, const PrimeIdeal& P, int a, int b) {
    LocalSatake l = sys.local(P);
    double N = (double)P.norm();
    if (l.ramified) return (a == 0 && b == 0) ? 1.0 : 0.0;
    double R = std::max(std::abs(l.alpha), 1.0 / std::abs(l.alpha));
    double r = R * R / N;
    if (r >= 1) throw std::domain_error("shifted_inner_ratio: Satake parameter too large for convergence");
    cplx lp = l.alpha + 1.0 / l.alpha;
    // running lambda(p^j)
    std::vector<cplx> lam{1.0, lp};
    auto get = [&](int j) {
        while ((int)lam.size() <= j) lam.push_back(lp * lam.back() - lam[lam.size() - 2]);
        return lam[j];
    };
    CompensatedSum<cplx> acc;
    double w = 1;
    for (int k = 0; k < 100000; ++k) {
        acc.add(get(k + a) * std::conj(get(k + b)) * w);
        w /= N;
        int n = k + 1;
        double term = (n + a + 1.0) * (n + b + 1.0) * std::pow(R, a + b) * std::pow(r, n);
        double ratio = r * (n + a + 2.0) * (n + b + 2.0) / ((n + a + 1.0) * (n + b + 1.0));
        if (ratio < 1 && term / (1 - ratio) < 1e-12) return acc.value();
    }
    throw std::domain_error("shifted_inner_ratio: local series did not converge");
}

}  // namespace

cplx shifted_inner_ratio(const EigenvalueSystem& sys, const Ideal& t1, const Ideal& t2) {
    if (!t1.integral() || !t2.integral()) throw std::invalid_argument("shifted_inner_ratio: ideals must be integral");
    if (sys.theta() >= 0.5) throw std::domain_error("shifted_inner_ratio: theta >= 1/2");
    const Field& K = sys.field();
    Ideal g = K.gcd(t1, t2);
    Ideal u1 = K.quotient(t1, g), u2 = K.quotient(t2, g);
    cplx v = 1.0 / std::sqrt((double)K.norm(u1) * (double)K.norm(u2));
    for (auto& [P, e] : K.factor(u1)) v *= local_series(sys, P, 0, e) / local_series(sys, P, 0, 0);
    for (auto& [P, e] : K.factor(u2)) v *= local_series(sys, P, e, 0) / local_series(sys, P, 0, 0);
    return v;
}

int OldformBasis::index_of(const Ideal& x) const {
    for (size_t i = 0; i < t.size(); ++i)
        if (t[i] == x) return (int)i;
    return -1;
}

OldformBasis oldform_gram_schmidt(const EigenvalueSystem& sys, const Ideal& c) {
    const Field& K = sys.field();
    if (!K.divides(sys.conductor(), c)) throw std::invalid_argument("oldform_gram_schmidt: conductor does not divide level");
    OldformBasis B;
    B.level = c;
    B.conductor = sys.conductor();
    B.t = K.divisors(K.quotient(c, sys.conductor()));
    int n = (int)B.t.size();
    if (n > 64) throw std::invalid_argument("oldform_gram_schmidt: more than 64 divisors");

    Eigen::MatrixXcd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = j < i ? std::conj(G(j, i)) : shifted_inner_ratio(sys, B.t[i], B.t[j]);

    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> D;
        for (int j = 0; j < i; ++j)
            if (K.divides(B.t[j], B.t[i])) D.push_back(j);
        int m = (int)D.size();
        Eigen::VectorXcd a = Eigen::VectorXcd::Zero(n);
        a(i) = 1;
        if (m > 0) {
            // <R_i - sum beta_j R_j, R_l> = 0 for l in D
            Eigen::MatrixXcd M(m, m);
            Eigen::VectorXcd rhs(m);
            for (int l = 0; l < m; ++l) {
                rhs(l) = G(i, D[l]);
                for (int j = 0; j < m; ++j) M(l, j) = G(D[j], D[l]);
            }
            Eigen::VectorXcd beta = M.fullPivLu().solve(rhs);
            for (int j = 0; j < m; ++j) a(D[j]) = -beta(j);
        }
        double nn = (a.transpose() * G * a.conjugate())(0, 0).real();
        if (!(nn > 1e-10 * G(i, i).real()))
            throw std::runtime_error("oldform_gram_schmidt: numerically singular Gram matrix at " + K.to_string(B.t[i]));
        A.row(i) = a.transpose() / std::sqrt(nn);
    }
    Eigen::MatrixXcd GR = A * G * A.adjoint();
    B.alpha.assign(n, std::vector<cplx>(n));
    B.gram.assign(n, std::vector<cplx>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            B.alpha[i][j] = A(i, j);
            B.gram[i][j] = GR(i, j);
            B.gram_deviation = std::max(B.gram_deviation, std::abs(GR(i, j) - (i == j ? 1.0 : 0.0)));
        }
    return B;
}

cplx lambda_t(const EigenvalueSystem& sys, const OldformBasis& basis, const Ideal& t, const Ideal& m) {
    int i = basis.index_of(t);
    if (i < 0) throw std::invalid_argument("lambda_t: t is not in the basis");
    const Field& K = sys.field();
    if (!m.integral()) return 0;
    Ideal g = K.gcd(t, m);
    CompensatedSum<cplx> acc;
    for (size_t j = 0; j < basis.t.size(); ++j) {
        const Ideal& s = basis.t[j];
        if (basis.alpha[i][j] == 0.0 || !K.divides(s, g)) continue;
        acc.add(basis.alpha[i][j] * std::sqrt((double)K.norm(s)) * sys.lambda(K.quotient(m, s)));
    }
    return acc.value();
}

}  // namespace ntk
