#include "ntk/kuznetsov.hpp"

#include "ntk/kloosterman.hpp"

#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace ntk {

namespace {

constexpr mpfr_rnd_t RN = MPFR_RNDN;
constexpr long kPhaseBits = 640;  // also the largest working precision allowed
constexpr double kTrapStep = 0.05;
constexpr double kTailTarget = 1e-10;

struct Mp {
    mpfr_t v;
    explicit Mp(long prec) {
        mpfr_init2(v, prec);
        mpfr_set_zero(v, 1);
    }
    Mp(const Mp& o) {
        mpfr_init2(v, mpfr_get_prec(o.v));
        mpfr_set(v, o.v, RN);
    }
    Mp& operator=(const Mp&) = delete;
    ~Mp() { mpfr_clear(v); }
    double d() const { return mpfr_get_d(v, RN); }
};

// Stirling coefficients B_{2k} / (2k (2k-1)) at kPhaseBits.
const std::vector<Mp>& stirling_coefficients() {
    static const std::vector<Mp> coef = [] {
        std::vector<Mp> c;
        Mp twopi2(kPhaseBits), f(kPhaseBits), z(kPhaseBits);
        mpfr_const_pi(twopi2.v, RN);
        mpfr_mul_ui(twopi2.v, twopi2.v, 2, RN);
        mpfr_sqr(twopi2.v, twopi2.v, RN);
        mpfr_ui_div(f.v, 1, twopi2.v, RN);  // (2k-2)! / (2 pi)^{2k} at k = 1
        for (unsigned k = 1; k <= 160; ++k) {
            Mp ck(kPhaseBits);
            mpfr_zeta_ui(z.v, 2 * k, RN);
            mpfr_mul(ck.v, f.v, z.v, RN);
            mpfr_mul_ui(ck.v, ck.v, 2, RN);
            if (k % 2 == 0) mpfr_neg(ck.v, ck.v, RN);
            c.push_back(ck);
            mpfr_mul_ui(f.v, f.v, (2 * k - 1) * (2 * k), RN);
            mpfr_div(f.v, f.v, twopi2.v, RN);
        }
        return c;
    }();
    return coef;
}

// Im log Gamma(1 + i y) at kPhaseBits: shift to z = 1 + R + i y, Stirling there.
Mp gamma_phase_mp(double y) {
    const long prec = kPhaseBits;
    const long R = prec / 5;
    Mp acc(prec), tmp(prec), Y(prec), X(prec);
    mpfr_set_d(Y.v, y, RN);
    for (long j = 0; j < R; ++j) {
        mpfr_set_ui(X.v, 1 + j, RN);
        mpfr_atan2(tmp.v, Y.v, X.v, RN);
        mpfr_sub(acc.v, acc.v, tmp.v, RN);
    }
    mpfr_set_ui(X.v, 1 + R, RN);
    Mp phi(prec), mod2(prec), L(prec);
    mpfr_atan2(phi.v, Y.v, X.v, RN);
    mpfr_sqr(mod2.v, X.v, RN);
    mpfr_sqr(tmp.v, Y.v, RN);
    mpfr_add(mod2.v, mod2.v, tmp.v, RN);
    mpfr_log(L.v, mod2.v, RN);
    mpfr_div_ui(L.v, L.v, 2, RN);
    // Im[(z - 1/2) log z - z] = (Re z - 1/2) phi + y log|z| - y
    mpfr_sub_d(tmp.v, X.v, 0.5, RN);
    mpfr_mul(tmp.v, tmp.v, phi.v, RN);
    mpfr_add(acc.v, acc.v, tmp.v, RN);
    mpfr_mul(tmp.v, Y.v, L.v, RN);
    mpfr_add(acc.v, acc.v, tmp.v, RN);
    mpfr_sub(acc.v, acc.v, Y.v, RN);
    // sum c_k Im z^{-(2k-1)}
    Mp wr(prec), wi(prec), w2r(prec), w2i(prec), pr(prec), pi(prec), a(prec), b(prec);
    mpfr_div(wr.v, X.v, mod2.v, RN);
    mpfr_div(wi.v, Y.v, mod2.v, RN);
    mpfr_neg(wi.v, wi.v, RN);
    mpfr_sqr(w2r.v, wr.v, RN);
    mpfr_sqr(tmp.v, wi.v, RN);
    mpfr_sub(w2r.v, w2r.v, tmp.v, RN);
    mpfr_mul(w2i.v, wr.v, wi.v, RN);
    mpfr_mul_ui(w2i.v, w2i.v, 2, RN);
    mpfr_set(pr.v, wr.v, RN);
    mpfr_set(pi.v, wi.v, RN);
    const auto& coef = stirling_coefficients();
    for (size_t k = 0;; ++k) {
        if (k == coef.size()) throw std::runtime_error("gamma_phase: Stirling series exhausted");
        mpfr_mul(tmp.v, coef[k].v, pi.v, RN);
        mpfr_add(acc.v, acc.v, tmp.v, RN);
        if (mpfr_zero_p(tmp.v) || mpfr_get_exp(tmp.v) < -prec - 8) break;
        // p *= w^2
        mpfr_mul(a.v, pr.v, w2r.v, RN);
        mpfr_mul(b.v, pi.v, w2i.v, RN);
        mpfr_sub(a.v, a.v, b.v, RN);
        mpfr_mul(b.v, pr.v, w2i.v, RN);
        mpfr_mul(tmp.v, pi.v, w2r.v, RN);
        mpfr_add(pi.v, b.v, tmp.v, RN);
        mpfr_set(pr.v, a.v, RN);
    }
    return acc;
}

// Cached per y; trapezoid nodes repeat across calls.
const Mp& cached_phase(double y) {
    static std::mutex mu;
    static std::map<double, Mp> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(y);
        if (it != cache.end()) return it->second;
    }
    Mp v = gamma_phase_mp(y);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(y, v).first->second;  // std::map nodes are stable
}

// log2 of the largest |term| of sum (+-x^2/4)^k / (k! (1 + 2 i tau)_k), and the
// number of terms until they fall 2^-extra below it.
double series_peak_log2(double tau, double x, double extra) {
    double z = std::log(x * x / 4), b = 2 * tau;
    double lt = 0, peak = 0;
    for (int k = 1;; ++k) {
        lt += z - std::log((double)k) - 0.5 * std::log((double)k * k + b * b);
        peak = std::max(peak, lt);
        if (k > x && lt < peak - extra * std::log(2.0)) break;
    }
    return peak / std::log(2.0);
}

double gaussian_tail(double width, double x, double T, bool bessel) {
    double g = std::exp(-1 / (4 * width * width));
    if (!bessel) return g * width * width * std::exp(-T * T / (width * width)) / 2;
    return 2 / std::sqrt(kPi) * g * std::exp(x * x / (8 * T)) * width * width * std::exp(-T * T / (width * width)) /
           (2 * std::sqrt(T));
}

double power_tail(double C, double a, double x, double T, bool bessel) {
    if (!bessel) return C * std::pow(T, 2 - a) / (a - 2);
    return 2 * C / std::sqrt(kPi) * std::exp(x * x / (8 * T)) * std::pow(T, 1.5 - a) / (a - 1.5);
}

// Smallest T on a unit grid whose tail certificate is below target.
double choose_cutoff(const TestFunction& k, double x, bool bessel, double& tail) {
    if (!k.gaussian && k.cert_a <= 2) throw std::invalid_argument("test function: decay exponent must exceed 2");
    for (double T = 2; T <= 400; T += 1) {
        tail = k.gaussian ? gaussian_tail(k.width, x, T, bessel) : power_tail(k.cert_C, k.cert_a, x, T, bessel);
        if (tail < kTailTarget) return T;
    }
    throw std::runtime_error("bessel transform: tail certificate failed up to T = 400");
}

double discrete_value(const TestFunction& k, int b) { return b == 2 ? k.strip(0.5).real() : k.discrete(b); }

}  // namespace

TestFunction TestFunction::kZ(double Z) {
    TestFunction k;
    k.strip = [Z](cplx nu) { return std::exp((nu * nu - 0.25) / (Z * Z)); };
    k.discrete = [Z](int b) { return (b - 1) / 2.0 <= Z ? 1.0 : 0.0; };
    k.max_b = 2;
    while ((k.max_b + 1) / 2.0 <= Z) k.max_b += 2;
    k.gaussian = true;
    k.width = Z;
    return k;
}

double gamma_phase(double y) { return cached_phase(y).d(); }

double imag_bessel_over_cosh(double tau, double x, bool modified, int* bits_used, int extra_bits) {
    if (!(x > 0)) throw std::domain_error("imag_bessel_over_cosh: x must be positive");
    if (tau == 0) return 0;
    double peak = series_peak_log2(tau, x, 80);
    long bits = (long)std::ceil(std::max(0.0, peak)) + 96 + extra_bits;
    bits = (bits + 31) / 32 * 32;
    if (bits > kPhaseBits) throw std::runtime_error("imag_bessel_over_cosh: precision beyond supported maximum");
    if (bits_used) *bits_used = (int)bits;

    Mp z(bits), tr(bits), ti(bits), Sr(bits), Si(bits), f(bits), tmp(bits), nr(bits), ni(bits), B(bits), B2(bits);
    mpfr_set_d(z.v, x, RN);
    mpfr_sqr(z.v, z.v, RN);
    mpfr_div_ui(z.v, z.v, 4, RN);
    if (!modified) mpfr_neg(z.v, z.v, RN);
    mpfr_set_d(B.v, 2 * tau, RN);
    mpfr_sqr(B2.v, B.v, RN);
    mpfr_set_ui(tr.v, 1, RN);
    mpfr_set_ui(Sr.v, 1, RN);
    for (unsigned long k = 1;; ++k) {
        // term *= z / (k (k + 2 i tau)) = z (k - 2 i tau) / (k (k^2 + 4 tau^2))
        mpfr_add_ui(tmp.v, B2.v, k * k, RN);
        mpfr_mul_ui(tmp.v, tmp.v, k, RN);
        mpfr_div(f.v, z.v, tmp.v, RN);
        mpfr_mul_ui(nr.v, tr.v, k, RN);
        mpfr_mul(tmp.v, ti.v, B.v, RN);
        mpfr_add(nr.v, nr.v, tmp.v, RN);
        mpfr_mul_ui(ni.v, ti.v, k, RN);
        mpfr_mul(tmp.v, tr.v, B.v, RN);
        mpfr_sub(ni.v, ni.v, tmp.v, RN);
        mpfr_mul(tr.v, nr.v, f.v, RN);
        mpfr_mul(ti.v, ni.v, f.v, RN);
        mpfr_add(Sr.v, Sr.v, tr.v, RN);
        mpfr_add(Si.v, Si.v, ti.v, RN);
        auto small = [&](const Mp& m) { return mpfr_zero_p(m.v) || mpfr_get_exp(m.v) < -(long)bits + 8; };
        if (k > x && small(tr) && small(ti)) break;
        if (k > 100000) throw std::runtime_error("imag_bessel_over_cosh: series did not terminate");
    }
    // Im(e^{i theta} S), theta = 2 tau log(x/2) - arg Gamma(1 + 2 i tau)
    Mp theta(bits), s(bits), c(bits), out(bits);
    mpfr_set_d(theta.v, x / 2, RN);
    mpfr_log(theta.v, theta.v, RN);
    mpfr_mul(theta.v, theta.v, B.v, RN);
    mpfr_sub(theta.v, theta.v, cached_phase(2 * tau).v, RN);
    mpfr_sin_cos(s.v, c.v, theta.v, RN);
    mpfr_mul(out.v, s.v, Sr.v, RN);
    mpfr_mul(tmp.v, c.v, Si.v, RN);
    mpfr_add(out.v, out.v, tmp.v, RN);
    // |1 / Gamma(1 + 2 i tau)| / cosh(pi tau) = sqrt(tanh(pi tau) / (pi tau))
    double a = std::abs(tau);
    return out.d() * std::sqrt(std::tanh(kPi * a) / (kPi * a));
}

TransformValue bessel_check(const TestFunction& k, double t) {
    if (t == 0 || !std::isfinite(t)) throw std::domain_error("bessel_check: t must be finite and nonzero");
    TransformValue r;
    double x = 4 * kPi * std::sqrt(std::fabs(t));
    r.T = choose_cutoff(k, x, true, r.tail_bound);
    int n = (int)std::ceil(r.T / kTrapStep);
    r.T = n * kTrapStep;
    CompensatedSum<double> fine, coarse;
    for (int j = 1; j <= n; ++j) {
        double tau = j * kTrapStep;
        int bits = 0;
        double v = -2 * k.strip(cplx(0, tau)).real() * tau * imag_bessel_over_cosh(tau, x, t < 0, &bits);
        r.max_bits = std::max(r.max_bits, bits);
        fine.add(v);
        if (j % 2 == 0) coarse.add(v);
    }
    r.nodes = n;
    double I = kTrapStep * fine.value();
    r.discretisation = std::fabs(I - 2 * kTrapStep * coarse.value());
    double disc = 0;
    if (t > 0)
        for (int b = 2; b <= k.max_b; b += 2)
            disc += ((b / 2) % 2 ? -1.0 : 1.0) * (b - 1) * discrete_value(k, b) * std::cyl_bessel_j((double)(b - 1), x);
    r.value = I + disc;
    return r;
}

TransformValue bessel_tilde(const TestFunction& k) {
    TransformValue r;
    r.T = choose_cutoff(k, 0, false, r.tail_bound);
    int n = (int)std::ceil(r.T / kTrapStep);
    r.T = n * kTrapStep;
    CompensatedSum<double> fine, coarse;
    for (int j = 1; j <= n; ++j) {
        double tau = j * kTrapStep;
        double v = k.strip(cplx(0, tau)).real() * tau * std::tanh(kPi * tau);
        fine.add(v);
        if (j % 2 == 0) coarse.add(v);
    }
    r.nodes = n;
    double I = kTrapStep * fine.value();
    r.discretisation = std::fabs(I - 2 * kTrapStep * coarse.value());
    double disc = 0;
    for (int b = 2; b <= k.max_b; b += 2) disc += (b - 1) / 2.0 * discrete_value(k, b);
    r.value = I + disc;
    return r;
}

double SmallTBound::operator()(double t) const {
    double a = std::fabs(t);
    double v = positive * std::pow(a, sigma);
    if (t < 0) v += negative_extra * std::sqrt(a);
    return v;
}

SmallTBound small_t_bound(const TestFunction& k, double sigma) {
    if (!(sigma > 0.5 && sigma < 2.0 / 3)) throw std::invalid_argument("small_t_bound: sigma must lie in (1/2, 2/3)");
    SmallTBound B;
    B.sigma = sigma;
    B.t0 = 1 / (16 * kPi * kPi);
    // |J_{2 nu}(x)| <= (x/2)^{2 sigma} e^{x^2/4} / |Gamma(2 nu + 1)| on Re nu = sigma, x <= 1
    auto integrand = [&](double tau) {
        cplx nu(sigma, tau);
        double kv = std::abs(k.strip(nu));
        if (kv == 0) return 0.0;
        double a = std::fabs(tau);
        double log_cos = a > 20 ? kPi * a - std::log(2.0)
                                : 0.5 * std::log(std::pow(std::cos(kPi * sigma), 2) + std::pow(std::sinh(kPi * a), 2));
        return std::exp(std::log(kv) + std::log(std::abs(nu)) - lgamma_c(2.0 * nu + 1.0).real() - log_cos);
    };
    QuadOptions opt;
    opt.rel_tol = 1e-10;
    auto q = integrate_real_line(integrand, opt);
    if (!q.converged) throw std::runtime_error("small_t_bound: contour integral did not converge");
    double contour = (q.value + q.error) * std::pow(2 * kPi, 2 * sigma) * std::exp(0.25);
    // |J_n(x)| <= (x/2)^n / n!, x/2 = 2 pi sqrt t, and t^{n/2} <= t^sigma t0^{n/2 - sigma}
    double disc = 0;
    for (int b = 4; b <= k.max_b; b += 2) {
        int n = b - 1;
        disc += n * std::fabs(k.discrete(b)) * std::pow(2 * kPi, n) / std::tgamma(n + 1.0) *
                std::pow(B.t0, n / 2.0 - sigma);
    }
    B.positive = (contour + disc) * (1 + 1e-8);
    // t < 0: residue k(1/2) I_1(x), I_1(x) <= (x/2) e^{x^2/4}
    B.negative_extra = 2 * kPi * std::exp(0.25) * std::abs(k.strip(0.5)) * (1 + 1e-8);
    return B;
}

BesselCalibration calibrate_bessel_bounds(const std::vector<double>& zs, int grid, double tmin, double tmax, int jobs) {
    struct Task {
        double Z, t;
        bool tilde;
    };
    std::vector<Task> tasks;
    for (double Z : zs) {
        tasks.push_back({Z, 0, true});
        for (int i = 0; i < grid; ++i) {
            double t = grid == 1 ? tmin : tmin * std::pow(tmax / tmin, (double)i / (grid - 1));
            tasks.push_back({Z, t, false});
            tasks.push_back({Z, -t, false});
        }
    }
    std::vector<TransformValue> out(tasks.size());
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        for (size_t i; (i = next++) < tasks.size();) {
            try {
                TestFunction k = TestFunction::kZ(tasks[i].Z);
                out[i] = tasks[i].tilde ? bessel_tilde(k) : bessel_check(k, tasks[i].t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);

    BesselCalibration c;
    for (size_t i = 0; i < tasks.size(); ++i) {
        double Z2 = tasks[i].Z * tasks[i].Z;
        double v = std::fabs(out[i].value) + out[i].error();
        if (tasks[i].tilde) {
            c.tilde = std::max(c.tilde, v / Z2);
        } else {
            c.check = std::max(c.check, v / (Z2 * std::min(1.0, std::sqrt(std::fabs(tasks[i].t)))));
            c.max_abs_check = std::max(c.max_abs_check, v / Z2);
        }
        c.max_error = std::max(c.max_error, out[i].error());
        ++c.points;
    }
    return c;
}

std::vector<Elem> units_mod_squares(const Field& K) {
    std::vector<Elem> u{K.from_int(1), K.from_int(-1)};
    if (K.degree() == 2) {
        Elem e = K.fundamental_unit();
        u.push_back(e);
        u.push_back(K.neg(e));
    }
    return u;
}

namespace {

// |k-check(t)| <= min(M, Bp sqrt|t|) on all of R^x.
struct PlaceBound {
    double M = 0, Bp = 0;
    double operator()(double t) const { return std::min(M, Bp * std::sqrt(std::fabs(t))); }
    bool root_regime(double t) const { return Bp * std::sqrt(std::fabs(t)) <= M; }
};

// Sum over the units w = +-eps^k of prod_j b(|t_j|) for an element whose
// embedded values have product P, maximised over the unknown offset in k.
double orbit_bound(const PlaceBound& b, double P, int d, double L) {
    if (d == 1) return 2 * b(P);
    double A = std::sqrt(P), r = std::exp(-L);
    double sum = 0;
    for (int dir = 1; dir >= -1; dir -= 2) {
        for (int k = dir > 0 ? 0 : -1;; k += dir) {
            double p = A * std::exp(-2.0 * k * L), q = A * std::exp(2.0 * (k + 1) * L);
            double term = b(p) * b(q);
            sum += term;
            double small = std::min(p, q), big = std::max(p, q);
            if (b.root_regime(small) && !b.root_regime(big) && term <= 1e-16 * sum) {
                sum += term * r / (1 - r);
                break;
            }
            if (std::abs(k) > 100000) throw std::runtime_error("kuznetsov: orbit bound did not converge");
        }
    }
    return 2 * sum;
}

}  // namespace

KuzResult kuznetsov_geometric_side(const Field& K, const KuzQuery& q, const TestFunction& k) {
    if (K.class_number() != 1) throw std::domain_error("kuznetsov_geometric_side: class number one required");
    if (K.is_zero(q.r1) || K.is_zero(q.r2)) throw std::invalid_argument("kuznetsov_geometric_side: r1, r2 must be nonzero");
    const int d = K.degree();
    KuzResult res;
    std::vector<Elem> U = units_mod_squares(K);
    res.unit_classes = (int)U.size();

    double tilde = bessel_tilde(k).value;
    if (K.principal(q.r1) == K.principal(q.r2)) res.diagonal = q.c1 * std::pow(tilde, d);

    Elem delta = K.different_generator().value_or(K.from_int(1));
    Elem gamma = K.mul(delta, delta);
    auto gam = K.embed(gamma);

    // Majorant ingredients.
    double M = q.check_sup;
    if (!(M > 0)) {
        double mx = 0;
        for (int i = 0; i < 24; ++i) {
            double t = 1e-6 * std::pow(1e8, i / 23.0);
            for (double s : {1.0, -1.0}) {
                auto v = bessel_check(k, s * t);
                mx = std::max(mx, std::fabs(v.value) + v.error());
            }
        }
        M = 2 * mx;
    }
    SmallTBound sb = small_t_bound(k, q.sigma);
    PlaceBound pb;
    pb.M = M;
    pb.Bp = std::max({sb.positive * std::pow(sb.t0, sb.sigma - 0.5) + sb.negative_extra, M / std::sqrt(sb.t0)});
    double L = d == 2 ? std::log(K.embed_d(K.fundamental_unit())[0]) : 1.0;
    double g_norm = (double)K.norm(K.gcd(K.principal(q.r1), K.principal(q.r2)));
    double rr = std::fabs((double)K.norm(K.mul(q.r1, q.r2))) / std::fabs((double)K.norm(gamma));
    i64 cN = K.norm(q.level);
    double tau_c = 1;
    for (auto& pe : K.factor(q.level, std::numeric_limits<i64>::max())) tau_c *= pe.second + 1;

    constexpr double kCap = 100;  // |t| beyond this is only bounded, not evaluated
    std::map<double, double> cache;
    auto check = [&](double t) {
        auto it = cache.find(t);
        if (it != cache.end()) return it->second;
        double v = bessel_check(k, t).value;
        cache.emplace(t, v);
        return v;
    };

    CompensatedSum<cplx> off;
    double trunc = 0;
    Elem eps = d == 2 ? K.fundamental_unit() : K.from_int(1);
    for (i64 n = 1; cN * n <= q.height; ++n) {
        for (const Ideal& B : K.ideals_of_norm(n)) {
            Ideal cI = K.mul(q.level, B);
            Elem g = *K.generator(cI);
            KloostermanModulus km(K, g);
            double Nc = (double)(cN * n);
            double weil = (double)K.arith(cI).tau * std::sqrt(g_norm) * std::sqrt(Nc) / Nc;
            ++res.moduli;
            for (const Elem& u : U) {
                auto ur = K.embed(K.mul(u, K.mul(q.r1, q.r2)));
                for (int sgn : {1, -1}) {
                    for (int dir = 1; dir >= -1; dir -= 2) {
                        if (d == 1 && dir < 0) break;
                        for (int e = dir > 0 ? 0 : -1;; e += dir) {
                            Elem w = e >= 0 ? K.pow(eps, e) : K.pow(K.inverse_unit(eps), -e);
                            if (sgn < 0) w = K.neg(w);
                            Elem c = K.mul(w, g);
                            auto ce = K.embed(c);
                            double t[2] = {0, 0};
                            double bound = weil;
                            bool inside = true;
                            for (int j = 0; j < d; ++j) {
                                t[j] = (double)(ur[j] / (gam[j] * ce[j] * ce[j]));
                                bound *= pb(t[j]);
                                inside = inside && std::fabs(t[j]) <= kCap;
                            }
                            if (inside) {
                                Elem wi = K.inverse_unit(w);
                                cplx S = km.sum(K.mul(wi, q.r1), K.mul(wi, K.mul(u, q.r2)));
                                double prod = 1;
                                for (int j = 0; j < d; ++j) prod *= check(t[j]);
                                off.add(S / Nc * prod);
                                ++res.terms;
                            } else {
                                trunc += bound;
                            }
                            if (d == 1) break;
                            // Past the window: the small side decays geometrically by 1/eps.
                            double small = std::min(std::fabs(t[0]), std::fabs(t[1]));
                            double big = std::max(std::fabs(t[0]), std::fabs(t[1]));
                            if (!inside && pb.root_regime(small) && !pb.root_regime(big) && big > kCap) {
                                double r = std::exp(-L);
                                trunc += bound * r / (1 - r);
                                break;
                            }
                            if (std::abs(e) > 10000) throw std::runtime_error("kuznetsov: unit orbit did not close");
                        }
                    }
                }
            }
        }
    }
    res.offdiagonal = q.c2 * off.value();

    // Omitted moduli: c = level * b with N(b) > height / N(level), dyadic blocks
    // with sum_{N b <= x} tau(b) <= x (1 + log x)^{2d - 1}.
    auto f = [&](double y) {
        double Nc = cN * y;
        double P = rr / (Nc * Nc);
        return U.size() * tau_c * std::sqrt(g_norm) / std::sqrt(Nc) * orbit_bound(pb, P, d, L);
    };
    auto count = [&](double x) { return x * std::pow(1 + std::log(x), 2 * d - 1); };
    double x0 = (double)q.height / (double)cN;
    double y = x0 >= 1 ? x0 : 0.5;
    double tail = 0, prev = 0;
    for (int j = 0; j < 1000; ++j, y *= 2) {
        double term = count(2 * y) * f(y);
        tail += term;
        if (j > 4 && prev > 0) {
            double ratio = term / prev;
            if (ratio < 1 && term * ratio / (1 - ratio) < 1e-6 * tail) {
                tail += term * ratio / (1 - ratio);
                break;
            }
        }
        prev = term;
    }
    res.majorant = q.c2 * (tail + trunc);
    res.value = res.diagonal + res.offdiagonal;
    return res;
}

}  // namespace ntk
