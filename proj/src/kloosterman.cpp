#include "ntk/kloosterman.hpp"

#include "ntk/numeric.hpp"

#include <atomic>
#include <mutex>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ntk {

namespace {

Elem canonical_delta(const Field& K) {
    auto g = K.different_generator();
    if (!g) throw std::domain_error("the different has no totally positive generator (narrow class number > 1)");
    return *g;
}

}  // namespace

KloostermanModulus::KloostermanModulus(const Field& K, Elem c, std::optional<Elem> delta, i64 bound)
    : K_(&K), c_(c), ring_(K, K.principal(c), bound) {
    if (K.class_number() != 1) throw std::domain_error("Kloosterman sums need class number one");
    Elem d = delta ? *delta : canonical_delta(K);
    if (!(K.principal(d) == K.different())) throw std::invalid_argument("delta does not generate the different");
    Elem cd = K.mul(c, d);
    if (K.degree() == 1) {
        M_ = cd.a;
        ta_ = 1;
        tb_ = 0;
    } else {
        // 1/(c delta) = conj(c delta) / N(c delta)
        Elem g = K.conj(cd);
        M_ = K.norm(cd);
        ta_ = K.trace(g);
        tb_ = K.trace(K.mul(Elem{0, 1}, g));
    }
    if (M_ < 0) {
        M_ = -M_;
        ta_ = -ta_;
        tb_ = -tb_;
    }
    pairs_.reserve(ring_.units().size());
    for (i64 u : ring_.units()) pairs_.emplace_back(ring_.rep(u), ring_.rep(ring_.inverse(u)));
}

std::complex<double> KloostermanModulus::sum(Elem r1, Elem r2) const {
    CompensatedSum<double> re, im;
    for (auto& [x, xi] : pairs_) {
        Elem y = K_->add(K_->mul(r1, x), K_->mul(r2, xi));
        i128 t = (i128)y.a * ta_ + (i128)y.b * tb_;
        i64 r = (i64)(t % M_);
        if (r < 0) r += M_;
        double ang = 2 * kPi * (double)r / (double)M_;
        re.add(std::cos(ang));
        im.add(std::sin(ang));
    }
    return {re.value(), im.value()};
}

std::complex<double> kloosterman_sum(const Field& K, const KloostermanQuery& q) {
    return KloostermanModulus(K, q.c, q.delta).sum(q.r1, q.r2);
}

WeilMargin weil_margin(const Field& K, const KloostermanQuery& q, std::complex<double> S) {
    WeilMargin w;
    Ideal C = K.principal(q.c);
    Ideal g = C;
    if (!K.is_zero(q.r1)) g = K.gcd(g, K.principal(q.r1));
    if (!K.is_zero(q.r2)) g = K.gcd(g, K.principal(q.r2));
    w.abs_S = std::abs(S);
    w.tau = K.arith(C).tau;
    w.gcd_norm = K.norm(g);
    w.c_norm = K.norm(C);
    w.margin = w.abs_S / ((double)w.tau * std::sqrt((double)w.gcd_norm) * std::sqrt((double)w.c_norm));
    return w;
}

WeilMargin weil_margin(const Field& K, const KloostermanQuery& q) { return weil_margin(K, q, kloosterman_sum(K, q)); }

std::vector<SweepRow> kloosterman_sweep(const Field& K, i64 cmax, const std::vector<Elem>& rs, int jobs) {
    std::vector<Elem> moduli;
    for (i64 n = 1; n <= cmax; ++n)
        for (const Ideal& I : K.ideals_of_norm(n)) moduli.push_back(*K.generator(I));
    size_t per = rs.size() * rs.size();
    std::vector<SweepRow> rows(moduli.size() * per);
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&] {
        for (;;) {
            size_t i = next++;
            if (i >= moduli.size()) return;
            try {
                KloostermanModulus km(K, moduli[i]);
                size_t k = i * per;
                for (Elem r1 : rs)
                    for (Elem r2 : rs) {
                        auto S = km.sum(r1, r2);
                        KloostermanQuery q{r1, r2, moduli[i], std::nullopt};
                        auto w = weil_margin(K, q, S);
                        rows[k++] = SweepRow{w.c_norm, moduli[i], r1, r2, S, w.margin};
                    }
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    jobs = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return rows;
}

}  // namespace ntk
