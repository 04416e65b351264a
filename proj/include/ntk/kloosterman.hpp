// Kloosterman sums over Q and Q(sqrt D) with class number one.
//
// S(r1, r2; c) = sum over x in (o/c)^x of psi((r1 x + r2 x^{-1}) / (c delta)),
// delta the totally positive generator of the different with minimal trace.
#pragma once

#include "ntk/field.hpp"
#include "ntk/residue.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace ntk {

struct KloostermanQuery {
    Elem r1{1, 0};
    Elem r2{1, 0};
    Elem c{1, 0};
    // Generator of the different to use instead of the canonical one.
    std::optional<Elem> delta;
};

// Residue table for a modulus, reusable across (r1, r2).
class KloostermanModulus {
public:
    KloostermanModulus(const Field& K, Elem c, std::optional<Elem> delta = std::nullopt, i64 bound = 10000000);

    std::complex<double> sum(Elem r1, Elem r2) const;
    const ResidueRing& ring() const { return ring_; }
    Elem modulus() const { return c_; }

private:
    const Field* K_;
    Elem c_;
    ResidueRing ring_;
    // psi(y / (c delta)) = e((y.a * ta + y.b * tb) / M)
    i64 ta_ = 0, tb_ = 0, M_ = 1;
    std::vector<std::pair<Elem, Elem>> pairs_;  // (x, x^{-1}) representatives
};

std::complex<double> kloosterman_sum(const Field& K, const KloostermanQuery& q);

struct WeilMargin {
    double abs_S = 0;
    i64 tau = 1;
    i64 gcd_norm = 1;
    i64 c_norm = 1;
    double margin = 0;  // |S| / (tau sqrt(gcd_norm) sqrt(c_norm))
};
WeilMargin weil_margin(const Field& K, const KloostermanQuery& q, std::complex<double> S);
WeilMargin weil_margin(const Field& K, const KloostermanQuery& q);

struct SweepRow {
    i64 c_norm;
    Elem c;
    Elem r1, r2;
    std::complex<double> S;
    double margin;
};

// All moduli (canonical generators of integral ideals) with norm <= cmax and
// all (r1, r2) pairs; rows ordered by (norm, ideal HNF, r1, r2) regardless of
// the number of worker threads.
std::vector<SweepRow> kloosterman_sweep(const Field& K, i64 cmax, const std::vector<Elem>& rs, int jobs = 1);

}  // namespace ntk
