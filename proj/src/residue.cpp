#include "ntk/residue.hpp"

#include <stdexcept>

namespace ntk {

ResidueRing::ResidueRing(const Field& K, const Ideal& c, i64 bound) : K_(&K), c_(c) {
    if (!c.integral()) throw std::domain_error("residue ring of a fractional ideal");
    size_ = K.norm(c);
    if (size_ > bound) throw std::domain_error("residue ring: norm exceeds bound");
    fac_ = K.factor(c);
    unit_pos_.assign(size_, -1);
    for (i64 i = 0; i < size_; ++i) {
        Elem x = rep(i);
        bool unit = true;
        for (auto& [P, k] : fac_) {
            if (K.contains(P.ideal, x)) {
                unit = false;
                break;
            }
        }
        if (unit) {
            unit_pos_[i] = (i64)units_.size();
            units_.push_back(i);
        }
    }
    // x^{-1} = x^{phi - 1}; inverses are filled pairwise
    inv_.assign(units_.size(), -1);
    i64 e = phi() - 1;
    for (size_t j = 0; j < units_.size(); ++j) {
        if (inv_[j] >= 0) continue;
        i64 base = units_[j], r = one();
        for (i64 k = e; k > 0; k >>= 1) {
            if (k & 1) r = mul(r, base);
            base = mul(base, base);
        }
        inv_[j] = r;
        inv_[unit_pos_[r]] = units_[j];
    }
}

Elem ResidueRing::rep(i64 idx) const {
    i64 A = c_.A;
    return Elem{idx % A, idx / A};
}

i64 ResidueRing::index(Elem x) const {
    i64 A = c_.A, C = c_.C;
    if (K_->degree() == 1) return mod_floor(x.a, A);
    i64 v = mod_floor(x.b, C);
    i64 q = (x.b - v) / C;
    i64 u = mod_floor((i64)(((__int128)x.a - (__int128)q * c_.B) % A), A);
    return v * A + u;
}

i64 ResidueRing::inverse(i64 idx) const {
    i64 p = unit_pos_.at(idx);
    if (p < 0) throw std::domain_error("residue is not a unit");
    return inv_[p];
}

}  // namespace ntk
