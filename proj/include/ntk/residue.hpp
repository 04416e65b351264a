// Residue rings o/c with unit group bookkeeping.
#pragma once

#include "ntk/field.hpp"

namespace ntk {

// Representatives u + v*w with 0 <= u < A, 0 <= v < C (c = [A, B + C w]),
// indexed by v*A + u.
class ResidueRing {
public:
    ResidueRing(const Field& K, const Ideal& c, i64 bound = 10000000);

    const Field& field() const { return *K_; }
    const Ideal& modulus() const { return c_; }
    i64 size() const { return size_; }
    Elem rep(i64 idx) const;
    i64 index(Elem x) const;
    i64 mul(i64 x, i64 y) const { return index(K_->mul(rep(x), rep(y))); }
    i64 add(i64 x, i64 y) const { return index(K_->add(rep(x), rep(y))); }
    i64 one() const { return index(Elem{1, 0}); }

    bool is_unit(i64 idx) const { return unit_pos_[idx] >= 0; }
    const std::vector<i64>& units() const { return units_; }
    // Inverse of a unit residue (index in, index out).
    i64 inverse(i64 idx) const;
    i64 phi() const { return (i64)units_.size(); }
    const Factorization& factorization() const { return fac_; }

private:
    const Field* K_;
    Ideal c_;
    i64 size_;
    Factorization fac_;
    std::vector<i64> units_;
    std::vector<i64> unit_pos_;
    std::vector<i64> inv_;
};

}  // namespace ntk
