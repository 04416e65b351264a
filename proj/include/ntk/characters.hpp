// Finite characters of (o/q)^x, Hecke characters with archimedean exponents,
// and the unramified Eisenstein parameter lattice.
#pragma once

#include "ntk/field.hpp"
#include "ntk/residue.hpp"

#include <complex>
#include <memory>
#include <vector>

namespace ntk {

// (o/q)^x as a product of cyclic groups Z/d_1 x ... x Z/d_r (d_i | d_{i+1},
// trivial factors dropped). Discrete logs are stored for every unit residue.
class UnitGroup {
public:
    UnitGroup(const Field& K, const Ideal& q, i64 bound = 1000000);

    const ResidueRing& ring() const { return ring_; }
    const std::vector<i64>& invariants() const { return inv_; }
    i64 exponent() const { return exponent_; }
    i64 order() const { return ring_.phi(); }
    // Coordinates in the cyclic decomposition; empty for non-units.
    const std::vector<i64>& dlog(i64 residue) const;

    // Exponent (mod exponent()) of the character indexed by m at a unit
    // residue: chi_m(x) = exp(2 pi i * value / exponent()).
    i64 value_exponent(const std::vector<i64>& m, i64 residue) const;

private:
    ResidueRing ring_;
    std::vector<i64> inv_;
    i64 exponent_ = 1;
    std::vector<std::vector<i64>> dlog_;  // by unit position
    std::vector<i64> pos_;                // residue -> unit position or -1
    std::vector<std::vector<i64>> empty_{1};
};

class FiniteCharacter {
public:
    FiniteCharacter(std::shared_ptr<const UnitGroup> G, std::vector<i64> m);

    const UnitGroup& group() const { return *G_; }
    std::shared_ptr<const UnitGroup> group_ptr() const { return G_; }
    const Ideal& modulus() const { return G_->ring().modulus(); }
    const std::vector<i64>& index() const { return m_; }
    i64 order() const;
    bool is_trivial() const;

    // nullopt for residues not coprime to the modulus.
    std::optional<i64> exponent_at(Elem x) const;
    std::complex<double> operator()(Elem x) const;
    FiniteCharacter inverse() const;
    FiniteCharacter operator*(const FiniteCharacter& o) const;
    FiniteCharacter pow(i64 k) const;
    bool operator==(const FiniteCharacter& o) const { return G_ == o.G_ && m_ == o.m_; }

    // Smallest divisor q' of the modulus with chi trivial on units = 1 mod q'.
    Ideal conductor() const;

private:
    std::shared_ptr<const UnitGroup> G_;
    std::vector<i64> m_;
};

// All phi(q) characters mod q, in lexicographic order of their index vectors.
std::vector<FiniteCharacter> characters_mod(const Field& K, const Ideal& q, i64 bound = 1000000);

// chi((gamma)) = chi_fin(gamma) * prod_j sgn(sigma_j gamma)^{e_j} |sigma_j gamma|^{s_j}.
// Requires triviality on the global units, which makes the value independent
// of the generator.
class HeckeCharacter {
public:
    HeckeCharacter(const Field& K, FiniteCharacter fin, std::vector<std::complex<double>> s,
                   std::vector<int> signs = {});

    const FiniteCharacter& finite() const { return fin_; }
    const std::vector<std::complex<double>>& exponents() const { return s_; }
    // max |chi(u) - 1| over u in {-1, eps}
    double unit_residual() const;
    std::complex<double> at_element(Elem x) const;
    std::complex<double> eval_on_ideal(const Ideal& a) const;
    // chi^k (finite part to the k-th power, exponents times k)
    HeckeCharacter pow(int k) const;
    const Field& field() const { return *K_; }

private:
    const Field* K_;
    FiniteCharacter fin_;
    std::vector<std::complex<double>> s_;
    std::vector<int> signs_;
};

struct ExponentLattice {
    // d x d: first row all ones, further rows log sigma_j(u) for the
    // generator u of the totally positive units.
    std::vector<std::vector<double>> M;
    // Spacing of s_1 - s_2 (imaginary parts) for characters trivial on all
    // units with trivial sign: 2 pi / log eps. Zero when d = 1.
    double spacing = 0;
};
ExponentLattice unramified_exponent_lattice(const Field& K);

struct EisensteinBranch {
    std::vector<i64> character;  // index vector mod c1
    Ideal conductor;
    long k = 0;         // lattice index
    double delta = 0;   // Im(s_1 - s_2)
};

struct EisensteinCount {
    Ideal c1;  // largest ideal with c1^2 | c
    std::vector<EisensteinBranch> branches;
    i64 grid_points = 0;  // y-grid on [-X, X]
    i64 total = 0;        // branches * grid_points
};

// Branches s_j = i(y +- delta/2) with |delta| <= X, characters mod c1 that are
// even (trivial on -1); the diagonal y in [-X, X] sampled at the resolution.
EisensteinCount enumerate_eisenstein_pairs(const Field& K, const Ideal& c, double X, double resolution);

}  // namespace ntk
