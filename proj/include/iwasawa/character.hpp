#pragma once

#include "iwasawa/series.hpp"

#include <vector>

namespace iwasawa {

/// A character of Z_p^d of order dividing p^level, sending the generator
/// sigma_i to zeta_{p^level}^{images[i]}. Kept reduced: images lie in
/// [0, p^level) and the level is minimal, so the trivial character has level 0.
class FiniteCharacter {
public:
    FiniteCharacter() = default;
    FiniteCharacter(u64 p, int level, std::vector<long long> images);
    static FiniteCharacter trivial(u64 p, int d);

    u64 p() const noexcept { return p_; }
    int level() const noexcept { return level_; }
    int dim() const noexcept { return static_cast<int>(images_.size()); }
    const std::vector<long long>& images() const noexcept { return images_; }
    bool is_trivial() const noexcept { return level_ == 0; }

    /// Images scaled to a level at least as high as this one.
    std::vector<long long> images_at(int level) const;
    /// Exponent j with chi(sigma^e) = zeta_{p^level}^j.
    long long exponent_of(const std::vector<long long>& e) const;

    FiniteCharacter conjugate() const;
    FiniteCharacter operator*(const FiniteCharacter& o) const;
    bool operator==(const FiniteCharacter& o) const = default;

private:
    u64 p_ = 2;
    int level_ = 0;
    std::vector<long long> images_;
};

/// P * H * Q = diag(diag) with P and Q unimodular.
struct SmithForm {
    std::vector<std::vector<BigInt>> P, Q;
    std::vector<BigInt> diag;
};

SmithForm smith_normal_form(const IntMatrix& H);
BigInt determinant(const IntMatrix& H);
std::vector<std::vector<BigInt>> adjugate(const IntMatrix& H);

/// The finite-index subgroup of Z_p^d generated by the columns of H.
class Subgroup {
public:
    Subgroup(IntMatrix H, u64 p);
    static Subgroup whole(int d, u64 p);

    const IntMatrix& H() const noexcept { return H_; }
    int dim() const noexcept { return static_cast<int>(H_.size()); }
    /// v_p of the elementary divisors: Gamma / Phi = prod Z/p^{e_i}.
    const std::vector<int>& quotient() const noexcept { return quot_; }
    long long index() const noexcept { return index_; }

    /// The characters of Gamma / Phi, lexicographic in the quotient coordinates.
    std::vector<FiniteCharacter> characters() const;
    /// Coordinates x in Z_p^d with H x = e, as integers congruent mod p^M.
    /// Throws IntegralityViolation when e is not in Phi.
    std::vector<BigInt> coordinates(const std::vector<long long>& e, int M) const;

private:
    IntMatrix H_;
    u64 p_;
    SmithForm snf_;
    std::vector<int> quot_;
    long long index_ = 1;
    std::vector<std::vector<BigInt>> adj_;
    int det_vp_ = 0;
    BigInt det_unit_;
};

/// f_chi: the automorphism (1 + t_i) -> chi(sigma_i)(1 + t_i).
Series twist(const Series& f, const FiniteCharacter& chi);

/// Product of f_chi over the characters of Gamma / Phi, written in the
/// coordinates tau_j = sigma^{H e_j} of Phi.
Series norm_descent(const Series& f, const Subgroup& phi);

/// Specialisation of f_chi to a single direction.
Series chi_map(const Series& f, const FiniteCharacter& chi, const SubgroupMap& m);

/// Value of f at a character: t_i -> zeta^{c_i} - 1.
QScalar evaluate_at_character(const Series& f, const FiniteCharacter& omega);

}  // namespace iwasawa
