#pragma once

#include "iwasawa/scalar.hpp"

#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace iwasawa {

using Exponent = std::vector<int>;
using IntMatrix = std::vector<std::vector<long long>>;

/// Shape shared by every series of a computation: coefficients in
/// Z/p^N[zeta_{p^level}], variables t_0..t_{d-1}, total degree at most D.
class SeriesRing {
public:
    SeriesRing(u64 p, int N, int d, int D, int level = 0);
    SeriesRing(const Zmod& z, int d, int D, int level = 0);

    const Zmod& zmod() const noexcept { return z_; }
    u64 p() const noexcept { return z_.p(); }
    int N() const noexcept { return z_.N(); }
    int d() const noexcept { return d_; }
    int D() const noexcept { return D_; }
    int level() const noexcept { return level_; }
    std::size_t phi() const noexcept { return phi_; }

    /// Dense slot grid of (D+1)^d cells; only cells of total degree <= D are used.
    std::size_t slots() const noexcept { return layout_->size; }
    const std::vector<std::uint32_t>& used() const noexcept { return layout_->used; }
    int degree(std::size_t slot) const noexcept { return layout_->deg[slot]; }
    std::size_t stride(int var) const noexcept { return layout_->stride[static_cast<std::size_t>(var)]; }
    std::size_t index(const Exponent& e) const;
    Exponent exponent(std::size_t slot) const;

    SeriesRing with_level(int level) const { return SeriesRing(z_, d_, D_, level); }
    SeriesRing with_vars(int d) const { return SeriesRing(z_, d, D_, level_); }
    SeriesRing with_degree(int D) const { return SeriesRing(z_, d_, D, level_); }
    SeriesRing with_precision(int N) const { return SeriesRing(Zmod(z_.p(), N), d_, D_, level_); }

    bool operator==(const SeriesRing& o) const noexcept
    {
        return z_ == o.z_ && d_ == o.d_ && D_ == o.D_ && level_ == o.level_;
    }
    bool operator!=(const SeriesRing& o) const noexcept { return !(*this == o); }

private:
    struct Layout {
        std::size_t size = 1;
        std::vector<std::size_t> stride;
        std::vector<int> deg;
        std::vector<std::uint32_t> used;
    };
    Zmod z_;
    int d_, D_, level_;
    std::size_t phi_;
    std::shared_ptr<const Layout> layout_;
};

/// A truncated power series p^{-k} * F with F integral, or the literal zero
/// ideal. Coefficients of total degree > D are discarded by every operation.
class Series {
public:
    explicit Series(SeriesRing ring);

    static Series zero_ideal(const SeriesRing& ring);
    static Series constant(const SeriesRing& ring, const PadicScalar& c);
    static Series from_int(const SeriesRing& ring, long long c);
    static Series one(const SeriesRing& ring) { return from_int(ring, 1); }
    /// The variable t_i.
    static Series variable(const SeriesRing& ring, int i);
    static Series monomial(const SeriesRing& ring, const Exponent& e, const PadicScalar& c);
    /// The group element prod_j (1 + t_j)^{c_j}, expanded to degree D.
    static Series group_element(const SeriesRing& ring, const std::vector<long long>& c);

    const SeriesRing& ring() const noexcept { return ring_; }
    int denom_exp() const noexcept { return k_; }
    bool is_zero_ideal() const noexcept { return zero_; }
    bool residues_zero() const noexcept;

    PadicScalar coeff(const Exponent& e) const;
    PadicScalar coeff_at(std::size_t slot) const;
    void set_coeff(const Exponent& e, const PadicScalar& c);
    const u64* raw(std::size_t slot) const { return c_.data() + slot * ring_.phi(); }
    u64* raw(std::size_t slot) { return c_.data() + slot * ring_.phi(); }
    const std::vector<u64>& data() const noexcept { return c_; }

    /// Nonzero terms in lexicographic exponent order.
    std::vector<std::pair<Exponent, PadicScalar>> terms() const;

    Series operator+(const Series& o) const;
    Series operator-(const Series& o) const;
    Series operator*(const Series& o) const;
    Series operator-() const;
    Series scaled(const PadicScalar& c) const;
    Series scaled(const QScalar& c) const;
    Series pow(int e) const;
    bool operator==(const Series& o) const;
    bool operator!=(const Series& o) const { return !(*this == o); }

    /// Multiplies by p^e for any integer e.
    Series times_p_power(int e) const;
    Series at_level(int level) const;
    /// Moves the value into a ring with the same d: coefficients are reduced
    /// or reinterpreted to the new precision, truncated to the new degree and
    /// embedded into a level that must not be lower.
    Series rebased(const SeriesRing& ring) const;
    /// Builds p^{-k} * (integral residues) on the ring's slot grid.
    static Series from_data(const SeriesRing& ring, std::vector<u64> data, int k);

private:
    void normalize();
    SeriesRing ring_;
    int k_ = 0;
    bool zero_ = false;
    std::vector<u64> c_;
};

// ---------------------------------------------------------------------------
// Structural operations

/// mu(f): minimum coefficient valuation minus the denominator exponent.
Valuation mu_invariant(const Series& f);

/// f with every variable except t_var set to 0, in the same ring.
Series restrict_to(const Series& f, int var = 0);

/// Coefficients of the integral part on the group elements sigma^e with
/// sigma_i = 1 + t_i, laid out on the ring's slot grid.
std::vector<u64> to_group_ring(const Series& f);
Series from_group_ring(const SeriesRing& ring, std::vector<u64> g, int k);

/// Coefficients (raw residues of length phi) on group elements sigma^E with
/// arbitrary integer exponents.
using GroupTerms = std::map<std::vector<BigInt>, std::vector<u64>>;
/// p^{-k} * sum_E c_E * prod_j (1 + t_j)^{E_j}, expanded to degree D.
Series expand_group_terms(const SeriesRing& ring, const GroupTerms& terms, int k);

/// zeta_{p^level} - 1, or p at level 0.
PadicScalar uniformizer(const Zmod& z, int level);

/// (1 + t_i) -> (1 + t_i)^{-1}.
Series sharp(const Series& f);

/// A surjection Z_p^d -> Z_p^e given by an e x d integer matrix M; the
/// variable sigma_i is sent to prod_j sigma'_j^{M[j][i]}.
struct SubgroupMap {
    IntMatrix M;
    int source = 0;

    SubgroupMap() = default;
    explicit SubgroupMap(IntMatrix m, int source_dim = -1);
    int rows() const noexcept { return static_cast<int>(M.size()); }
    int cols() const noexcept { return source; }
    static SubgroupMap identity(int d);
    static SubgroupMap projection(int d, const std::vector<int>& keep);
    SubgroupMap compose_after(const SubgroupMap& first) const;  // this o first
    std::vector<long long> apply(const std::vector<long long>& v) const;
};

/// Checks that M has a right inverse mod p.
bool is_surjective_mod_p(const SubgroupMap& m, u64 p);

Series specialize(const Series& f, const SubgroupMap& m);

/// Reorders the variables: variable i of the result is variable perm[i] of f.
Series permute_variables(const Series& f, const std::vector<int>& perm);

/// Substitution t_i -> zeta^{c_i} - 1 with zeta = zeta_{p^level}. Returns
/// p^{-k} times the evaluated integral part.
QScalar evaluate(const Series& f, int level, const std::vector<long long>& c);

// ---------------------------------------------------------------------------
// Weierstrass preparation

/// t_v^lambda + sum_{i<lambda} a_i t_v^i with a_i series in the other variables.
struct DistinguishedPoly {
    int var = 0;
    int lambda = 0;
    std::vector<Series> tail;  // a_0..a_{lambda-1}, in the ring of the other d-1 variables
    Series to_series(const SeriesRing& ring) const;
};

struct Prepared {
    Valuation mu;
    Series unit;
    DistinguishedPoly poly;
    /// p-adic digits to which poly is certified before truncation losses: N - mu.
    Rational certified;
};

/// Checks mu(f(.., t_var, ..)|_{others = 0}) == mu(f).
bool preparation_hypothesis(const Series& f, int var = 0);

/// f = pi^{mu*phi} * unit * P. Throws HypothesisFailed or PrecisionExhausted.
Prepared weierstrass_prepare(const Series& f, int var = 0);

/// Ideal equality of f and g, decided through preparation. Throws
/// Indeterminate when the hypothesis fails for every variable ordering.
bool associates(const Series& f, const Series& g);

/// Unit of O[[t]]: integral after normalisation with unit constant term.
bool is_unit(const Series& f);
/// Unit of Q (x) O[[t]]: a nonzero constant times a unit.
bool is_unit_rational(const Series& f);

/// 1 / f for f with is_unit_rational(f), to degree D.
Series unit_inverse(const Series& f);

}  // namespace iwasawa
