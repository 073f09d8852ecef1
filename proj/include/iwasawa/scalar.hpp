#pragma once

#include "iwasawa/zmod.hpp"

#include <boost/rational.hpp>

#include <string>
#include <vector>

namespace iwasawa {

using Rational = boost::rational<long long>;

/// A p-adic valuation: an exact rational, +infinity (the literal zero), or
/// the "precision exhausted" tag for values that vanish at working precision.
class Valuation {
public:
    enum class Kind { Finite, Infinite, Exhausted };

    Valuation() = default;
    static Valuation finite(Rational v) { return Valuation(Kind::Finite, v); }
    static Valuation finite(long long num, long long den = 1) { return finite(Rational(num, den)); }
    static Valuation infinite() { return Valuation(Kind::Infinite, 0); }
    static Valuation exhausted() { return Valuation(Kind::Exhausted, 0); }

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::Finite; }
    bool is_infinite() const noexcept { return kind_ == Kind::Infinite; }
    bool is_exhausted() const noexcept { return kind_ == Kind::Exhausted; }
    Rational value() const noexcept { return value_; }
    /// Finite and equal to 0, i.e. the valuation of a unit.
    bool is_zero() const noexcept { return kind_ == Kind::Finite && value_ == Rational(0); }

    /// "3", "1/2", "inf" or "exhausted".
    std::string str() const;
    static Valuation parse(const std::string& s);

    bool operator==(const Valuation& o) const noexcept
    {
        return kind_ == o.kind_ && (kind_ != Kind::Finite || value_ == o.value_);
    }
    bool operator!=(const Valuation& o) const noexcept { return !(*this == o); }

    /// Finite values compare by value; infinity exceeds every finite value.
    /// Exhausted values are treated as "at least the working precision".
    bool at_least(const Rational& bound) const noexcept { return kind_ != Kind::Finite || value_ >= bound; }

private:
    Valuation(Kind k, Rational v) : kind_(k), value_(v) {}
    Kind kind_ = Kind::Exhausted;
    Rational value_ = 0;
};

Valuation operator+(const Valuation& a, const Valuation& b);

/// Arithmetic in Z/p^N[x]/Phi_{p^n}(x) on raw coefficient vectors of length
/// phi(p^n). Level 0 is plain Z/p^N.
class Cyclo {
public:
    Cyclo(const Zmod& z, int level);

    const Zmod& zmod() const noexcept { return z_; }
    int level() const noexcept { return level_; }
    std::size_t phi() const noexcept { return phi_; }
    /// p^n, the order of the root of unity.
    u64 order() const noexcept { return order_; }

    void mul(const u64* a, const u64* b, u64* out) const;
    /// Adds the plain product a*b into acc (length 2*phi-1).
    void mul_acc(const u64* a, const u64* b, u128* acc) const;
    /// Folds 2*phi-1 accumulators into a reduced element.
    void finish(const u128* acc, u64* out) const;
    /// Folds residues mod (x^{p^n} - 1) held in buf (length p^n) into out.
    void fold_cyclic(std::vector<u64>& buf, u64* out) const;
    /// Adds c * x^j (j taken mod p^n) into a cyclic buffer of length p^n.
    void zeta_pow(long long j, u64* out) const;
    /// Image of an element of a lower level under x -> x^{p^(level-from)}.
    void embed(const u64* in, int from_level, u64* out) const;

    bool is_zero(const u64* a) const noexcept;
    Valuation valuation(const u64* a) const;
    /// Sum of coefficients, i.e. the image under zeta -> 1.
    u64 augmentation(const u64* a) const noexcept;
    void inverse(const u64* a, u64* out) const;
    /// In-place division by pi = zeta - 1 (by p at level 0). The caller
    /// guarantees valuation >= 1/phi; the lost top digit is filled with 0.
    void div_pi(u64* a) const;
    /// Division by pi^r: whole powers of p first, then single pi steps.
    void div_pi_pow(u64* a, long long r) const;
    /// Expresses a in the basis 1, pi, pi^2, ... and back.
    void to_pi_basis(u64* a) const;
    void from_pi_basis(u64* a) const;

private:
    Zmod z_;
    int level_;
    std::size_t phi_;
    u64 order_;
    std::size_t m_;
    mutable std::vector<u64> p_over_pi_;
    mutable std::vector<u64> eps_inv_;  // p / pi^phi
};

/// An element of O = Z_p[zeta_{p^n}] modulo p^N, stored on the power basis
/// of zeta.
class PadicScalar {
public:
    PadicScalar(const Zmod& z, int level = 0);

    static PadicScalar from_int(const Zmod& z, long long v, int level = 0);
    static PadicScalar from_residue(const Zmod& z, u64 v, int level = 0);
    static PadicScalar from_coeffs(const Zmod& z, int level, std::vector<u64> coeffs);
    /// zeta_{p^level}^j.
    static PadicScalar zeta_pow(const Zmod& z, int level, long long j);

    const Zmod& zmod() const noexcept { return z_; }
    int level() const noexcept { return level_; }
    std::size_t phi() const noexcept { return c_.size(); }
    const std::vector<u64>& coeffs() const noexcept { return c_; }
    u64 operator[](std::size_t i) const { return c_[i]; }

    PadicScalar at_level(int level) const;
    bool is_zero() const noexcept;
    /// True when the element lies in Z_p (only the constant coordinate is set).
    bool is_rational() const noexcept;

    PadicScalar operator+(const PadicScalar& o) const;
    PadicScalar operator-(const PadicScalar& o) const;
    PadicScalar operator*(const PadicScalar& o) const;
    PadicScalar operator-() const;
    bool operator==(const PadicScalar& o) const;
    bool operator!=(const PadicScalar& o) const { return !(*this == o); }

    Valuation valuation() const;
    PadicScalar inverse() const;
    PadicScalar pow(long long e) const;
    /// Exact division by pi^r; requires valuation >= r/phi.
    PadicScalar div_pi(int r) const;

    std::string str() const;

private:
    Zmod z_;
    int level_;
    std::vector<u64> c_;
};

/// p^{-k} * a with a integral: an element of Q_p(zeta). Normalised so that k
/// is minimal.
class QScalar {
public:
    QScalar(PadicScalar a, int k = 0);

    const PadicScalar& numerator() const noexcept { return a_; }
    int denom_exp() const noexcept { return k_; }
    int level() const noexcept { return a_.level(); }
    const Zmod& zmod() const noexcept { return a_.zmod(); }

    /// p^e for any integer e.
    static QScalar p_power(const Zmod& z, int e, int level = 0);

    QScalar operator+(const QScalar& o) const;
    QScalar operator-(const QScalar& o) const;
    QScalar operator*(const QScalar& o) const;
    QScalar operator-() const;
    bool operator==(const QScalar& o) const;
    bool operator!=(const QScalar& o) const { return !(*this == o); }

    bool is_zero() const noexcept { return a_.is_zero(); }
    bool is_integral() const noexcept { return k_ == 0; }
    Valuation valuation() const;
    QScalar inverse() const;
    /// The integral value; throws DenominatorNotCleared if k > 0.
    PadicScalar integral() const;

private:
    void normalize();
    PadicScalar a_;
    int k_;
};

std::size_t euler_phi_pow(u64 p, int n);

}  // namespace iwasawa
