#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace iwasawa {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;

/// Residues modulo p^N for a prime p. Residues are kept in [0, p^N) and
/// p^N must stay below 2^62 so that sums never overflow a machine word.
class Zmod {
public:
    Zmod(u64 p, int N);

    u64 p() const noexcept { return p_; }
    int N() const noexcept { return N_; }
    u64 modulus() const noexcept { return mod_; }
    u64 p_pow(int k) const noexcept;

    u64 add(u64 a, u64 b) const noexcept
    {
        u64 s = a + b;
        return s >= mod_ ? s - mod_ : s;
    }
    u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + mod_ - b; }
    u64 neg(u64 a) const noexcept { return a == 0 ? 0 : mod_ - a; }
    u64 mul(u64 a, u64 b) const noexcept { return static_cast<u64>(static_cast<u128>(a) * b % mod_); }
    u64 reduce(u128 x) const noexcept { return static_cast<u64>(x % mod_); }

    u64 from_int(long long v) const noexcept;
    u64 from_big(const BigInt& v) const;
    u64 from_decimal(const std::string& s) const;

    /// Signed representative in (-p^N/2, p^N/2].
    long long centered(u64 a) const noexcept;

    /// p-adic valuation of a residue; N for zero.
    int vp(u64 a) const noexcept;
    u64 pow(u64 a, u64 e) const noexcept;
    /// Inverse of a residue prime to p. Throws Error(NotAUnit) otherwise.
    u64 inv(u64 a) const;

    /// How many products of two residues a u128 accumulator can absorb.
    u64 lazy_budget() const noexcept { return budget_; }

    bool operator==(const Zmod& o) const noexcept { return p_ == o.p_ && N_ == o.N_; }
    bool operator!=(const Zmod& o) const noexcept { return !(*this == o); }

private:
    u64 p_;
    int N_;
    u64 mod_;
    u64 budget_;
};

bool is_prime(u64 n) noexcept;

/// v_p of a nonzero big integer (large value for zero).
int vp_big(const BigInt& v, u64 p);

/// Binomial coefficients C(m, j) for j = 0..len-1 reduced mod p^N, exact for
/// any integer m (negative m gives the series of (1+s)^m).
std::vector<u64> binomial_row(const Zmod& z, const BigInt& m, int len);

}  // namespace iwasawa
