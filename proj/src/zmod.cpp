#include "iwasawa/zmod.hpp"

#include "iwasawa/errors.hpp"

#include <limits>

namespace iwasawa {

bool is_prime(u64 n) noexcept
{
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Zmod::Zmod(u64 p, int N) : p_(p), N_(N), mod_(1)
{
    if (!is_prime(p)) throw Error(Errc::InvalidArgument, "p = " + std::to_string(p) + " is not prime");
    if (N < 1) throw Error(Errc::InvalidArgument, "precision N must be at least 1");
    for (int i = 0; i < N; ++i) {
        if (mod_ > (u64{1} << 62) / p) throw Error(Errc::InvalidArgument, "p^N exceeds 2^62");
        mod_ *= p;
    }
    u128 sq = static_cast<u128>(mod_ - 1) * (mod_ - 1);
    u128 cap = std::numeric_limits<u128>::max();
    u128 b = sq == 0 ? cap : cap / sq;
    budget_ = b > std::numeric_limits<u64>::max() ? std::numeric_limits<u64>::max() : static_cast<u64>(b);
}

u64 Zmod::p_pow(int k) const noexcept
{
    u64 r = 1;
    for (int i = 0; i < k; ++i) r *= p_;
    return r;
}

u64 Zmod::from_int(long long v) const noexcept
{
    if (v >= 0) return static_cast<u64>(v) % mod_;
    u64 r = static_cast<u64>(-(v + 1)) % mod_;
    return mod_ - 1 - r;
}

u64 Zmod::from_big(const BigInt& v) const
{
    BigInt r = v % mod_;
    if (r < 0) r += mod_;
    return static_cast<u64>(r);
}

u64 Zmod::from_decimal(const std::string& s) const
{
    if (s.empty()) throw Error(Errc::InvalidArgument, "empty integer literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw Error(Errc::InvalidArgument, "bad integer literal '" + s + "'");
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') throw Error(Errc::InvalidArgument, "bad integer literal '" + s + "'");
    return from_big(BigInt(s));
}

long long Zmod::centered(u64 a) const noexcept
{
    return a > mod_ / 2 ? -static_cast<long long>(mod_ - a) : static_cast<long long>(a);
}

int Zmod::vp(u64 a) const noexcept
{
    if (a == 0) return N_;
    int v = 0;
    while (a % p_ == 0) {
        a /= p_;
        ++v;
    }
    return v;
}

u64 Zmod::pow(u64 a, u64 e) const noexcept
{
    u64 r = 1 % mod_;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

u64 Zmod::inv(u64 a) const
{
    if (a % p_ == 0) throw Error(Errc::NotAUnit, "residue is divisible by p");
    __int128 t = 0, nt = 1, r = mod_, nr = a;
    while (nr != 0) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (t < 0) t += mod_;
    return static_cast<u64>(t);
}

int vp_big(const BigInt& v, u64 p)
{
    if (v == 0) return std::numeric_limits<int>::max() / 2;
    BigInt x = v < 0 ? BigInt(-v) : v;
    int k = 0;
    while (x % p == 0) {
        x /= p;
        ++k;
    }
    return k;
}

std::vector<u64> binomial_row(const Zmod& z, const BigInt& m, int len)
{
    std::vector<u64> row(static_cast<std::size_t>(len), 0);
    if (len == 0) return row;
    BigInt c = 1;
    row[0] = 1 % z.modulus();
    for (int j = 1; j < len; ++j) {
        c = c * (m - (j - 1)) / j;
        row[static_cast<std::size_t>(j)] = z.from_big(c);
        if (c == 0) break;
    }
    return row;
}

}  // namespace iwasawa
