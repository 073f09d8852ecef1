#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace iwasawa {

/// The finite field with q = p^m elements. Elements are integers in [0, q)
/// whose base-p digits are coordinates on the power basis of a fixed monic
/// irreducible polynomial; arithmetic goes through log tables.
class GF {
public:
    using Elem = std::uint32_t;

    explicit GF(std::uint32_t q);

    std::uint32_t q() const noexcept { return q_; }
    std::uint32_t p() const noexcept { return p_; }
    int m() const noexcept { return m_; }

    Elem add(Elem a, Elem b) const noexcept;
    Elem sub(Elem a, Elem b) const noexcept;
    Elem neg(Elem a) const noexcept { return sub(0, a); }
    Elem mul(Elem a, Elem b) const noexcept;
    Elem inv(Elem a) const;
    Elem pow(Elem a, std::uint64_t e) const noexcept;
    Elem from_int(long long v) const noexcept;
    /// The unique a with a^p = x.
    Elem pth_root(Elem x) const noexcept;

    bool operator==(const GF& o) const noexcept { return q_ == o.q_; }

private:
    std::uint32_t q_, p_;
    int m_;
    std::vector<Elem> add_;  // digit-wise addition table for m > 1, empty otherwise
    std::vector<Elem> exp_, log_;
};

/// Polynomial over GF(q), coefficients from low to high with no trailing zeros.
using FPoly = std::vector<GF::Elem>;

namespace fpoly {
int degree(const FPoly& f) noexcept;
FPoly add(const GF& F, const FPoly& a, const FPoly& b);
FPoly sub(const GF& F, const FPoly& a, const FPoly& b);
FPoly mul(const GF& F, const FPoly& a, const FPoly& b);
FPoly scale(const GF& F, const FPoly& a, GF::Elem c);
/// Quotient and remainder; b must be nonzero.
std::pair<FPoly, FPoly> divmod(const GF& F, const FPoly& a, const FPoly& b);
FPoly gcd(const GF& F, FPoly a, FPoly b);
FPoly derivative(const GF& F, const FPoly& f);
FPoly monic(const GF& F, const FPoly& f);
GF::Elem eval(const GF& F, const FPoly& f, GF::Elem x);
/// The distinct monic irreducible factors of a nonzero f, sorted.
std::vector<FPoly> irreducible_factors(const GF& F, const FPoly& f);
/// Multiplicity of the irreducible v in f; a large sentinel for f = 0.
int order_at(const GF& F, const FPoly& f, const FPoly& v);
}  // namespace fpoly

/// (g_2, g_3) with deg g_2 <= 4n and deg g_3 <= 6n over GF(q), read as
/// sections over P^1.
struct WeierstrassPair {
    std::uint32_t q = 5;
    int n = 1;
    FPoly g2, g3;

    bool operator==(const WeierstrassPair& o) const = default;
};

enum class FiberType { Good, Multiplicative, Additive };
const char* fiber_name(FiberType t) noexcept;

struct FiberInfo {
    FPoly point;  // monic irreducible; empty for the point at infinity
    int degree = 1;
    int ord_g2 = 0, ord_g3 = 0, ord_delta = 0;
    FiberType type = FiberType::Good;
    bool bound_ok = true;  // min(3 ord g2, 2 ord g3) < 12
};

struct FiberReport {
    bool delta_zero = false;
    bool member = false;
    std::vector<FiberInfo> fibers;  // finite points in order, then infinity
};

inline constexpr int kInfiniteOrder = 1 << 20;

/// (g_2^3 - g_3^2) / 1728.
FPoly discriminant(const GF& F, const WeierstrassPair& w);

/// Orders and types at every point where g_2 g_3 Delta vanishes, and at
/// infinity. Throws CharTooSmall for p <= 3 and InvalidDegree for oversized
/// polynomials.
FiberReport classify_fibers(const WeierstrassPair& w);
bool membership(const WeierstrassPair& w);

/// Rejection sampling following the semistable construction: reduced g_2,
/// g_3 prime to it and reduced, and Delta reduced. Throws SearchExhausted.
WeierstrassPair construct_semistable(std::uint32_t q, int n, std::uint64_t seed, int retries = 10000);

/// (u^4 g_2, u^6 g_3): the same point of the moduli space.
WeierstrassPair rescale(const WeierstrassPair& w, GF::Elem u);

}  // namespace iwasawa
