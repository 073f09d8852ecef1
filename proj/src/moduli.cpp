#include "iwasawa/moduli.hpp"

#include "iwasawa/errors.hpp"
#include "iwasawa/zmod.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace iwasawa {

namespace {

using Elem = GF::Elem;
using Digits = std::vector<std::uint32_t>;

Digits to_digits(std::uint32_t x, std::uint32_t p, int m)
{
    Digits d(static_cast<std::size_t>(m));
    for (auto& c : d) {
        c = x % p;
        x /= p;
    }
    return d;
}

std::uint32_t from_digits(const Digits& d, std::uint32_t p)
{
    std::uint32_t x = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) x = x * p + *it;
    return x;
}

// Product of two residues of F_p[x] modulo the monic polynomial mod (length m + 1).
Digits mul_mod(const Digits& a, const Digits& b, const Digits& mod, std::uint32_t p)
{
    const std::size_t m = mod.size() - 1;
    std::vector<std::uint64_t> r(2 * m, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + std::uint64_t{a[i]} * b[j]) % p;
    for (std::size_t k = r.size(); k-- > m;) {
        const std::uint64_t c = r[k];
        if (c == 0) continue;
        for (std::size_t j = 0; j <= m; ++j) r[k - m + j] = (r[k - m + j] + (p - c) * mod[j]) % p;
    }
    Digits out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = static_cast<std::uint32_t>(r[i]);
    return out;
}

// The multiplicative order of x in F_p[t]/(mod) when mod is irreducible; 0 when
// x is not invertible or mod is reducible.
std::uint64_t order_of(const Digits& x, const Digits& mod, std::uint32_t p, std::uint32_t q)
{
    Digits one(mod.size() - 1, 0);
    one[0] = 1;
    Digits y = x;
    for (std::uint64_t k = 1; k < q; ++k) {
        if (y == one) return k;
        y = mul_mod(y, x, mod, p);
    }
    return 0;
}

}  // namespace

GF::GF(std::uint32_t q) : q_(q), p_(0), m_(0)
{
    if (q < 2 || q > 65536) throw Error(Errc::InvalidArgument, "field size out of range");
    for (std::uint32_t c = 2; c <= q; ++c)
        if (q % c == 0) {
            p_ = c;
            break;
        }
    std::uint32_t r = q;
    while (r % p_ == 0) {
        r /= p_;
        ++m_;
    }
    if (r != 1) throw Error(Errc::InvalidArgument, "field size is not a prime power");

    // Search monic moduli in lexicographic order for one that makes t+c (or t)
    // a generator; such a modulus is irreducible and primitive.
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    Digits mod(static_cast<std::size_t>(m_) + 1, 0);
    mod[static_cast<std::size_t>(m_)] = 1;
    for (std::uint32_t code = 0;; ++code) {
        Digits low = to_digits(code, p_, m_);
        std::copy(low.begin(), low.end(), mod.begin());
        if (mod[0] == 0 && m_ > 1) continue;
        bool found = false;
        for (std::uint32_t g = 1; g < q_ && !found; ++g) {
            const Digits gd = to_digits(g, p_, m_);
            if (order_of(gd, mod, p_, q_) != q_ - 1) continue;
            Digits y(static_cast<std::size_t>(m_), 0);
            y[0] = 1;
            for (std::uint32_t k = 0; k + 1 < q_; ++k) {
                const Elem e = from_digits(y, p_);
                exp_[k] = e;
                log_[e] = k;
                y = mul_mod(y, gd, mod, p_);
            }
            found = true;
        }
        if (found) break;
    }
}

Elem GF::add(Elem a, Elem b) const noexcept
{
    if (m_ == 1) return (a + b) % p_;
    Elem out = 0, scale = 1;
    for (int i = 0; i < m_; ++i) {
        out += ((a % p_ + b % p_) % p_) * scale;
        a /= p_;
        b /= p_;
        scale *= p_;
    }
    return out;
}

Elem GF::sub(Elem a, Elem b) const noexcept
{
    if (m_ == 1) return (a + p_ - b) % p_;
    Elem out = 0, scale = 1;
    for (int i = 0; i < m_; ++i) {
        out += ((a % p_ + p_ - b % p_) % p_) * scale;
        a /= p_;
        b /= p_;
        scale *= p_;
    }
    return out;
}

Elem GF::mul(Elem a, Elem b) const noexcept
{
    if (a == 0 || b == 0) return 0;
    return exp_[(static_cast<std::uint64_t>(log_[a]) + log_[b]) % (q_ - 1)];
}

Elem GF::inv(Elem a) const
{
    if (a == 0) throw Error(Errc::NotAUnit, "division by zero in GF(q)");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Elem GF::pow(Elem a, std::uint64_t e) const noexcept
{
    if (e == 0) return 1;
    if (a == 0) return 0;
    return exp_[static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1)) % (q_ - 1)];
}

Elem GF::from_int(long long v) const noexcept
{
    const long long P = static_cast<long long>(p_);
    return static_cast<Elem>(((v % P) + P) % P);
}

Elem GF::pth_root(Elem x) const noexcept { return pow(x, q_ / p_); }

namespace fpoly {

namespace {

void trim(FPoly& f)
{
    while (!f.empty() && f.back() == 0) f.pop_back();
}

FPoly powmod(const GF& F, FPoly a, std::uint64_t e, const FPoly& m)
{
    FPoly r{1};
    a = divmod(F, a, m).second;
    while (e > 0) {
        if (e & 1) r = divmod(F, mul(F, r, a), m).second;
        a = divmod(F, mul(F, a, a), m).second;
        e >>= 1;
    }
    return divmod(F, r, m).second;
}

FPoly exact_div(const GF& F, const FPoly& a, const FPoly& b) { return divmod(F, a, b).first; }

void equal_degree(const GF& F, const FPoly& g, int i, std::mt19937_64& rng, std::vector<FPoly>& out)
{
    if (degree(g) == i) {
        out.push_back(monic(F, g));
        return;
    }
    const int n = degree(g);
    for (;;) {
        FPoly a(static_cast<std::size_t>(n));
        for (auto& c : a) c = static_cast<Elem>(rng() % F.q());
        trim(a);
        if (degree(a) < 1) continue;
        // a^{(q^i - 1)/2} = (prod_{j<i} a^{q^j})^{(q-1)/2}
        FPoly prod{1}, frob = a;
        for (int j = 0; j < i; ++j) {
            prod = divmod(F, mul(F, prod, frob), g).second;
            frob = powmod(F, frob, F.q(), g);
        }
        const FPoly b = sub(F, powmod(F, prod, (F.q() - 1) / 2, g), FPoly{1});
        const FPoly c = gcd(F, g, b);
        if (degree(c) > 0 && degree(c) < n) {
            equal_degree(F, c, i, rng, out);
            equal_degree(F, exact_div(F, g, c), i, rng, out);
            return;
        }
    }
}

void squarefree_factors(const GF& F, FPoly s, std::mt19937_64& rng, std::vector<FPoly>& out)
{
    const FPoly x{0, 1};
    FPoly h = x;
    for (int i = 1; 2 * i <= degree(s); ++i) {
        h = powmod(F, h, F.q(), s);
        const FPoly g = gcd(F, s, sub(F, h, x));
        if (degree(g) > 0) {
            equal_degree(F, g, i, rng, out);
            s = exact_div(F, s, g);
            h = divmod(F, h, s).second;
        }
    }
    if (degree(s) > 0) out.push_back(monic(F, s));
}

void collect(const GF& F, const FPoly& f0, std::mt19937_64& rng, std::set<FPoly>& out)
{
    const FPoly f = monic(F, f0);
    if (degree(f) <= 0) return;
    const FPoly d = derivative(F, f);
    if (d.empty()) {
        FPoly r;
        for (std::size_t i = 0; i < f.size(); i += F.p()) r.push_back(F.pth_root(f[i]));
        collect(F, r, rng, out);
        return;
    }
    const FPoly g = gcd(F, f, d);
    std::vector<FPoly> found;
    squarefree_factors(F, exact_div(F, f, g), rng, found);
    out.insert(found.begin(), found.end());
    collect(F, g, rng, out);
}

}  // namespace

int degree(const FPoly& f) noexcept { return static_cast<int>(f.size()) - 1; }

FPoly add(const GF& F, const FPoly& a, const FPoly& b)
{
    FPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}

FPoly sub(const GF& F, const FPoly& a, const FPoly& b)
{
    FPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}

FPoly mul(const GF& F, const FPoly& a, const FPoly& b)
{
    if (a.empty() || b.empty()) return {};
    FPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    trim(r);
    return r;
}

FPoly scale(const GF& F, const FPoly& a, Elem c)
{
    FPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
    trim(r);
    return r;
}

std::pair<FPoly, FPoly> divmod(const GF& F, const FPoly& a, const FPoly& b)
{
    if (b.empty()) throw Error(Errc::InvalidArgument, "polynomial division by zero");
    FPoly r = a;
    trim(r);
    if (degree(r) < degree(b)) return {{}, r};
    FPoly q(r.size() - b.size() + 1, 0);
    const Elem lead = F.inv(b.back());
    for (std::size_t k = q.size(); k-- > 0;) {
        const Elem c = F.mul(r[k + b.size() - 1], lead);
        q[k] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[k + j] = F.sub(r[k + j], F.mul(c, b[j]));
    }
    trim(q);
    trim(r);
    return {q, r};
}

FPoly gcd(const GF& F, FPoly a, FPoly b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        FPoly r = divmod(F, a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(F, a);
}

FPoly derivative(const GF& F, const FPoly& f)
{
    FPoly r;
    for (std::size_t i = 1; i < f.size(); ++i) r.push_back(F.mul(F.from_int(static_cast<long long>(i)), f[i]));
    trim(r);
    return r;
}

FPoly monic(const GF& F, const FPoly& f)
{
    FPoly r = f;
    trim(r);
    if (r.empty()) return r;
    return scale(F, r, F.inv(r.back()));
}

Elem eval(const GF& F, const FPoly& f, Elem x)
{
    Elem acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = F.add(F.mul(acc, x), *it);
    return acc;
}

std::vector<FPoly> irreducible_factors(const GF& F, const FPoly& f)
{
    if (degree(f) < 0) throw Error(Errc::InvalidArgument, "cannot factor the zero polynomial");
    std::mt19937_64 rng(0x5eed);
    std::set<FPoly> out;
    collect(F, f, rng, out);
    std::vector<FPoly> v(out.begin(), out.end());
    std::sort(v.begin(), v.end(), [](const FPoly& a, const FPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    });
    return v;
}

int order_at(const GF& F, const FPoly& f, const FPoly& v)
{
    if (degree(f) < 0) return kInfiniteOrder;
    int k = 0;
    FPoly g = f;
    for (;;) {
        auto [q, r] = divmod(F, g, v);
        if (!r.empty()) return k;
        g = std::move(q);
        ++k;
    }
}

}  // namespace fpoly

const char* fiber_name(FiberType t) noexcept
{
    switch (t) {
    case FiberType::Good: return "good";
    case FiberType::Multiplicative: return "multiplicative";
    case FiberType::Additive: return "additive";
    }
    return "good";
}

FPoly discriminant(const GF& F, const WeierstrassPair& w)
{
    const FPoly c = fpoly::sub(F, fpoly::mul(F, fpoly::mul(F, w.g2, w.g2), w.g2), fpoly::mul(F, w.g3, w.g3));
    return fpoly::scale(F, c, F.inv(F.from_int(1728)));
}

namespace {

void check_pair(const WeierstrassPair& w, const GF& F)
{
    if (F.p() <= 3) throw Error(Errc::CharTooSmall, "the characteristic must exceed 3");
    if (w.n < 0) throw Error(Errc::InvalidDegree, "negative twist degree");
    if (fpoly::degree(w.g2) > 4 * w.n) throw Error(Errc::InvalidDegree, "deg g2 exceeds 4n");
    if (fpoly::degree(w.g3) > 6 * w.n) throw Error(Errc::InvalidDegree, "deg g3 exceeds 6n");
    for (Elem c : w.g2)
        if (c >= F.q()) throw Error(Errc::InvalidArgument, "coefficient outside GF(q)");
    for (Elem c : w.g3)
        if (c >= F.q()) throw Error(Errc::InvalidArgument, "coefficient outside GF(q)");
}

FiberInfo fiber(int a, int b, int c)
{
    FiberInfo f;
    f.ord_g2 = a;
    f.ord_g3 = b;
    f.ord_delta = c;
    f.type = c == 0 ? FiberType::Good : (a == 0 ? FiberType::Multiplicative : FiberType::Additive);
    f.bound_ok = std::min(3LL * a, 2LL * b) < 12;
    return f;
}

int order_at_infinity(const FPoly& f, int bound) { return f.empty() ? kInfiniteOrder : bound - fpoly::degree(f); }

}  // namespace

FiberReport classify_fibers(const WeierstrassPair& w)
{
    const GF F(w.q);
    check_pair(w, F);
    FiberReport out;
    const FPoly delta = discriminant(F, w);
    out.delta_zero = delta.empty();
    if (out.delta_zero) return out;

    FPoly support{1};
    for (const FPoly* f : {&w.g2, &w.g3, &delta})
        if (!f->empty()) support = fpoly::mul(F, support, *f);
    for (const FPoly& v : fpoly::irreducible_factors(F, support)) {
        FiberInfo f = fiber(fpoly::order_at(F, w.g2, v), fpoly::order_at(F, w.g3, v), fpoly::order_at(F, delta, v));
        f.point = v;
        f.degree = fpoly::degree(v);
        out.fibers.push_back(std::move(f));
    }
    out.fibers.push_back(fiber(order_at_infinity(w.g2, 4 * w.n), order_at_infinity(w.g3, 6 * w.n), order_at_infinity(delta, 12 * w.n)));
    out.member = std::all_of(out.fibers.begin(), out.fibers.end(), [](const FiberInfo& f) { return f.bound_ok; });
    return out;
}

bool membership(const WeierstrassPair& w) { return classify_fibers(w).member; }

WeierstrassPair construct_semistable(std::uint32_t q, int n, std::uint64_t seed, int retries)
{
    const GF F(q);
    if (F.p() <= 3) throw Error(Errc::CharTooSmall, "the characteristic must exceed 3");
    if (n < 1) throw Error(Errc::InvalidDegree, "the construction needs n >= 1");
    std::mt19937_64 rng(seed);
    auto sample = [&](int deg) {
        FPoly f(static_cast<std::size_t>(deg) + 1);
        for (auto& c : f) c = static_cast<Elem>(rng() % q);
        while (!f.empty() && f.back() == 0) f.pop_back();
        return f;
    };
    auto reduced = [&](const FPoly& f, int bound) {
        if (fpoly::degree(f) < bound - 1) return false;  // order at infinity at most 1
        const FPoly d = fpoly::derivative(F, f);
        return !d.empty() && fpoly::degree(fpoly::gcd(F, f, d)) == 0;
    };
    for (int attempt = 0; attempt < retries; ++attempt) {
        WeierstrassPair w{q, n, sample(4 * n), sample(6 * n)};
        if (!reduced(w.g2, 4 * n) || !reduced(w.g3, 6 * n)) continue;
        if (fpoly::degree(fpoly::gcd(F, w.g2, w.g3)) != 0) continue;
        if (fpoly::degree(w.g2) < 4 * n && fpoly::degree(w.g3) < 6 * n) continue;
        if (!reduced(discriminant(F, w), 12 * n)) continue;
        const FiberReport r = classify_fibers(w);
        const bool semistable = std::none_of(r.fibers.begin(), r.fibers.end(), [](const FiberInfo& f) { return f.type == FiberType::Additive; });
        if (r.member && semistable) return w;
    }
    throw Error(Errc::SearchExhausted, "no semistable pair within the retry budget");
}

WeierstrassPair rescale(const WeierstrassPair& w, GF::Elem u)
{
    const GF F(w.q);
    if (u == 0) throw Error(Errc::InvalidArgument, "rescaling by zero");
    return {w.q, w.n, fpoly::scale(F, w.g2, F.pow(u, 4)), fpoly::scale(F, w.g3, F.pow(u, 6))};
}

}  // namespace iwasawa
