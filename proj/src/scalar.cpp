#include "iwasawa/scalar.hpp"

#include "iwasawa/errors.hpp"

#include <algorithm>
#include <sstream>

namespace iwasawa {

std::size_t euler_phi_pow(u64 p, int n)
{
    if (n == 0) return 1;
    std::size_t r = static_cast<std::size_t>(p - 1);
    for (int i = 1; i < n; ++i) r *= static_cast<std::size_t>(p);
    return r;
}

std::string Valuation::str() const
{
    switch (kind_) {
    case Kind::Infinite: return "inf";
    case Kind::Exhausted: return "exhausted";
    case Kind::Finite: break;
    }
    std::ostringstream os;
    os << value_.numerator();
    if (value_.denominator() != 1) os << '/' << value_.denominator();
    return os.str();
}

Valuation Valuation::parse(const std::string& s)
{
    if (s == "inf") return infinite();
    if (s == "exhausted") return exhausted();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return finite(std::stoll(s));
        return finite(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw Error(Errc::InvalidArgument, "bad valuation literal '" + s + "'");
    }
}

Valuation operator+(const Valuation& a, const Valuation& b)
{
    if (a.is_infinite() || b.is_infinite()) return Valuation::infinite();
    if (a.is_exhausted() || b.is_exhausted()) return Valuation::exhausted();
    return Valuation::finite(a.value() + b.value());
}

// ---------------------------------------------------------------------------

Cyclo::Cyclo(const Zmod& z, int level)
    : z_(z), level_(level), phi_(euler_phi_pow(z.p(), level)), order_(1), m_(0)
{
    if (level < 0) throw Error(Errc::InvalidArgument, "negative cyclotomic level");
    for (int i = 0; i < level; ++i) order_ *= z.p();
    if (level > 0) m_ = static_cast<std::size_t>(order_ / z.p());
    if (phi_ > 4096) throw Error(Errc::InvalidArgument, "cyclotomic level too large");
}

void Cyclo::mul(const u64* a, const u64* b, u64* out) const
{
    if (phi_ == 1) {
        out[0] = z_.mul(a[0], b[0]);
        return;
    }
    std::vector<u128> acc(2 * phi_ - 1, 0);
    mul_acc(a, b, acc.data());
    finish(acc.data(), out);
}

void Cyclo::mul_acc(const u64* a, const u64* b, u128* acc) const
{
    const bool lazy = z_.lazy_budget() >= 2 * phi_;
    const u64 mod = z_.modulus();
    for (std::size_t i = 0; i < phi_; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < phi_; ++j) {
            if (b[j] == 0) continue;
            u128 prod = static_cast<u128>(a[i]) * b[j];
            if (lazy)
                acc[i + j] += prod;
            else
                acc[i + j] = (acc[i + j] % mod + prod % mod) % mod;
        }
    }
}

void Cyclo::finish(const u128* acc, u64* out) const
{
    if (phi_ == 1) {
        out[0] = z_.reduce(acc[0]);
        return;
    }
    std::vector<u64> t(2 * phi_ - 1);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = z_.reduce(acc[i]);
    const std::size_t p = static_cast<std::size_t>(z_.p());
    for (std::size_t i = t.size(); i-- > phi_;) {
        u64 c = t[i];
        if (c == 0) continue;
        for (std::size_t j = 0; j + 1 < p; ++j) {
            std::size_t k = i - phi_ + j * m_;
            t[k] = z_.sub(t[k], c);
        }
    }
    std::copy(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(phi_), out);
}

void Cyclo::fold_cyclic(std::vector<u64>& buf, u64* out) const
{
    const std::size_t p = static_cast<std::size_t>(z_.p());
    for (std::size_t i = phi_; i < buf.size(); ++i) {
        u64 c = buf[i];
        if (c == 0) continue;
        for (std::size_t j = 0; j + 1 < p; ++j) {
            std::size_t k = i - phi_ + j * m_;
            buf[k] = z_.sub(buf[k], c);
        }
    }
    std::copy(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(phi_), out);
}

void Cyclo::zeta_pow(long long j, u64* out) const
{
    std::vector<u64> buf(order_, 0);
    long long o = static_cast<long long>(order_);
    long long r = ((j % o) + o) % o;
    buf[static_cast<std::size_t>(r)] = 1 % z_.modulus();
    fold_cyclic(buf, out);
}

void Cyclo::embed(const u64* in, int from_level, u64* out) const
{
    if (from_level > level_) throw Error(Errc::InvalidArgument, "cannot embed a higher level into a lower one");
    std::fill(out, out + phi_, 0);
    if (from_level == 0) {
        out[0] = in[0];
        return;
    }
    std::size_t step = 1;
    for (int i = from_level; i < level_; ++i) step *= static_cast<std::size_t>(z_.p());
    std::size_t from_phi = euler_phi_pow(z_.p(), from_level);
    for (std::size_t i = 0; i < from_phi; ++i) out[i * step] = in[i];
}

bool Cyclo::is_zero(const u64* a) const noexcept
{
    return std::all_of(a, a + phi_, [](u64 x) { return x == 0; });
}

u64 Cyclo::augmentation(const u64* a) const noexcept
{
    u64 s = 0;
    for (std::size_t i = 0; i < phi_; ++i) s = z_.add(s, a[i]);
    return s;
}

void Cyclo::to_pi_basis(u64* a) const
{
    // Taylor shift: a(x) -> a(1 + pi).
    for (std::size_t i = 0; i + 1 < phi_; ++i)
        for (std::size_t j = phi_ - 1; j-- > i;) a[j] = z_.add(a[j], a[j + 1]);
}

void Cyclo::from_pi_basis(u64* a) const
{
    for (std::size_t i = 0; i + 1 < phi_; ++i)
        for (std::size_t j = phi_ - 1; j-- > i;) a[j] = z_.sub(a[j], a[j + 1]);
}

Valuation Cyclo::valuation(const u64* a) const
{
    if (is_zero(a)) return Valuation::exhausted();
    std::vector<u64> b(a, a + phi_);
    to_pi_basis(b.data());
    long long best = -1;
    for (std::size_t j = 0; j < phi_; ++j) {
        if (b[j] == 0) continue;
        long long v = static_cast<long long>(z_.vp(b[j])) * static_cast<long long>(phi_) + static_cast<long long>(j);
        if (best < 0 || v < best) best = v;
    }
    return Valuation::finite(best, static_cast<long long>(phi_));
}

void Cyclo::inverse(const u64* a, u64* out) const
{
    u64 aug = augmentation(a);
    if (aug % z_.p() == 0) throw Error(Errc::NotAUnit, "element has positive valuation");
    std::vector<u64> x(phi_, 0), e(phi_), t(phi_);
    x[0] = z_.inv(aug);
    for (int it = 0; it < 128; ++it) {
        mul(a, x.data(), t.data());
        bool done = true;
        for (std::size_t i = 0; i < phi_; ++i) {
            e[i] = z_.sub(i == 0 ? 1 % z_.modulus() : 0, t[i]);
            if (e[i] != 0) done = false;
        }
        if (done) {
            std::copy(x.begin(), x.end(), out);
            return;
        }
        mul(x.data(), e.data(), t.data());
        for (std::size_t i = 0; i < phi_; ++i) x[i] = z_.add(x[i], t[i]);
    }
    throw Error(Errc::PrecisionExhausted, "inverse iteration did not converge");
}

void Cyclo::div_pi(u64* a) const
{
    const u64 p = z_.p();
    if (phi_ == 1) {
        // At p = 2, level 1 the uniformizer zeta - 1 is -2.
        a[0] /= p;
        if (level_ > 0) a[0] = z_.neg(a[0]);
        return;
    }
    if (p_over_pi_.empty()) {
        // Phi_{p^n}(1 + X) = X^phi + e_{phi-1} X^{phi-1} + ... + e_1 X + p.
        std::vector<u64> e(phi_ + 1, 0);
        for (std::size_t i = 0; i < static_cast<std::size_t>(p); ++i) e[i * m_] = 1;
        for (std::size_t i = 0; i < phi_; ++i)
            for (std::size_t j = phi_; j-- > i;) e[j] = z_.add(e[j], e[j + 1]);
        p_over_pi_.assign(phi_, 0);
        for (std::size_t j = 0; j + 1 < phi_; ++j) p_over_pi_[j] = z_.neg(e[j + 1]);
        p_over_pi_[phi_ - 1] = z_.neg(1 % z_.modulus());
    }
    to_pi_basis(a);
    u64 b0 = a[0] / p;
    for (std::size_t j = 0; j + 1 < phi_; ++j) a[j] = a[j + 1];
    a[phi_ - 1] = 0;
    if (b0 != 0)
        for (std::size_t j = 0; j < phi_; ++j) a[j] = z_.add(a[j], z_.mul(b0, p_over_pi_[j]));
    from_pi_basis(a);
}

void Cyclo::div_pi_pow(u64* a, long long r) const
{
    const long long phi = static_cast<long long>(phi_);
    if (level_ == 0 || r < phi) {
        if (level_ == 0 && r > 0) {
            const u64 q = r >= z_.N() ? 0 : z_.p_pow(static_cast<int>(r));
            for (std::size_t i = 0; i < phi_; ++i) a[i] = q == 0 ? 0 : a[i] / q;
            return;
        }
        for (long long i = 0; i < r; ++i) div_pi(a);
        return;
    }
    if (eps_inv_.empty()) {
        // pi^phi = p * eps with eps a unit.
        std::vector<u64> pi(phi_, 0), acc(phi_, 0), t(phi_);
        std::vector<u64> one(phi_, 0);
        one[0] = 1 % z_.modulus();
        zeta_pow(1, pi.data());
        pi[0] = z_.sub(pi[0], one[0]);
        acc = one;
        for (std::size_t i = 0; i < phi_; ++i) {
            mul(acc.data(), pi.data(), t.data());
            acc = t;
        }
        for (auto& x : acc) x /= z_.p();
        eps_inv_.assign(phi_, 0);
        inverse(acc.data(), eps_inv_.data());
    }
    const long long whole = r / phi;
    const u64 q = whole >= z_.N() ? 0 : z_.p_pow(static_cast<int>(whole));
    std::vector<u64> t(phi_);
    for (std::size_t i = 0; i < phi_; ++i) a[i] = q == 0 ? 0 : a[i] / q;
    for (long long i = 0; i < whole; ++i) {
        mul(a, eps_inv_.data(), t.data());
        std::copy(t.begin(), t.end(), a);
    }
    for (long long i = 0; i < r % phi; ++i) div_pi(a);
}

// ---------------------------------------------------------------------------

PadicScalar::PadicScalar(const Zmod& z, int level) : z_(z), level_(level), c_(euler_phi_pow(z.p(), level), 0)
{
    if (level < 0) throw Error(Errc::InvalidArgument, "negative cyclotomic level");
}

PadicScalar PadicScalar::from_int(const Zmod& z, long long v, int level)
{
    PadicScalar s(z, level);
    s.c_[0] = z.from_int(v);
    return s;
}

PadicScalar PadicScalar::from_residue(const Zmod& z, u64 v, int level)
{
    PadicScalar s(z, level);
    s.c_[0] = v % z.modulus();
    return s;
}

PadicScalar PadicScalar::from_coeffs(const Zmod& z, int level, std::vector<u64> coeffs)
{
    PadicScalar s(z, level);
    if (coeffs.size() != s.c_.size())
        throw Error(Errc::InvalidArgument, "coefficient vector length must be phi(p^level)");
    for (auto& x : coeffs) x %= z.modulus();
    s.c_ = std::move(coeffs);
    return s;
}

PadicScalar PadicScalar::zeta_pow(const Zmod& z, int level, long long j)
{
    PadicScalar s(z, level);
    Cyclo(z, level).zeta_pow(j, s.c_.data());
    return s;
}

PadicScalar PadicScalar::at_level(int level) const
{
    if (level == level_) return *this;
    PadicScalar s(z_, level);
    Cyclo(z_, level).embed(c_.data(), level_, s.c_.data());
    return s;
}

bool PadicScalar::is_zero() const noexcept
{
    return std::all_of(c_.begin(), c_.end(), [](u64 x) { return x == 0; });
}

bool PadicScalar::is_rational() const noexcept
{
    return std::all_of(c_.begin() + 1, c_.end(), [](u64 x) { return x == 0; });
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const
{
    if (z_ != o.z_) throw Error(Errc::InvalidArgument, "scalars over different Z/p^N");
    int lv = std::max(level_, o.level_);
    PadicScalar a = at_level(lv), b = o.at_level(lv);
    for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] = z_.add(a.c_[i], b.c_[i]);
    return a;
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const { return *this + (-o); }

PadicScalar PadicScalar::operator-() const
{
    PadicScalar r = *this;
    for (auto& x : r.c_) x = z_.neg(x);
    return r;
}

PadicScalar PadicScalar::operator*(const PadicScalar& o) const
{
    if (z_ != o.z_) throw Error(Errc::InvalidArgument, "scalars over different Z/p^N");
    int lv = std::max(level_, o.level_);
    PadicScalar a = at_level(lv), b = o.at_level(lv);
    PadicScalar r(z_, lv);
    Cyclo(z_, lv).mul(a.c_.data(), b.c_.data(), r.c_.data());
    return r;
}

bool PadicScalar::operator==(const PadicScalar& o) const
{
    if (z_ != o.z_) return false;
    int lv = std::max(level_, o.level_);
    return at_level(lv).c_ == o.at_level(lv).c_;
}

Valuation PadicScalar::valuation() const { return Cyclo(z_, level_).valuation(c_.data()); }

PadicScalar PadicScalar::inverse() const
{
    PadicScalar r(z_, level_);
    Cyclo(z_, level_).inverse(c_.data(), r.c_.data());
    return r;
}

PadicScalar PadicScalar::pow(long long e) const
{
    if (e < 0) return inverse().pow(-e);
    PadicScalar r = from_int(z_, 1, level_), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

PadicScalar PadicScalar::div_pi(int r) const
{
    PadicScalar s = *this;
    Cyclo(z_, level_).div_pi_pow(s.c_.data(), r);
    return s;
}

std::string PadicScalar::str() const
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
    os << "]@" << level_;
    return os.str();
}

// ---------------------------------------------------------------------------

QScalar::QScalar(PadicScalar a, int k) : a_(std::move(a)), k_(k)
{
    if (k < 0) {
        PadicScalar pk = PadicScalar::from_residue(a_.zmod(), a_.zmod().p_pow(std::min(-k, a_.zmod().N())) % a_.zmod().modulus(),
                                                   a_.level());
        a_ = a_ * pk;
        k_ = 0;
    }
    normalize();
}

QScalar QScalar::p_power(const Zmod& z, int e, int level)
{
    if (e >= 0) return QScalar(PadicScalar::from_residue(z, z.p_pow(std::min(e, z.N())) % z.modulus(), level), 0);
    return QScalar(PadicScalar::from_int(z, 1, level), -e);
}

void QScalar::normalize()
{
    const u64 p = a_.zmod().p();
    while (k_ > 0) {
        bool divisible = std::all_of(a_.coeffs().begin(), a_.coeffs().end(), [p](u64 x) { return x % p == 0; });
        if (!divisible || a_.is_zero()) break;
        std::vector<u64> c = a_.coeffs();
        for (auto& x : c) x /= p;
        a_ = PadicScalar::from_coeffs(a_.zmod(), a_.level(), std::move(c));
        --k_;
    }
    if (a_.is_zero()) k_ = 0;
}

static PadicScalar shift_up(const PadicScalar& a, int by)
{
    if (by == 0) return a;
    const Zmod& z = a.zmod();
    return a * PadicScalar::from_residue(z, by >= z.N() ? 0 : z.p_pow(by), a.level());
}

QScalar QScalar::operator+(const QScalar& o) const
{
    int k = std::max(k_, o.k_);
    return QScalar(shift_up(a_, k - k_) + shift_up(o.a_, k - o.k_), k);
}

QScalar QScalar::operator-(const QScalar& o) const { return *this + (-o); }
QScalar QScalar::operator-() const { return QScalar(-a_, k_); }
QScalar QScalar::operator*(const QScalar& o) const { return QScalar(a_ * o.a_, k_ + o.k_); }

bool QScalar::operator==(const QScalar& o) const { return k_ == o.k_ && a_ == o.a_; }

Valuation QScalar::valuation() const
{
    Valuation v = a_.valuation();
    if (!v.is_finite()) return v;
    return Valuation::finite(v.value() - k_);
}

QScalar QScalar::inverse() const
{
    Valuation v = a_.valuation();
    if (!v.is_finite()) throw Error(Errc::NotAUnit, "cannot invert zero at working precision");
    const Zmod& z = a_.zmod();
    const long long phi = static_cast<long long>(a_.phi());
    const long long r = v.value().numerator() * phi / v.value().denominator();
    // a = pi^r u and pi^(phi c) = p^c eps, so 1/a = u^-1 pi^(phi c - r) eps^-c / p^c.
    const long long c = (r + phi - 1) / phi;
    PadicScalar inv = a_.div_pi(static_cast<int>(r)).inverse();
    if (c > 0) {
        PadicScalar pi = a_.level() == 0 ? PadicScalar::from_residue(z, z.p(), 0) : PadicScalar::zeta_pow(z, a_.level(), 1) - PadicScalar::from_int(z, 1, a_.level());
        std::vector<u64> eps = pi.pow(phi).coeffs();
        for (auto& x : eps) x /= z.p();
        inv = inv * pi.pow(phi * c - r) * PadicScalar::from_coeffs(z, a_.level(), std::move(eps)).inverse().pow(c);
    }
    return QScalar(inv, static_cast<int>(c)) * QScalar::p_power(z, k_, a_.level());
}

PadicScalar QScalar::integral() const
{
    if (k_ > 0) throw Error(Errc::DenominatorNotCleared, "value has a p-power denominator");
    return a_;
}

}  // namespace iwasawa
