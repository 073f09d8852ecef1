#include "iwasawa/series.hpp"

#include "iwasawa/errors.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace iwasawa {

namespace {

u64 p_power_residue(const Zmod& z, int e) { return e >= z.N() ? 0 : z.p_pow(e) % z.modulus(); }

bool all_zero(const u64* a, std::size_t n)
{
    return std::all_of(a, a + n, [](u64 x) { return x == 0; });
}

}  // namespace

// ---------------------------------------------------------------------------

SeriesRing::SeriesRing(u64 p, int N, int d, int D, int level) : SeriesRing(Zmod(p, N), d, D, level) {}

SeriesRing::SeriesRing(const Zmod& z, int d, int D, int level)
    : z_(z), d_(d), D_(D), level_(level), phi_(euler_phi_pow(z.p(), level))
{
    if (d < 0) throw Error(Errc::InvalidArgument, "number of variables must be non-negative");
    if (D < 0) throw Error(Errc::InvalidArgument, "truncation degree must be non-negative");
    if (level < 0) throw Error(Errc::InvalidArgument, "negative cyclotomic level");
    Cyclo check(z, level);
    (void)check;
    auto layout = std::make_shared<Layout>();
    const std::size_t base = static_cast<std::size_t>(D) + 1;
    for (int i = 0; i < d; ++i) {
        layout->stride.push_back(layout->size);
        if (layout->size > (std::size_t{1} << 24) / base)
            throw Error(Errc::InvalidArgument, "series layout too large");
        layout->size *= base;
    }
    if (layout->size * phi_ > (std::size_t{1} << 26)) throw Error(Errc::InvalidArgument, "series layout too large");
    layout->deg.assign(layout->size, 0);
    for (std::size_t s = 0; s < layout->size; ++s) {
        std::size_t x = s;
        int deg = 0;
        for (int i = 0; i < d; ++i) {
            deg += static_cast<int>(x % base);
            x /= base;
        }
        layout->deg[s] = deg;
        if (deg <= D) layout->used.push_back(static_cast<std::uint32_t>(s));
    }
    layout_ = std::move(layout);
}

std::size_t SeriesRing::index(const Exponent& e) const
{
    if (static_cast<int>(e.size()) != d_) throw Error(Errc::InvalidArgument, "exponent has the wrong number of variables");
    std::size_t s = 0;
    int deg = 0;
    for (int i = 0; i < d_; ++i) {
        if (e[static_cast<std::size_t>(i)] < 0) throw Error(Errc::InvalidArgument, "negative exponent");
        deg += e[static_cast<std::size_t>(i)];
        if (deg > D_) throw Error(Errc::InvalidArgument, "exponent exceeds the truncation degree");
        s += static_cast<std::size_t>(e[static_cast<std::size_t>(i)]) * stride(i);
    }
    return s;
}

Exponent SeriesRing::exponent(std::size_t slot) const
{
    Exponent e(static_cast<std::size_t>(d_));
    const std::size_t base = static_cast<std::size_t>(D_) + 1;
    for (int i = 0; i < d_; ++i) {
        e[static_cast<std::size_t>(i)] = static_cast<int>(slot % base);
        slot /= base;
    }
    return e;
}

// ---------------------------------------------------------------------------

Series::Series(SeriesRing ring) : ring_(std::move(ring)), c_(ring_.slots() * ring_.phi(), 0) {}

Series Series::zero_ideal(const SeriesRing& ring)
{
    Series s(ring);
    s.zero_ = true;
    return s;
}

Series Series::constant(const SeriesRing& ring, const PadicScalar& c)
{
    Series s(ring);
    s.set_coeff(Exponent(static_cast<std::size_t>(ring.d()), 0), c);
    return s;
}

Series Series::from_int(const SeriesRing& ring, long long c)
{
    return constant(ring, PadicScalar::from_int(ring.zmod(), c, ring.level()));
}

Series Series::variable(const SeriesRing& ring, int i)
{
    Exponent e(static_cast<std::size_t>(ring.d()), 0);
    e.at(static_cast<std::size_t>(i)) = 1;
    return monomial(ring, e, PadicScalar::from_int(ring.zmod(), 1, ring.level()));
}

Series Series::monomial(const SeriesRing& ring, const Exponent& e, const PadicScalar& c)
{
    Series s(ring);
    s.set_coeff(e, c);
    return s;
}

Series Series::group_element(const SeriesRing& ring, const std::vector<long long>& c)
{
    if (static_cast<int>(c.size()) != ring.d()) throw Error(Errc::InvalidArgument, "group element has the wrong length");
    const Zmod& z = ring.zmod();
    std::vector<std::vector<u64>> rows;
    for (long long x : c) rows.push_back(binomial_row(z, BigInt(x), ring.D() + 1));
    Series s(ring);
    for (std::uint32_t slot : ring.used()) {
        Exponent e = ring.exponent(slot);
        u64 v = 1 % z.modulus();
        for (std::size_t j = 0; j < e.size() && v != 0; ++j) v = z.mul(v, rows[j][static_cast<std::size_t>(e[j])]);
        s.raw(slot)[0] = v;
    }
    return s;
}

Series Series::from_data(const SeriesRing& ring, std::vector<u64> data, int k)
{
    Series s(ring);
    if (data.size() != s.c_.size()) throw Error(Errc::InvalidArgument, "series data has the wrong size");
    if (k < 0) throw Error(Errc::InvalidArgument, "negative denominator exponent");
    s.c_ = std::move(data);
    for (std::size_t slot = 0; slot < ring.slots(); ++slot)
        if (ring.degree(slot) > ring.D()) std::fill(s.raw(slot), s.raw(slot) + ring.phi(), 0);
    s.k_ = k;
    s.normalize();
    return s;
}

bool Series::residues_zero() const noexcept { return all_zero(c_.data(), c_.size()); }

PadicScalar Series::coeff_at(std::size_t slot) const
{
    const u64* a = raw(slot);
    return PadicScalar::from_coeffs(ring_.zmod(), ring_.level(), std::vector<u64>(a, a + ring_.phi()));
}

PadicScalar Series::coeff(const Exponent& e) const { return coeff_at(ring_.index(e)); }

void Series::set_coeff(const Exponent& e, const PadicScalar& c)
{
    if (c.zmod() != ring_.zmod()) throw Error(Errc::InvalidArgument, "coefficient over a different Z/p^N");
    if (c.level() > ring_.level()) throw Error(Errc::InvalidArgument, "coefficient level exceeds the ring level");
    if (k_ > 0) throw Error(Errc::InvalidArgument, "set_coeff on a series with a denominator");
    PadicScalar v = c.at_level(ring_.level());
    std::copy(v.coeffs().begin(), v.coeffs().end(), raw(ring_.index(e)));
    if (!v.is_zero()) zero_ = false;
}

std::vector<std::pair<Exponent, PadicScalar>> Series::terms() const
{
    std::vector<std::pair<Exponent, PadicScalar>> out;
    for (std::uint32_t slot : ring_.used())
        if (!all_zero(raw(slot), ring_.phi())) out.emplace_back(ring_.exponent(slot), coeff_at(slot));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

void Series::normalize()
{
    if (zero_) {
        std::fill(c_.begin(), c_.end(), 0);
        k_ = 0;
        return;
    }
    if (residues_zero()) {
        k_ = 0;
        return;
    }
    const u64 p = ring_.p();
    while (k_ > 0 && std::all_of(c_.begin(), c_.end(), [p](u64 x) { return x % p == 0; })) {
        for (auto& x : c_) x /= p;
        --k_;
    }
}

static void require_compatible(const SeriesRing& a, const SeriesRing& b)
{
    if (a.zmod() != b.zmod() || a.d() != b.d() || a.D() != b.D())
        throw Error(Errc::InvalidArgument, "series belong to different rings");
}

Series Series::at_level(int level) const
{
    if (level == ring_.level()) return *this;
    if (level < ring_.level()) throw Error(Errc::InvalidArgument, "cannot lower the coefficient level");
    Series r(ring_.with_level(level));
    r.zero_ = zero_;
    r.k_ = k_;
    Cyclo cy(ring_.zmod(), level);
    for (std::uint32_t slot : ring_.used()) cy.embed(raw(slot), ring_.level(), r.raw(slot));
    return r;
}

Series Series::rebased(const SeriesRing& ring) const
{
    if (ring.d() != ring_.d()) throw Error(Errc::InvalidArgument, "rebase must keep the number of variables");
    if (ring.p() != ring_.p()) throw Error(Errc::InvalidArgument, "rebase must keep the prime");
    Series src = at_level(ring.level());
    if (zero_) return zero_ideal(ring);
    Series r(ring);
    r.k_ = k_;
    const Zmod& z = ring.zmod();
    for (std::uint32_t slot : ring.used()) {
        Exponent e = ring.exponent(slot);
        bool inside = true;
        int deg = 0;
        for (int x : e) deg += x;
        if (deg > ring_.D()) inside = false;
        if (!inside) continue;
        const u64* a = src.raw(ring_.index(e));
        for (std::size_t i = 0; i < ring.phi(); ++i) r.raw(slot)[i] = a[i] % z.modulus();
    }
    r.normalize();
    return r;
}

Series Series::operator+(const Series& o) const
{
    require_compatible(ring_, o.ring_);
    if (ring_.level() != o.ring_.level()) {
        int lv = std::max(ring_.level(), o.ring_.level());
        return at_level(lv) + o.at_level(lv);
    }
    if (zero_) return o;
    if (o.zero_) return *this;
    const Zmod& z = ring_.zmod();
    Series r(ring_);
    r.k_ = std::max(k_, o.k_);
    const u64 sa = p_power_residue(z, r.k_ - k_), sb = p_power_residue(z, r.k_ - o.k_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = z.add(z.mul(c_[i], sa), z.mul(o.c_[i], sb));
    r.normalize();
    return r;
}

Series Series::operator-() const
{
    Series r = *this;
    for (auto& x : r.c_) x = ring_.zmod().neg(x);
    return r;
}

Series Series::operator-(const Series& o) const { return *this + (-o); }

Series Series::operator*(const Series& o) const
{
    require_compatible(ring_, o.ring_);
    if (ring_.level() != o.ring_.level()) {
        int lv = std::max(ring_.level(), o.ring_.level());
        return at_level(lv) * o.at_level(lv);
    }
    if (zero_ || o.zero_) return zero_ideal(ring_);
    const Zmod& z = ring_.zmod();
    const std::size_t phi = ring_.phi();
    const int D = ring_.D();
    const u64 mod = z.modulus();

    auto nonzero = [&](const Series& s) {
        std::vector<std::uint32_t> v;
        for (std::uint32_t slot : ring_.used())
            if (!all_zero(s.raw(slot), phi)) v.push_back(slot);
        std::stable_sort(v.begin(), v.end(), [&](auto a, auto b) { return ring_.degree(a) < ring_.degree(b); });
        return v;
    };
    const auto an = nonzero(*this), bn = nonzero(o);

    const std::size_t width = 2 * phi - 1;
    std::vector<u128> acc(ring_.slots() * width, 0);
    const u64 budget = z.lazy_budget() - 1;
    const bool lazy = budget >= phi;
    u64 count = 0;
    auto reduce_all = [&] {
        for (auto& x : acc) x %= mod;
        count = 0;
    };
    for (std::uint32_t i : an) {
        if (lazy && count + phi > budget) reduce_all();
        count += phi;
        const int room = D - ring_.degree(i);
        const u64* a = raw(i);
        for (std::uint32_t j : bn) {
            if (ring_.degree(j) > room) break;
            const u64* b = o.raw(j);
            u128* out = acc.data() + static_cast<std::size_t>(i + j) * width;
            for (std::size_t x = 0; x < phi; ++x) {
                if (a[x] == 0) continue;
                for (std::size_t y = 0; y < phi; ++y) {
                    u128 prod = static_cast<u128>(a[x]) * b[y];
                    if (lazy) {
                        out[x + y] += prod;
                    } else {
                        out[x + y] += prod % mod;
                        if (out[x + y] >= mod) out[x + y] -= mod;
                    }
                }
            }
        }
    }
    Series r(ring_);
    r.k_ = k_ + o.k_;
    Cyclo cy(z, ring_.level());
    for (std::uint32_t slot : ring_.used()) cy.finish(acc.data() + static_cast<std::size_t>(slot) * width, r.raw(slot));
    r.normalize();
    return r;
}

Series Series::scaled(const PadicScalar& c) const
{
    if (c.level() > ring_.level()) return at_level(c.level()).scaled(c);
    if (zero_) return *this;
    Series r = *this;
    PadicScalar v = c.at_level(ring_.level());
    Cyclo cy(ring_.zmod(), ring_.level());
    std::vector<u64> tmp(ring_.phi());
    for (std::uint32_t slot : ring_.used()) {
        if (all_zero(raw(slot), ring_.phi())) continue;
        cy.mul(raw(slot), v.coeffs().data(), tmp.data());
        std::copy(tmp.begin(), tmp.end(), r.raw(slot));
    }
    r.normalize();
    return r;
}

Series Series::scaled(const QScalar& c) const
{
    Series r = scaled(c.numerator());
    if (r.zero_) return r;
    r.k_ += c.denom_exp();
    r.normalize();
    return r;
}

Series Series::times_p_power(int e) const
{
    if (zero_) return *this;
    Series r = *this;
    if (e >= 0) {
        const u64 s = p_power_residue(ring_.zmod(), e);
        for (auto& x : r.c_) x = ring_.zmod().mul(x, s);
    } else {
        r.k_ += -e;
    }
    r.normalize();
    return r;
}

Series Series::pow(int e) const
{
    if (e < 0) throw Error(Errc::InvalidArgument, "negative power of a series; use unit_inverse");
    Series r = one(ring_), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

bool Series::operator==(const Series& o) const
{
    if (ring_.zmod() != o.ring_.zmod() || ring_.d() != o.ring_.d() || ring_.D() != o.ring_.D()) return false;
    if (ring_.level() != o.ring_.level()) {
        int lv = std::max(ring_.level(), o.ring_.level());
        return at_level(lv) == o.at_level(lv);
    }
    return k_ == o.k_ && c_ == o.c_;
}

// ---------------------------------------------------------------------------

PadicScalar uniformizer(const Zmod& z, int level)
{
    if (level == 0) return PadicScalar::from_residue(z, z.p(), 0);
    return PadicScalar::zeta_pow(z, level, 1) - PadicScalar::from_int(z, 1, level);
}

Valuation mu_invariant(const Series& f)
{
    if (f.is_zero_ideal()) return Valuation::infinite();
    if (f.residues_zero()) return Valuation::exhausted();
    const SeriesRing& R = f.ring();
    Cyclo cy(R.zmod(), R.level());
    Rational best = 0;
    bool have = false;
    for (std::uint32_t slot : R.used()) {
        Valuation v = cy.valuation(f.raw(slot));
        if (!v.is_finite()) continue;
        if (!have || v.value() < best) best = v.value();
        have = true;
    }
    return Valuation::finite(best - f.denom_exp());
}

Series restrict_to(const Series& f, int var)
{
    const SeriesRing& R = f.ring();
    if (var < 0 || var >= R.d()) throw Error(Errc::InvalidArgument, "variable index out of range");
    if (f.is_zero_ideal()) return f;
    std::vector<u64> data(R.slots() * R.phi(), 0);
    for (std::uint32_t slot : R.used()) {
        Exponent e = R.exponent(slot);
        bool keep = true;
        for (int i = 0; i < R.d(); ++i)
            if (i != var && e[static_cast<std::size_t>(i)] != 0) keep = false;
        if (keep) std::copy(f.raw(slot), f.raw(slot) + R.phi(), data.begin() + static_cast<std::ptrdiff_t>(slot * R.phi()));
    }
    return Series::from_data(R, std::move(data), f.denom_exp());
}

namespace {

// Per-axis Taylor shift of every slice by +1 (sign > 0) or -1.
void axis_shift(const SeriesRing& R, std::vector<u64>& c, int sign)
{
    const Zmod& z = R.zmod();
    const std::size_t phi = R.phi();
    const std::size_t base = static_cast<std::size_t>(R.D()) + 1;
    for (int v = 0; v < R.d(); ++v) {
        const std::size_t s = R.stride(v);
        for (std::uint32_t start : R.used()) {
            if ((start / s) % base != 0) continue;
            const std::size_t L = static_cast<std::size_t>(R.D() - R.degree(start)) + 1;
            for (std::size_t i = 0; i + 1 < L; ++i)
                for (std::size_t j = L - 1; j-- > i;) {
                    u64* a = c.data() + (start + j * s) * phi;
                    const u64* b = c.data() + (start + (j + 1) * s) * phi;
                    for (std::size_t x = 0; x < phi; ++x) a[x] = sign > 0 ? z.add(a[x], b[x]) : z.sub(a[x], b[x]);
                }
        }
    }
}

}  // namespace

std::vector<u64> to_group_ring(const Series& f)
{
    std::vector<u64> g = f.data();
    axis_shift(f.ring(), g, -1);
    return g;
}

Series from_group_ring(const SeriesRing& ring, std::vector<u64> g, int k)
{
    axis_shift(ring, g, +1);
    return Series::from_data(ring, std::move(g), k);
}

Series sharp(const Series& f)
{
    const int d = f.ring().d();
    SubgroupMap m = SubgroupMap::identity(d);
    for (int i = 0; i < d; ++i) m.M[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = -1;
    return specialize(f, m);
}

SubgroupMap::SubgroupMap(IntMatrix m, int source_dim) : M(std::move(m))
{
    if (source_dim >= 0)
        source = source_dim;
    else
        source = M.empty() ? 0 : static_cast<int>(M[0].size());
    for (const auto& row : M)
        if (static_cast<int>(row.size()) != source) throw Error(Errc::InvalidArgument, "ragged subgroup map matrix");
}

SubgroupMap SubgroupMap::identity(int d)
{
    IntMatrix M(static_cast<std::size_t>(d), std::vector<long long>(static_cast<std::size_t>(d), 0));
    for (int i = 0; i < d; ++i) M[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    return SubgroupMap(std::move(M), d);
}

SubgroupMap SubgroupMap::projection(int d, const std::vector<int>& keep)
{
    IntMatrix M(keep.size(), std::vector<long long>(static_cast<std::size_t>(d), 0));
    for (std::size_t j = 0; j < keep.size(); ++j) M[j].at(static_cast<std::size_t>(keep[j])) = 1;
    return SubgroupMap(std::move(M), d);
}

SubgroupMap SubgroupMap::compose_after(const SubgroupMap& first) const
{
    if (source != first.rows()) throw Error(Errc::InvalidArgument, "subgroup maps do not compose");
    IntMatrix R(M.size(), std::vector<long long>(static_cast<std::size_t>(first.source), 0));
    for (std::size_t i = 0; i < M.size(); ++i)
        for (int k = 0; k < source; ++k)
            for (int j = 0; j < first.source; ++j)
                R[i][static_cast<std::size_t>(j)] +=
                    M[i][static_cast<std::size_t>(k)] * first.M[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    return SubgroupMap(std::move(R), first.source);
}

std::vector<long long> SubgroupMap::apply(const std::vector<long long>& v) const
{
    if (static_cast<int>(v.size()) != source) throw Error(Errc::InvalidArgument, "vector length does not match the map");
    std::vector<long long> out(M.size(), 0);
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += M[i][j] * v[j];
    return out;
}

bool is_surjective_mod_p(const SubgroupMap& m, u64 p)
{
    const long long P = static_cast<long long>(p);
    IntMatrix A = m.M;
    for (auto& row : A)
        for (auto& x : row) x = ((x % P) + P) % P;
    const std::size_t rows = A.size(), cols = static_cast<std::size_t>(m.source);
    std::size_t rank = 0;
    Zmod z(p, 1);
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && A[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[rank]);
        const long long inv = static_cast<long long>(z.inv(static_cast<u64>(A[rank][c])));
        for (auto& x : A[rank]) x = x * inv % P;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || A[r][c] == 0) continue;
            const long long f = A[r][c];
            for (std::size_t k = 0; k < cols; ++k) A[r][k] = ((A[r][k] - f * A[rank][k]) % P + P) % P;
        }
        ++rank;
    }
    return rank == rows;
}

Series specialize(const Series& f, const SubgroupMap& m)
{
    const SeriesRing& R = f.ring();
    if (m.cols() != R.d()) throw Error(Errc::InvalidArgument, "subgroup map source does not match the series");
    SeriesRing T(R.zmod(), m.rows(), R.D(), R.level());
    if (f.is_zero_ideal()) return Series::zero_ideal(T);
    const Zmod& z = R.zmod();
    const std::size_t phi = R.phi();
    const std::vector<u64> g = to_group_ring(f);

    std::map<std::vector<long long>, std::vector<u64>> grouped;
    for (std::uint32_t slot : R.used()) {
        const u64* a = g.data() + slot * phi;
        if (all_zero(a, phi)) continue;
        Exponent e = R.exponent(slot);
        std::vector<long long> b(e.begin(), e.end());
        auto& acc = grouped[m.apply(b)];
        if (acc.empty()) acc.assign(phi, 0);
        for (std::size_t x = 0; x < phi; ++x) acc[x] = z.add(acc[x], a[x]);
    }

    GroupTerms terms;
    for (auto& [E, coeff] : grouped) terms.emplace(std::vector<BigInt>(E.begin(), E.end()), std::move(coeff));
    return expand_group_terms(T, terms, f.denom_exp());
}

Series expand_group_terms(const SeriesRing& ring, const GroupTerms& terms, int k)
{
    const Zmod& z = ring.zmod();
    const std::size_t phi = ring.phi();
    std::map<BigInt, std::vector<u64>> rows;
    auto row = [&](const BigInt& exp) -> const std::vector<u64>& {
        auto it = rows.find(exp);
        if (it == rows.end()) it = rows.emplace(exp, binomial_row(z, exp, ring.D() + 1)).first;
        return it->second;
    };

    std::vector<u64> out(ring.slots() * phi, 0);
    std::vector<Exponent> texp;
    for (std::uint32_t slot : ring.used()) texp.push_back(ring.exponent(slot));
    for (const auto& [E, coeff] : terms) {
        if (static_cast<int>(E.size()) != ring.d() || coeff.size() != phi)
            throw Error(Errc::InvalidArgument, "group term does not match the ring");
        std::vector<const std::vector<u64>*> rs;
        for (const BigInt& x : E) rs.push_back(&row(x));
        for (std::size_t u = 0; u < ring.used().size(); ++u) {
            u64 c = 1 % z.modulus();
            for (std::size_t j = 0; j < rs.size() && c != 0; ++j) c = z.mul(c, (*rs[j])[static_cast<std::size_t>(texp[u][j])]);
            if (c == 0) continue;
            u64* o = out.data() + ring.used()[u] * phi;
            for (std::size_t x = 0; x < phi; ++x) o[x] = z.add(o[x], z.mul(c, coeff[x]));
        }
    }
    return Series::from_data(ring, std::move(out), k);
}

Series permute_variables(const Series& f, const std::vector<int>& perm)
{
    const SeriesRing& R = f.ring();
    if (static_cast<int>(perm.size()) != R.d()) throw Error(Errc::InvalidArgument, "permutation has the wrong length");
    std::vector<int> seen(perm.size(), 0);
    for (int x : perm) {
        if (x < 0 || x >= R.d() || seen[static_cast<std::size_t>(x)]++) throw Error(Errc::InvalidArgument, "not a permutation");
    }
    if (f.is_zero_ideal()) return f;
    std::vector<u64> out(R.slots() * R.phi(), 0);
    for (std::uint32_t slot : R.used()) {
        Exponent e = R.exponent(slot), ne(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) ne[i] = e[static_cast<std::size_t>(perm[i])];
        std::copy(f.raw(slot), f.raw(slot) + R.phi(), out.begin() + static_cast<std::ptrdiff_t>(R.index(ne) * R.phi()));
    }
    return Series::from_data(R, std::move(out), f.denom_exp());
}

QScalar evaluate(const Series& f, int level, const std::vector<long long>& c)
{
    const SeriesRing& R = f.ring();
    if (static_cast<int>(c.size()) != R.d()) throw Error(Errc::InvalidArgument, "character has the wrong number of images");
    const int L = std::max(level, R.level());
    const Zmod& z = R.zmod();
    Cyclo cy(z, L);
    if (f.is_zero_ideal()) return QScalar(PadicScalar(z, L), 0);
    const std::vector<u64> g = to_group_ring(f);
    const long long order = static_cast<long long>(cy.order());
    long long lift = 1;
    for (int i = level; i < L; ++i) lift *= static_cast<long long>(z.p());
    std::size_t step = 1;
    for (int i = R.level(); i < L; ++i) step *= static_cast<std::size_t>(z.p());
    std::vector<long long> cr(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) cr[i] = ((c[i] % order) + order) % order * lift % order;

    std::vector<u64> buf(static_cast<std::size_t>(order), 0);
    const std::size_t phi = R.phi();
    for (std::uint32_t slot : R.used()) {
        const u64* a = g.data() + slot * phi;
        if (all_zero(a, phi)) continue;
        Exponent e = R.exponent(slot);
        long long j = 0;
        for (std::size_t i = 0; i < e.size(); ++i) j = (j + cr[i] * e[i]) % order;
        for (std::size_t x = 0; x < phi; ++x) {
            if (a[x] == 0) continue;
            std::size_t pos = static_cast<std::size_t>((static_cast<long long>(x * step) + j) % order);
            buf[pos] = z.add(buf[pos], a[x]);
        }
    }
    PadicScalar out(z, L);
    std::vector<u64> coeffs(cy.phi());
    cy.fold_cyclic(buf, coeffs.data());
    return QScalar(PadicScalar::from_coeffs(z, L, std::move(coeffs)), f.denom_exp());
}

// ---------------------------------------------------------------------------
// Weierstrass preparation

namespace {

using Poly = std::vector<Series>;

struct Split {
    SeriesRing A;
    std::vector<int> others;
};

Split split_ring(const SeriesRing& R, int var)
{
    Split s{SeriesRing(R.zmod(), R.d() - 1, R.D(), R.level()), {}};
    for (int i = 0; i < R.d(); ++i)
        if (i != var) s.others.push_back(i);
    return s;
}

Poly poly_mul(const Poly& a, const Poly& b, std::size_t len, const SeriesRing& A)
{
    Poly r(len, Series(A));
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i].residues_zero()) continue;
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) {
            if (b[j].residues_zero()) continue;
            r[i + j] = r[i + j] + a[i] * b[j];
        }
    }
    return r;
}

Poly poly_inverse(const Poly& u, std::size_t len, const SeriesRing& A)
{
    Poly v(len, Series(A));
    if (len == 0) return v;
    Series inv0 = unit_inverse(u[0]);
    v[0] = inv0;
    for (std::size_t j = 1; j < len; ++j) {
        Series s(A);
        for (std::size_t i = 1; i <= j && i < u.size(); ++i) s = s + u[i] * v[j - i];
        v[j] = -(inv0 * s);
    }
    return v;
}

bool poly_equal(const Poly& a, const Poly& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

Series assemble(const SeriesRing& R, const Split& sp, int var, const Poly& coeffs, std::size_t top_monic)
{
    std::vector<u64> data(R.slots() * R.phi(), 0);
    for (std::uint32_t slot : R.used()) {
        Exponent e = R.exponent(slot);
        const std::size_t i = static_cast<std::size_t>(e[static_cast<std::size_t>(var)]);
        if (i == top_monic) {
            bool rest_zero = true;
            for (int o : sp.others)
                if (e[static_cast<std::size_t>(o)] != 0) rest_zero = false;
            if (rest_zero) data[slot * R.phi()] = 1 % R.zmod().modulus();
            continue;
        }
        if (i >= coeffs.size()) continue;
        Exponent ae;
        for (int o : sp.others) ae.push_back(e[static_cast<std::size_t>(o)]);
        const u64* a = coeffs[i].raw(sp.A.index(ae));
        std::copy(a, a + R.phi(), data.begin() + static_cast<std::ptrdiff_t>(slot * R.phi()));
    }
    return Series::from_data(R, std::move(data), 0);
}

}  // namespace

Series DistinguishedPoly::to_series(const SeriesRing& ring) const
{
    Split sp = split_ring(ring, var);
    return assemble(ring, sp, var, tail, static_cast<std::size_t>(lambda));
}

bool preparation_hypothesis(const Series& f, int var)
{
    if (f.is_zero_ideal()) return false;
    Valuation m = mu_invariant(f);
    if (!m.is_finite()) return false;
    return mu_invariant(restrict_to(f, var)) == m;
}

Prepared weierstrass_prepare(const Series& f, int var)
{
    const SeriesRing& R = f.ring();
    if (R.d() < 1) throw Error(Errc::InvalidArgument, "preparation needs at least one variable");
    if (var < 0 || var >= R.d()) throw Error(Errc::InvalidArgument, "variable index out of range");
    if (f.is_zero_ideal()) throw Error(Errc::InvalidArgument, "cannot prepare the zero ideal");
    if (f.residues_zero()) throw Error(Errc::PrecisionExhausted, "series vanishes at working precision");
    const Valuation mu = mu_invariant(f);
    if (mu_invariant(restrict_to(f, var)) != mu)
        throw Error(Errc::HypothesisFailed, "mu of the restriction to t_" + std::to_string(var) + " differs from mu");

    const std::size_t phi = R.phi();
    const Rational mu_int = mu.value() + f.denom_exp();
    const long long r = (mu_int * static_cast<long long>(phi)).numerator();
    Cyclo cy(R.zmod(), R.level());

    const Split sp = split_ring(R, var);
    const std::size_t D = static_cast<std::size_t>(R.D());
    Poly G(D + 1, Series(sp.A));
    {
        std::vector<std::vector<u64>> data(D + 1, std::vector<u64>(sp.A.slots() * phi, 0));
        std::vector<u64> tmp(phi);
        for (std::uint32_t slot : R.used()) {
            if (all_zero(f.raw(slot), phi)) continue;
            std::copy(f.raw(slot), f.raw(slot) + phi, tmp.begin());
            cy.div_pi_pow(tmp.data(), r);
            Exponent e = R.exponent(slot), ae;
            for (int o : sp.others) ae.push_back(e[static_cast<std::size_t>(o)]);
            const std::size_t i = static_cast<std::size_t>(e[static_cast<std::size_t>(var)]);
            std::copy(tmp.begin(), tmp.end(), data[i].begin() + static_cast<std::ptrdiff_t>(sp.A.index(ae) * phi));
        }
        for (std::size_t i = 0; i <= D; ++i) G[i] = Series::from_data(sp.A, std::move(data[i]), 0);
    }

    std::size_t lambda = D + 1;
    for (std::size_t i = 0; i <= D; ++i) {
        Valuation v = cy.valuation(G[i].raw(0));
        if (v.is_zero()) {
            lambda = i;
            break;
        }
    }
    if (lambda > D) throw Error(Errc::PrecisionExhausted, "no certified unit coefficient up to the truncation degree");

    Prepared out{mu, Series(R), DistinguishedPoly{var, static_cast<int>(lambda), {}}, Rational(R.N()) - mu_int};
    if (lambda == 0) {
        out.unit = assemble(R, sp, var, G, D + 1);
        return out;
    }

    const Poly B(G.begin(), G.begin() + static_cast<std::ptrdiff_t>(lambda));
    const Poly C(G.begin() + static_cast<std::ptrdiff_t>(lambda), G.end());
    const std::size_t ulen = C.size();
    Poly E(ulen, Series(sp.A)), U, Rt;
    const long long cap = static_cast<long long>(phi) * R.N() + R.D() + 5;
    bool converged = false;
    for (long long it = 0; it < cap; ++it) {
        U.assign(ulen, Series(sp.A));
        for (std::size_t i = 0; i < ulen; ++i) U[i] = C[i] + E[i];
        Rt = poly_mul(poly_inverse(U, lambda, sp.A), B, lambda, sp.A);
        Poly X = poly_mul(U, Rt, ulen + lambda, sp.A);
        Poly En(ulen, Series(sp.A));
        for (std::size_t j = 0; j < ulen; ++j) En[j] = -X[j + lambda];
        if (poly_equal(En, E)) {
            converged = true;
            break;
        }
        E = std::move(En);
    }
    if (!converged) throw Error(Errc::PrecisionExhausted, "preparation iteration did not stabilise");

    out.unit = assemble(R, sp, var, U, D + 1);
    for (std::size_t i = 0; i < lambda; ++i) {
        std::vector<u64> data = Rt[i].data();
        for (std::uint32_t slot : sp.A.used())
            if (static_cast<std::size_t>(sp.A.degree(slot)) + i > D) std::fill(data.begin() + slot * phi, data.begin() + (slot + 1) * phi, 0);
        out.poly.tail.push_back(Series::from_data(sp.A, std::move(data), 0));
    }
    return out;
}

namespace {

// Smallest valuation per unit of degree drop among the constant terms of the
// tail: min v(a_i(0)) / (lambda - i). Empty when every constant term is zero.
std::optional<Rational> tail_slope(const DistinguishedPoly& P)
{
    std::optional<Rational> best;
    for (std::size_t i = 0; i < P.tail.size(); ++i) {
        const Series& a = P.tail[i];
        Valuation v = Cyclo(a.ring().zmod(), a.ring().level()).valuation(a.raw(0));
        if (!v.is_finite()) continue;
        Rational r = v.value() / static_cast<long long>(P.lambda - static_cast<int>(i));
        if (!best || r < *best) best = r;
    }
    return best;
}

}  // namespace

bool associates(const Series& f0, const Series& g0)
{
    require_compatible(f0.ring(), g0.ring());
    const int lv = std::max(f0.ring().level(), g0.ring().level());
    const Series f = f0.at_level(lv), g = g0.at_level(lv);
    if (f.is_zero_ideal() && g.is_zero_ideal()) return true;
    if (f.is_zero_ideal() || g.is_zero_ideal()) {
        const Series& other = f.is_zero_ideal() ? g : f;
        if (other.residues_zero()) throw Error(Errc::PrecisionExhausted, "cannot separate a vanishing series from zero");
        return false;
    }
    if (f.residues_zero() || g.residues_zero()) throw Error(Errc::PrecisionExhausted, "series vanishes at working precision");
    const SeriesRing& R = f.ring();
    const Valuation mf = mu_invariant(f), mg = mu_invariant(g);
    if (R.d() == 0) return mf == mg;

    for (int v = 0; v < R.d(); ++v) {
        const bool hf = preparation_hypothesis(f, v), hg = preparation_hypothesis(g, v);
        if (hf != hg) return false;
        if (!hf) continue;
        if (mf != mg) return false;
        const Prepared pf = weierstrass_prepare(f, v), pg = weierstrass_prepare(g, v);
        if (pf.poly.lambda != pg.poly.lambda) return false;
        const Rational prec = std::min(pf.certified, pg.certified);
        if (prec <= Rational(0)) throw Error(Errc::PrecisionExhausted, "no digits left after removing mu");
        const std::optional<Rational> nu = std::min(tail_slope(pf.poly), tail_slope(pg.poly));
        const SeriesRing& A = pf.poly.tail.empty() ? R : pf.poly.tail[0].ring();
        Cyclo cy(R.zmod(), R.level());
        const long long lam = pf.poly.lambda;
        for (std::size_t i = 0; i < pf.poly.tail.size(); ++i) {
            const Series diff = pf.poly.tail[i] - pg.poly.tail[i];
            for (std::uint32_t slot : A.used()) {
                // Terms beyond the truncation degree reach this coefficient
                // only through reductions modulo P, each costing nu per step.
                const long long steps = R.D() + 1 - static_cast<long long>(i) - lam * A.degree(slot);
                Rational bound = prec;
                if (steps <= 0) continue;
                if (nu) bound = std::min(bound, *nu * steps);
                if (bound <= Rational(0)) continue;
                if (!cy.valuation(diff.raw(slot)).at_least(bound)) return false;
            }
        }
        return true;
    }
    throw Error(Errc::Indeterminate, "preparation hypothesis fails for every variable");
}

bool is_unit(const Series& f)
{
    if (f.is_zero_ideal() || f.denom_exp() > 0) return false;
    Valuation v = Cyclo(f.ring().zmod(), f.ring().level()).valuation(f.raw(0));
    return v.is_zero();
}

bool is_unit_rational(const Series& f)
{
    if (f.is_zero_ideal() || f.residues_zero()) return false;
    Valuation v = Cyclo(f.ring().zmod(), f.ring().level()).valuation(f.raw(0));
    return v.is_finite() && Valuation::finite(v.value() - f.denom_exp()) == mu_invariant(f);
}

Series unit_inverse(const Series& f)
{
    if (!is_unit_rational(f)) throw Error(Errc::NotAUnit, "series is not a unit");
    const SeriesRing& R = f.ring();
    const std::size_t phi = R.phi();
    Cyclo cy(R.zmod(), R.level());
    const Rational v0 = cy.valuation(f.raw(0)).value();
    const long long r = (v0 * static_cast<long long>(phi)).numerator();
    Series u = f;
    if (r > 0) {
        std::vector<u64> data = f.data();
        for (std::uint32_t slot : R.used()) cy.div_pi_pow(data.data() + slot * phi, r);
        u = Series::from_data(R, std::move(data), 0);
    } else if (f.denom_exp() > 0) {
        u = Series::from_data(R, f.data(), 0);
    }
    Series x = Series::constant(R, u.coeff_at(0).inverse());
    const Series two = Series::from_int(R, 2);
    for (int it = 0; it < 64; ++it) {
        Series nx = x * (two - u * x);
        if (nx == x) break;
        x = std::move(nx);
    }
    if (r == 0) return x.times_p_power(f.denom_exp());
    QScalar scale = QScalar(uniformizer(R.zmod(), R.level()).pow(r), 0).inverse() * QScalar::p_power(R.zmod(), f.denom_exp(), R.level());
    return x.scaled(scale);
}

}  // namespace iwasawa
