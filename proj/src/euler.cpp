#include "iwasawa/euler.hpp"

#include "iwasawa/errors.hpp"

#include <algorithm>
#include <numeric>

namespace iwasawa {

namespace {

using Vec = std::vector<long long>;

bool is_zero_vec(const Vec& v)
{
    return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
}

// Exponent e with x = p^e, or -1.
int log_p(long long x, u64 p)
{
    if (x < 1) return -1;
    int e = 0;
    while (x % static_cast<long long>(p) == 0) {
        x /= static_cast<long long>(p);
        ++e;
    }
    return x == 1 ? e : -1;
}

int vp_ll(long long x, u64 p)
{
    if (x == 0) return 1 << 20;
    int e = 0;
    while (x % static_cast<long long>(p) == 0) {
        x /= static_cast<long long>(p);
        ++e;
    }
    return e;
}

int rank_of(const std::vector<Vec>& vecs)
{
    std::vector<std::vector<BigInt>> a;
    for (const auto& v : vecs) a.emplace_back(v.begin(), v.end());
    if (a.empty()) return 0;
    const std::size_t cols = a[0].size();
    int r = 0;
    for (std::size_t c = 0; c < cols && static_cast<std::size_t>(r) < a.size(); ++c) {
        std::size_t piv = static_cast<std::size_t>(r);
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[static_cast<std::size_t>(r)]);
        const auto& pr = a[static_cast<std::size_t>(r)];
        for (std::size_t i = static_cast<std::size_t>(r) + 1; i < a.size(); ++i) {
            BigInt f = a[i][c];
            if (f == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) a[i][j] = a[i][j] * pr[c] - pr[j] * f;
        }
        ++r;
    }
    return r;
}

BigInt small_det(std::vector<std::vector<BigInt>> a)
{
    const std::size_t n = a.size();
    BigInt det = 1, prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv][k] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = -det;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return det * a[n - 1][n - 1];
}

// Minimum v_p over the r x r minors of the vectors: the p-part of the
// covolume of their Z_p-span inside its saturation, up to a constant.
int minor_content(const std::vector<Vec>& vecs, int r, u64 p)
{
    if (r == 0) return 0;
    const std::size_t n = vecs.size(), cols = vecs[0].size();
    int best = 1 << 20;
    std::vector<std::size_t> rs, cs;
    std::vector<bool> rsel(n, false), csel(cols, false);
    std::fill(rsel.begin(), rsel.begin() + r, true);
    do {
        std::fill(csel.begin(), csel.end(), false);
        std::fill(csel.begin(), csel.begin() + r, true);
        do {
            std::vector<std::vector<BigInt>> m;
            for (std::size_t i = 0; i < n; ++i) {
                if (!rsel[i]) continue;
                std::vector<BigInt> row;
                for (std::size_t j = 0; j < cols; ++j)
                    if (csel[j]) row.push_back(vecs[i][j]);
                m.push_back(std::move(row));
            }
            BigInt det = small_det(std::move(m));
            if (det != 0) best = std::min(best, vp_big(det, p));
        } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
    return best;
}

// Gamma/I is nontrivial as a Z_p-module.
bool quotient_nontrivial(const std::vector<Vec>& gamma, const std::vector<Vec>& inertia, u64 p)
{
    const int rg = rank_of(gamma), ri = rank_of(inertia);
    if (rg > ri) return true;
    if (rg == 0) return false;
    return minor_content(inertia, ri, p) > minor_content(gamma, rg, p);
}

std::vector<Vec> nonzero(const std::vector<Vec>& vs)
{
    std::vector<Vec> out;
    for (const auto& v : vs)
        if (!is_zero_vec(v)) out.push_back(v);
    return out;
}

// A primitive integral h and the coefficients c_i with vecs[i] = c_i h, for
// vectors spanning a rank-one lattice.
std::pair<Vec, std::vector<long long>> rank_one_basis(const std::vector<Vec>& vecs)
{
    Vec h;
    for (const auto& v : vecs)
        if (!is_zero_vec(v)) {
            h = v;
            break;
        }
    long long g = 0;
    for (long long x : h) g = std::gcd(g, x < 0 ? -x : x);
    for (auto& x : h) x /= g;
    std::size_t k = 0;
    while (h[k] == 0) ++k;
    std::vector<long long> c;
    for (const auto& v : vecs) {
        const long long ci = v[k] / h[k];
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] != ci * h[j]) throw Error(Errc::InconsistentFlags, "vectors do not span a rank-one lattice");
        c.push_back(ci);
    }
    return {h, c};
}

// Topological generator p^k h of the Z_p-span of a rank-one family.
Vec procyclic_generator(const std::vector<Vec>& vecs, u64 p)
{
    auto [h, c] = rank_one_basis(vecs);
    int k = 1 << 20;
    for (long long x : c)
        if (x != 0) k = std::min(k, vp_ll(x, p));
    for (auto& x : h)
        for (int i = 0; i < k; ++i) x *= static_cast<long long>(p);
    return h;
}

std::vector<Vec> gamma_gens(const PlaceData& v)
{
    std::vector<Vec> g{v.frobenius};
    for (const auto& i : v.inertia) g.push_back(i);
    return nonzero(g);
}

std::vector<Vec> mapped(const SubgroupMap& m, const std::vector<Vec>& vs)
{
    std::vector<Vec> out;
    for (const auto& v : vs) out.push_back(m.apply(v));
    return nonzero(out);
}

PadicScalar zeta(const Zmod& z, int level, long long j) { return PadicScalar::zeta_pow(z, level, j); }

QScalar lift(const QScalar& x, int level) { return QScalar(x.numerator().at_level(level), x.denom_exp()); }

// Returns p^w with w the exponent of the Tate ideal, or nullopt for (0).
std::optional<int> tate_exponent(const PlaceData& v, u64 p)
{
    const std::vector<Vec> g = gamma_gens(v);
    if (rank_of(g) != 1) return std::nullopt;
    Vec t = v.tate.value_or(Vec{});
    if (!v.tate) {
        t = v.frobenius;
        for (auto& x : t) x *= v.m;
    }
    if (is_zero_vec(t)) return std::nullopt;
    std::vector<Vec> all = g;
    all.push_back(t);
    auto [h, c] = rank_one_basis(all);
    int k = 1 << 20;
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        if (c[i] != 0) k = std::min(k, vp_ll(c[i], p));
    const int w = vp_ll(c.back(), p);
    if (w < k) throw Error(Errc::InconsistentFlags, "Tate period outside the decomposition group of " + v.id);
    return w - k;
}

}  // namespace

const char* reduction_name(Reduction r) noexcept
{
    switch (r) {
    case Reduction::GoodOrdinary: return "good-ordinary";
    case Reduction::SplitMult: return "split-mult";
    case Reduction::NonsplitMult: return "nonsplit-mult";
    }
    return "good-ordinary";
}

Reduction parse_reduction(const std::string& s)
{
    if (s == "good-ordinary") return Reduction::GoodOrdinary;
    if (s == "split-mult") return Reduction::SplitMult;
    if (s == "nonsplit-mult") return Reduction::NonsplitMult;
    throw Error(Errc::InvalidArgument, "unknown reduction type " + s);
}

bool PlaceData::in_S() const noexcept
{
    return std::any_of(inertia.begin(), inertia.end(), [](const Vec& v) { return !is_zero_vec(v); });
}

int PlaceData::lambda() const noexcept
{
    switch (reduction) {
    case Reduction::SplitMult: return 1;
    case Reduction::NonsplitMult: return -1;
    default: return 0;
    }
}

PlaceData PlaceData::pushed_forward(const SubgroupMap& m) const
{
    PlaceData out = *this;
    out.frobenius = m.apply(frobenius);
    out.inertia.clear();
    for (const auto& i : inertia) out.inertia.push_back(m.apply(i));
    if (tate) out.tate = m.apply(*tate);
    out.sigma.reset();
    return out;
}

SeriesRing TowerConfig::ring(int vars, int level) const { return SeriesRing(p, N, vars, D, level); }

void TowerConfig::validate(const PlaceData& v) const
{
    auto bad = [&](const std::string& why) { throw Error(Errc::InconsistentFlags, "place " + v.id + ": " + why); };
    if (static_cast<int>(v.frobenius.size()) != d) bad("Frobenius vector has the wrong length");
    for (const auto& i : v.inertia)
        if (static_cast<int>(i.size()) != d) bad("inertia vector has the wrong length");
    if (log_p(v.q, p) < 1) bad("q_v is not a power of p");
    if (v.m < 1) bad("m_v must be positive");
    if (v.reduction == Reduction::GoodOrdinary && v.m != 1) bad("good reduction has m_v = 1");
    if (v.tate && v.reduction != Reduction::SplitMult) bad("a Tate period needs split multiplicative reduction");
    if (v.tate && static_cast<int>(v.tate->size()) != d) bad("Tate vector has the wrong length");
    if (v.sigma && static_cast<int>(v.sigma->size()) != d) bad("sigma vector has the wrong length");
    if (contains_unramified) {
        if (unramified < 0 || unramified >= d) bad("unramified direction out of range");
        const long long deg = v.frobenius[static_cast<std::size_t>(unramified)];
        const int eq = log_p(q, p), ev = log_p(v.q, p);
        if (eq < 1) throw Error(Errc::InconsistentFlags, "q is not a power of p");
        if (deg < 1 || static_cast<long long>(ev) != deg * eq) bad("q_v must equal q^deg(v)");
        for (const auto& i : v.inertia)
            if (i[static_cast<std::size_t>(unramified)] != 0) bad("inertia meets the unramified direction");
    }
}

LocalFlags local_flags(const PlaceData& v, const SubgroupMap& m, u64 p)
{
    LocalFlags f;
    const std::vector<Vec> g = gamma_gens(v), in = nonzero(v.inertia);
    const std::vector<Vec> gi = mapped(m, g), ii = mapped(m, in);
    f.rank_gamma = rank_of(g);
    f.rank_image = rank_of(gi);
    f.rank_psi = f.rank_gamma - f.rank_image;
    f.in_S = !in.empty();
    f.in_S_target = !ii.empty();
    f.quadratic_top = p == 2 && quotient_nontrivial(g, in, p);
    f.quadratic_target = p == 2 && quotient_nontrivial(gi, ii, p);
    f.frob_image = m.apply(v.frobenius);
    if (f.rank_image == 1) f.generator = procyclic_generator(gi, p);
    return f;
}

PadicScalar unit_root(const PlaceData& v, const Zmod& z)
{
    if (v.reduction != Reduction::GoodOrdinary) throw Error(Errc::InvalidArgument, "unit root needs good ordinary reduction");
    const u64 a = z.from_int(v.a), q = z.from_int(v.q);
    if (a % z.p() == 0) throw Error(Errc::NotOrdinary, "a_v is divisible by p");
    u64 x = a;
    for (int it = 0; it < 2 * z.N() + 8; ++it) {
        const u64 fx = z.add(z.sub(z.mul(x, x), z.mul(a, x)), q);
        const u64 dx = z.sub(z.add(x, x), a);
        const u64 nx = z.sub(x, z.mul(fx, z.inv(dx)));
        if (nx == x) return PadicScalar::from_residue(z, x);
        x = nx;
    }
    throw Error(Errc::PrecisionExhausted, "Newton iteration did not stabilise");
}

bool avoids_small_roots_of_unity(const PadicScalar& alpha, long long bound)
{
    const PadicScalar one = PadicScalar::from_int(alpha.zmod(), 1, alpha.level());
    PadicScalar x = alpha;
    for (long long k = 1; k <= bound; ++k) {
        if (x == one) return false;
        x = x * alpha;
    }
    return true;
}

Series varrho(const TowerConfig& tower, int e)
{
    if (e < 0) throw Error(Errc::InvalidArgument, "negative rank");
    const SeriesRing R = tower.ring(e);
    if (e >= 1 || e == tower.d) return Series::one(R);
    const PadicScalar t = PadicScalar::from_int(R.zmod(), tower.torsion_order);
    return Series::constant(R, t * t);
}

Series theta_factor(const PlaceData& v, const TowerConfig& tower, const SubgroupMap& target)
{
    tower.validate(v);
    if (target.cols() != tower.d) throw Error(Errc::InvalidArgument, "target map does not start at Gamma");
    const SeriesRing R = tower.ring(target.rows());
    const Zmod& z = R.zmod();
    const LocalFlags f = local_flags(v, target, tower.p);
    const Series one = Series::one(R);
    auto c = [&](long long x) { return Series::from_int(R, x); };
    if (!f.in_S) return f.rank_psi > 0 ? c(v.m) : one;

    switch (v.reduction) {
    case Reduction::GoodOrdinary: {
        if (f.in_S_target) return one;
        const PadicScalar ainv = unit_root(v, z).inverse();
        Vec inv = f.frob_image;
        for (auto& x : inv) x = -x;
        return (one - Series::group_element(R, f.frob_image).scaled(ainv)) * (one - Series::group_element(R, inv).scaled(ainv));
    }
    case Reduction::SplitMult: {
        if (f.rank_psi == 0) return one;
        if (f.rank_image == 0) {
            const std::optional<int> w = tate_exponent(v, tower.p);
            if (!w) return Series::zero_ideal(R);
            return Series::one(R).times_p_power(*w);
        }
        if (f.rank_image == 1) return Series::group_element(R, *f.generator) - one;
        return one;
    }
    case Reduction::NonsplitMult: {
        if (f.rank_image == 0 && f.rank_psi >= 2) return c(2 * v.m);
        if (f.rank_image == 0 && f.rank_psi == 1) return c(f.quadratic_top ? v.m : 2 * v.m);
        if (f.rank_psi > 0 && !f.in_S_target && f.rank_image == 1) return one + Series::group_element(R, f.frob_image);
        if (f.rank_psi > 0 && f.in_S_target && f.rank_image == 1 && f.quadratic_target)
            return one + Series::group_element(R, *f.generator);
        return one;
    }
    }
    return one;
}

Series theta(const std::vector<PlaceData>& places, const TowerConfig& tower, const SubgroupMap& target)
{
    Series out = Series::one(tower.ring(target.rows()));
    for (const auto& v : places) out = out * theta_factor(v, tower, target);
    return out;
}

Series dagger_factor(const PlaceData& v, const TowerConfig& tower)
{
    tower.validate(v);
    const SeriesRing R = tower.ring(tower.d);
    const Series one = Series::one(R);
    const std::vector<Vec> g = gamma_gens(v);
    if (!v.in_S()) return g.empty() ? Series::from_int(R, v.m) : one;
    if (rank_of(g) != 1 || v.reduction == Reduction::GoodOrdinary) return one;
    const Vec sigma = v.sigma.value_or(procyclic_generator(g, tower.p));
    const Series s = Series::group_element(R, sigma);
    if (v.reduction == Reduction::SplitMult) return one - s;
    if (tower.p == 2 && quotient_nontrivial(g, nonzero(v.inertia), tower.p)) return -one - s;
    return one;
}

Series dagger(const std::vector<PlaceData>& places, const TowerConfig& tower)
{
    Series out = Series::one(tower.ring(tower.d));
    for (const auto& v : places) out = out * dagger_factor(v, tower);
    return out;
}

Series diamond(const PlaceData& v, const FiniteCharacter& chi, const TowerConfig& tower)
{
    tower.validate(v);
    if (!v.in_S()) throw Error(Errc::InvalidArgument, "diamond is defined for places in S");
    if (chi.dim() != tower.d) throw Error(Errc::InvalidArgument, "character does not match the tower");
    const SeriesRing R = tower.ring(1, chi.level());
    const Zmod& z = R.zmod();
    const Series one = Series::one(R);
    for (const auto& i : v.inertia)
        if (chi.exponent_of(i) != 0) return one;
    const long long j = chi.exponent_of(v.frobenius);
    const long long deg = v.frobenius[static_cast<std::size_t>(tower.unramified)];
    const PadicScalar cv = zeta(z, chi.level(), j), cinv = zeta(z, chi.level(), -j);
    const Series fv = Series::group_element(R, {deg}), finv = Series::group_element(R, {-deg});
    switch (v.reduction) {
    case Reduction::GoodOrdinary: {
        const PadicScalar ainv = unit_root(v, z).inverse().at_level(chi.level());
        return (one - finv.scaled(ainv * cinv)) * (one - fv.scaled(ainv * cv));
    }
    case Reduction::SplitMult: return one - finv.scaled(cinv);
    case Reduction::NonsplitMult: return tower.p == 2 ? -one - finv.scaled(cinv) : one;
    }
    return one;
}

Conductor tame_conductor(const std::vector<PlaceData>& places, const FiniteCharacter& omega)
{
    Conductor out;
    for (const auto& v : places)
        for (const auto& i : v.inertia)
            if (omega.exponent_of(i) != 0) out[v.id] = 1;
    return out;
}

namespace {

int conductor_at(const Conductor& c, const std::string& id)
{
    auto it = c.find(id);
    return it == c.end() ? 0 : it->second;
}

}  // namespace

QScalar xi_factor(const std::vector<PlaceData>& places, const FiniteCharacter& omega, const Conductor& conductor, const Zmod& z)
{
    const int L = omega.level();
    const PadicScalar one = PadicScalar::from_int(z, 1, L);
    PadicScalar out = one;
    for (const auto& v : places) {
        if (!v.in_S() || conductor_at(conductor, v.id) > 0) continue;
        const long long j = omega.exponent_of(v.frobenius);
        const PadicScalar w = zeta(z, L, j), winv = zeta(z, L, -j);
        if (v.reduction == Reduction::GoodOrdinary) {
            const PadicScalar ainv = unit_root(v, z).inverse().at_level(L);
            out = out * (one - ainv * w) * (one - ainv * winv);
        } else {
            out = out * (PadicScalar::from_int(z, v.lambda(), L) - winv);
        }
    }
    return QScalar(out);
}

QScalar alpha_conductor(const std::vector<PlaceData>& places, const Conductor& conductor, const Zmod& z, int level)
{
    PadicScalar out = PadicScalar::from_int(z, 1, level);
    for (const auto& v : places) {
        if (!v.in_S()) continue;
        const int ord = conductor_at(conductor, v.id);
        if (v.reduction == Reduction::GoodOrdinary) out = out * unit_root(v, z).pow(ord).at_level(level);
        else if (ord > 0) out = out * PadicScalar::from_int(z, v.lambda(), level).pow(ord - 1);
    }
    return QScalar(out);
}

QScalar star_factor(const FiniteCharacter& omega, const TowerConfig& tower, const std::vector<PlaceData>& places,
                    const PadicScalar& tau, long long deg_delta, long long kappa, const Conductor& conductor)
{
    if (deg_delta % 12 != 0) throw Error(Errc::NotDivisibleBy12, "deg(Delta) must be divisible by 12");
    const int L = std::max(omega.level(), tau.level());
    const Zmod z(tower.p, tower.N);
    const QScalar wd = lift(evaluate_at_character(dagger(places, tower), omega), L);
    if (wd.is_zero()) throw Error(Errc::DaggerVanishes, "omega(dagger) vanishes");
    const int eq = log_p(tower.q, tower.p);
    if (eq < 1) throw Error(Errc::InconsistentFlags, "q is not a power of p");
    const long long x = deg_delta / 12 + kappa - 1;
    const QScalar qpow = QScalar::p_power(z, static_cast<int>(x * eq), L);
    const QScalar alpha = lift(alpha_conductor(places, conductor, z), L);
    const QScalar xi = lift(xi_factor(places, omega, conductor, z), L);
    return wd.inverse() * alpha.inverse() * QScalar(tau.at_level(L)) * qpow * xi;
}

Series c_chi(const std::vector<PadicScalar>& P, long long q, const SeriesRing& ring, int var)
{
    if (P.empty()) throw Error(Errc::InvalidArgument, "empty L-polynomial");
    if (var < 0 || var >= ring.d()) throw Error(Errc::InvalidArgument, "Frobenius variable out of range");
    const int eq = log_p(q, ring.p());
    if (eq < 1) throw Error(Errc::InvalidArgument, "q is not a power of p");
    int L = ring.level();
    for (const auto& c : P) L = std::max(L, c.level());
    const SeriesRing R = ring.with_level(L);
    if (P[0] != PadicScalar::from_int(P[0].zmod(), 1, P[0].level())) throw Error(Errc::InvalidArgument, "L-polynomial must satisfy P(0) = 1");
    const long long deg = static_cast<long long>(P.size()) - 1;
    const PadicScalar qs = PadicScalar::from_int(R.zmod(), q, L);
    Series out(R);
    for (long long k = 0; k <= deg; ++k) {
        std::vector<long long> e(static_cast<std::size_t>(R.d()), 0);
        e[static_cast<std::size_t>(var)] = -k;
        out = out + Series::group_element(R, e).scaled(P[static_cast<std::size_t>(k)].at_level(L) * qs.pow(deg - k));
    }
    return out.times_p_power(-static_cast<int>(deg) * eq);
}

Series rho_factor(const PlaceData& v, const FiniteCharacter& chi, const TowerConfig& tower)
{
    tower.validate(v);
    if (v.lambda() == 0) throw Error(Errc::InvalidArgument, "rho needs multiplicative reduction");
    if (chi.dim() != tower.d) throw Error(Errc::InvalidArgument, "character does not match the tower");
    const SeriesRing R = tower.ring(1, chi.level());
    const long long deg = v.frobenius[static_cast<std::size_t>(tower.unramified)];
    const PadicScalar c = zeta(R.zmod(), chi.level(), -chi.exponent_of(v.frobenius)) * PadicScalar::from_int(R.zmod(), v.lambda(), chi.level());
    const Series inner = Series::one(R) - Series::group_element(R, {deg}).scaled(c).times_p_power(-log_p(v.q, tower.p));
    return sharp(inner);
}

bool rho_unit_check(const PlaceData& v, const FiniteCharacter& chi, const TowerConfig& tower)
{
    return is_unit_rational(rho_factor(v, chi, tower));
}

Series dagger_chi(const FiniteCharacter& chi, const TowerConfig& tower, const std::vector<PlaceData>& places,
                  const PadicScalar& tau, long long deg_delta, long long kappa, const Conductor& conductor)
{
    if (deg_delta % 12 != 0) throw Error(Errc::NotDivisibleBy12, "deg(Delta) must be divisible by 12");
    const int L = std::max(chi.level(), tau.level());
    const SeriesRing R = tower.ring(1, L);
    const Zmod& z = R.zmod();
    const int eq = log_p(tower.q, tower.p);
    if (eq < 1) throw Error(Errc::InconsistentFlags, "q is not a power of p");
    long long deg_d = 0;
    for (const auto& v : places) deg_d += conductor_at(conductor, v.id) * (log_p(v.q, tower.p) / eq);
    const QScalar scalar = lift(alpha_conductor(places, conductor, z), L) * QScalar(tau.at_level(L)) *
                           QScalar::p_power(z, static_cast<int>((deg_delta / 12 + kappa - 1) * eq), L);
    Series out = Series::group_element(R, {-2 + 2 * kappa + deg_d}).scaled(scalar);
    if (tower.p != 2) {
        for (const auto& v : places) {
            if (!v.in_S() || v.reduction != Reduction::NonsplitMult || conductor_at(conductor, v.id) > 0) continue;
            const long long deg = v.frobenius[static_cast<std::size_t>(tower.unramified)];
            const PadicScalar cv = zeta(z, chi.level(), chi.exponent_of(v.frobenius)).at_level(L);
            out = out * (-Series::one(R) - Series::group_element(R, {deg}).scaled(cv));
        }
    }
    return out;
}

}  // namespace iwasawa
