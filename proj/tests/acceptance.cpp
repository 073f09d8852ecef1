#include "ext_field.hpp"
#include "gen.hpp"

#include "iwasawa/cli.hpp"
#include "iwasawa/errors.hpp"
#include "iwasawa/harness.hpp"
#include "iwasawa/moduli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>

using namespace iwasawa;
using iwasawa::testing::Ext;
using iwasawa::testing::Gen;

namespace {

using Vec = std::vector<long long>;

struct Verdict {
    bool pass = true;
    std::string detail;
};

/// Tallies checks; the first failure message is kept for the report.
class Tally {
public:
    void check(bool ok, const std::string& what)
    {
        ++total_;
        if (ok) return;
        ++failed_;
        if (first_.empty()) first_ = what;
    }
    int total() const { return total_; }
    Verdict verdict(const std::string& note = "") const
    {
        std::ostringstream os;
        os << total_ - failed_ << "/" << total_ << " checks";
        if (!note.empty()) os << ", " << note;
        if (failed_) os << "; first failure: " << first_;
        return {failed_ == 0, os.str()};
    }

private:
    int total_ = 0, failed_ = 0;
    std::string first_;
};

Series c(const SeriesRing& R, long long v) { return Series::from_int(R, v); }
Series t(const SeriesRing& R, int i) { return Series::variable(R, i); }

// ---------------------------------------------------------------------------
// 1. Rootwise-equal pair

Verdict rootwise_regression()
{
    Tally tally;
    int roots = 0;
    for (u64 p : {3u, 5u}) {
        const SeriesRing R(p, 16, 2, 24);
        const long long pl = static_cast<long long>(p), p3 = pl * pl * pl;
        const Series g = t(R, 1) * t(R, 1) + c(R, p3) * (t(R, 0) + c(R, pl));
        const Series f = g + c(R, p3) * t(R, 0) * t(R, 1);
        const SubgroupMap first = SubgroupMap::projection(2, {0});
        long long order = 1;
        for (int k = 1; k <= 3; ++k) {
            order *= pl;
            for (long long j = 1; j < order; ++j) {
                if (j % pl == 0) continue;
                const FiniteCharacter chi(p, k, {0, j});
                tally.check(associates(chi_map(f, chi, first), chi_map(g, chi, first)),
                            "p=" + std::to_string(p) + " zeta^" + std::to_string(j) + " of order p^" + std::to_string(k));
                ++roots;
            }
        }
        tally.check(!associates(f, g), "two-variable associates");
        tally.check(mu_invariant(f) == Valuation::finite(0) && mu_invariant(g) == Valuation::finite(0), "mu(f) = mu(g) = 0");
        tally.check(mu_invariant(restrict_to(f, 0)) == Valuation::finite(3) && mu_invariant(restrict_to(g, 0)) == Valuation::finite(3),
                    "mu(f(t0,0)) = mu(g(t0,0)) = 3");
    }
    return tally.verdict(std::to_string(roots) + " roots of unity");
}

// ---------------------------------------------------------------------------
// 2. Weierstrass preparation

Series prepared_input(Gen& g, const SeriesRing& R, int pi_digits)
{
    for (;;) {
        Series f = g.series(R, static_cast<int>(g.range(1, 6)), static_cast<int>(g.range(1, R.D())));
        Exponent e(static_cast<std::size_t>(R.d()), 0);
        e[0] = static_cast<int>(g.range(0, 3));
        f = f + Series::monomial(R, e, g.unit(R.zmod(), R.level()));
        f = f.scaled(uniformizer(R.zmod(), R.level()).pow(pi_digits));
        if (preparation_hypothesis(f, 0)) return f;
    }
}

Rational least_valuation(const Series& f)
{
    std::optional<Rational> least;
    for (const auto& [e, a] : f.terms())
        if (!least || a.valuation().value() < *least) least = a.valuation().value();
    return *least;
}

Verdict weierstrass_reconstruction()
{
    Tally tally;
    Gen g(2001);
    for (int trial = 0; trial < 500; ++trial) {
        const u64 p = std::vector<u64>{2, 3, 5}[static_cast<std::size_t>(trial % 3)];
        const int d = static_cast<int>(g.range(1, 2)), level = static_cast<int>(g.range(0, 1));
        const SeriesRing R(p, 8, d, 8, level);
        const int r = static_cast<int>(g.range(0, 2)) * static_cast<int>(R.phi());
        std::optional<Series> input;
        Rational mu;
        do {
            input = prepared_input(g, R, r);
            mu = least_valuation(*input);
        } while (mu > Rational(2));
        const Series& f = *input;
        const std::string tag = "case " + std::to_string(trial);
        const Prepared pr = weierstrass_prepare(f);
        const Series P = pr.poly.to_series(R);
        tally.check(pr.mu == Valuation::finite(mu), tag + ": mu " + pr.mu.str() + " vs least coefficient valuation " + Valuation::finite(mu).str());
        const Rational digits = mu * Rational(static_cast<long long>(R.phi()));
        tally.check(pr.unit.scaled(uniformizer(R.zmod(), level).pow(digits.numerator())) * P == f, tag + ": p^mu * unit * P == f");
        tally.check(is_unit(pr.unit), tag + ": unit");
        bool tails = true;
        for (const auto& a : pr.poly.tail) tails = tails && a.coeff_at(0).valuation().at_least(Rational(1, static_cast<long long>(R.phi())));
        tally.check(tails, tag + ": distinguished");
        const Prepared again = weierstrass_prepare(pr.unit * P);
        tally.check(again.unit == pr.unit && again.poly.to_series(R) == P, tag + ": idempotent");
    }
    return tally.verdict();
}

// ---------------------------------------------------------------------------
// 3. Operator identities

Verdict operator_identities()
{
    Tally tally;
    Gen g(2002);
    for (int trial = 0; trial < 300; ++trial) {
        const u64 p = trial % 2 ? 3 : 2;
        const std::string tag = "case " + std::to_string(trial);
        const SeriesRing R(p, 6, 2, 8, static_cast<int>(g.range(0, 1)));
        const Series f = g.series(R, 5, 4), h = g.series(R, 5, 4);

        tally.check(sharp(sharp(f)) == f, tag + ": sharp involution");
        tally.check(sharp(f * h) == sharp(f) * sharp(h) && sharp(f + h) == sharp(f) + sharp(h), tag + ": sharp homomorphism");

        const FiniteCharacter chi(p, static_cast<int>(g.range(0, 2)), {g.range(0, 20), g.range(0, 20)});
        const FiniteCharacter psi(p, static_cast<int>(g.range(0, 2)), {g.range(0, 20), g.range(0, 20)});
        const int top = std::max({R.level(), chi.level(), psi.level()});
        tally.check(twist(twist(f, chi), psi).at_level(top) == twist(f, chi * psi).at_level(top), tag + ": twist composition");

        const SeriesRing Z(p, 6, 2, 8);
        const Series a = g.series(Z, 4, 4), b = g.series(Z, 4, 4);
        IntMatrix H;
        long long index = 0;
        do {
            H = {{g.range(-3, 3), g.range(-3, 3)}, {g.range(-3, 3), g.range(-3, 3)}};
            const BigInt det = determinant(H);
            index = det == 0 ? 0 : Subgroup(H, p).index();
        } while (index == 0 || index > 9);
        const Subgroup phi(H, p);
        const Series na = norm_descent(a, phi), nb = norm_descent(b, phi);
        tally.check(norm_descent(a * b, phi) == na * nb, tag + ": norm multiplicativity");
        tally.check(na.ring().level() == 0 && na.denom_exp() == 0, tag + ": norm integrality");

        const int e = static_cast<int>(g.range(1, 2));
        IntMatrix M(static_cast<std::size_t>(e), Vec(2));
        for (auto& row : M)
            for (auto& x : row) x = g.range(-4, 4);
        const SubgroupMap m(M, 2);
        const Valuation mf = mu_invariant(f), ms = mu_invariant(specialize(f, m));
        tally.check(!(mf.is_finite() && ms.is_finite()) || ms.value() >= mf.value(), tag + ": mu monotone");

        const SeriesRing small(R.zmod(), 2, 10, R.level());
        const Series s = g.series(small, 3, 3);
        const SubgroupMap pos(IntMatrix{{g.range(0, 3), g.range(0, 3)}});
        const long long w = g.range(-9, 9);
        const int lv = static_cast<int>(g.range(0, 2));
        tally.check(evaluate(specialize(s, pos), lv, {w}) == evaluate(s, lv, {w * pos.M[0][0], w * pos.M[0][1]}),
                    tag + ": evaluate after specialize");
    }
    return tally.verdict();
}

// ---------------------------------------------------------------------------
// Euler factor helpers

PlaceData make_place(const std::string& id, Reduction r, long long q, Vec frob, std::vector<Vec> inertia = {}, long long m = 1, long long a = 0)
{
    PlaceData v;
    v.id = id;
    v.reduction = r;
    v.q = q;
    v.m = m;
    v.a = a;
    v.frobenius = std::move(frob);
    v.inertia = std::move(inertia);
    return v;
}

TowerConfig make_tower(u64 p, int d, bool unramified_inside, int N, int D)
{
    TowerConfig tw;
    tw.p = p;
    tw.N = N;
    tw.D = D;
    tw.d = d;
    tw.contains_unramified = unramified_inside;
    tw.q = static_cast<long long>(p);
    return tw;
}

Vec random_vec(Gen& g, int d, long long lo, long long hi)
{
    Vec v(static_cast<std::size_t>(d));
    for (auto& x : v) x = g.range(lo, hi);
    return v;
}

SubgroupMap random_surjection(Gen& g, int rows, int cols, u64 p)
{
    for (;;) {
        IntMatrix M(static_cast<std::size_t>(rows), Vec(static_cast<std::size_t>(cols)));
        for (auto& row : M)
            for (auto& x : row) x = g.range(-2, 2);
        SubgroupMap m(M, cols);
        if (is_surjective_mod_p(m, p)) return m;
    }
}

PlaceData random_place(Gen& g, const std::string& id, int d, u64 p)
{
    const auto r = static_cast<Reduction>(g.range(0, 2));
    PlaceData v = make_place(id, r, static_cast<long long>(p) * (g.coin() ? 1 : static_cast<long long>(p)), random_vec(g, d, -2, 2));
    for (int i = 0, n = static_cast<int>(g.range(0, 2)); i < n; ++i) v.inertia.push_back(random_vec(g, d, -2, 2));
    if (r == Reduction::GoodOrdinary) {
        do v.a = g.range(-5, 5);
        while (v.a % static_cast<long long>(p) == 0);
    } else {
        v.m = g.range(1, 4);
    }
    return v;
}

// ---------------------------------------------------------------------------
// 4. Factor compositionality

Verdict compositionality()
{
    Tally tally;
    Gen g(2004);
    int indeterminate = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::string tag = "chain " + std::to_string(trial);
        const u64 p = g.coin() ? 2 : 3;
        TowerConfig tw = make_tower(p, 3, false, 10, 8);
        tw.torsion_order = g.range(1, 9);
        std::vector<PlaceData> places;
        for (int i = 0, n = static_cast<int>(g.range(1, 3)); i < n; ++i) places.push_back(random_place(g, "v" + std::to_string(i), 3, p));
        const int e1 = static_cast<int>(g.range(0, 2)), e2 = static_cast<int>(g.range(0, e1));
        const SubgroupMap m1 = random_surjection(g, e1, 3, p), m2 = random_surjection(g, e2, e1, p);
        TowerConfig mid = tw;
        mid.d = e1;

        try {
            tally.check(varrho(tw, e2) == specialize(varrho(tw, e1), m2) * varrho(mid, e2), tag + ": varrho");
        } catch (const Error& e) {
            tally.check(false, tag + ": varrho threw " + e.what());
        }

        std::vector<PlaceData> pushed;
        for (const auto& v : places) pushed.push_back(v.pushed_forward(m1));
        std::optional<Series> lhs_, rhs_;
        try {
            lhs_ = theta(places, tw, m2.compose_after(m1));
            rhs_ = specialize(theta(places, tw, m1), m2) * theta(pushed, mid, m2);
        } catch (const Error& e) {
            tally.check(false, tag + ": theta threw " + std::string(e.what()));
            continue;
        }
        const Series &lhs = *lhs_, &rhs = *rhs_;
        if (lhs.is_zero_ideal() || rhs.is_zero_ideal() || lhs.residues_zero() || rhs.residues_zero()) {
            tally.check((lhs.is_zero_ideal() || lhs.residues_zero()) && (rhs.is_zero_ideal() || rhs.residues_zero()), tag + ": theta (zero ideal)");
            continue;
        }
        try {
            tally.check(associates(lhs, rhs), tag + ": theta");
        } catch (const Error& e) {
            if (e.code() != Errc::Indeterminate) throw;
            ++indeterminate;
            tally.check(false, tag + ": theta indeterminate");
        }
    }
    for (int trial = 0; trial < 50; ++trial) {
        const u64 p = g.coin() ? 2 : 3;
        TowerConfig tw = make_tower(p, 2, true, 10, 10);
        std::vector<PlaceData> places;
        for (int i = 0, n = static_cast<int>(g.range(1, 3)); i < n; ++i) {
            PlaceData v = random_place(g, "v" + std::to_string(i), 2, p);
            v.frobenius[0] = g.range(1, 2);
            v.q = v.frobenius[0] == 1 ? static_cast<long long>(p) : static_cast<long long>(p * p);
            for (auto& in : v.inertia) in[0] = 0;
            places.push_back(v);
        }
        tally.check(mu_invariant(theta(places, tw, SubgroupMap::projection(2, {0}))).is_zero(), "unramified target " + std::to_string(trial));
    }
    return tally.verdict(std::to_string(indeterminate) + " indeterminate");
}

// ---------------------------------------------------------------------------
// 5. Unit roots

Verdict unit_roots()
{
    Tally tally;
    const Zmod z2(5, 2);
    tally.check(unit_root(make_place("v", Reduction::GoodOrdinary, 5, {1}, {}, 1, 1), z2) == PadicScalar::from_int(z2, 21), "p=5 q=5 a=1 gives 21 mod 25");
    Gen g(2005);
    for (int trial = 0; trial < 50; ++trial) {
        const u64 p = std::vector<u64>{2, 3, 5, 7}[static_cast<std::size_t>(trial % 4)];
        const Zmod z(p, 16);
        long long q = static_cast<long long>(p);
        for (long long k = g.range(0, 2); k > 0; --k) q *= static_cast<long long>(p);
        long long a;
        do a = g.range(-30, 30);
        while (a % static_cast<long long>(p) == 0);
        const std::string tag = "p=" + std::to_string(p) + " q=" + std::to_string(q) + " a=" + std::to_string(a);
        const PadicScalar al = unit_root(make_place("v", Reduction::GoodOrdinary, q, {1}, {}, 1, a), z);
        const PadicScalar A = PadicScalar::from_int(z, a), Q = PadicScalar::from_int(z, q);
        tally.check((al * al - A * al + Q).is_zero(), tag + ": root mod p^16");
        tally.check(static_cast<long long>(al[0] % p) == ((a % static_cast<long long>(p)) + static_cast<long long>(p)) % static_cast<long long>(p),
                    tag + ": alpha = a mod p");
        tally.check(al * (A - al) == Q, tag + ": alpha beta = q");
    }
    return tally.verdict();
}

// ---------------------------------------------------------------------------
// 6. c_chi interpolation

Verdict cchi_interpolation()
{
    Tally tally;
    Gen g(2006);
    for (int trial = 0; trial < 100; ++trial) {
        const u64 p = g.coin() ? 2 : 3;
        const int N = 6, lw = static_cast<int>(g.range(0, 2)), lp = static_cast<int>(g.range(0, 1));
        const long long q = static_cast<long long>(p);
        const int deg = static_cast<int>(g.range(0, 3));
        const int D = static_cast<int>(euler_phi_pow(p, lw)) * (N + deg) + 1;
        const SeriesRing R(p, N, 1, D, lp);
        std::vector<PadicScalar> P{PadicScalar::from_int(R.zmod(), 1, lp)};
        for (int k = 0; k < deg; ++k) P.push_back(g.scalar(R.zmod(), lp));
        const FiniteCharacter om(p, lw, {g.range(0, 8)});
        const QScalar got = evaluate_at_character(c_chi(P, q, R), om);

        // q^deg P(q^{-1} x) with x = omega(F_q)^{-1}, as a polynomial in x.
        const int L = std::max(lw, lp);
        const PadicScalar x = PadicScalar::zeta_pow(R.zmod(), om.level(), -om.exponent_of({1})).at_level(L);
        PadicScalar acc(R.zmod(), L), xp = PadicScalar::from_int(R.zmod(), 1, L);
        const PadicScalar qs = PadicScalar::from_int(R.zmod(), q, L);
        for (int k = 0; k <= deg; ++k) {
            acc = acc + P[static_cast<std::size_t>(k)].at_level(L) * xp * qs.pow(deg - k);
            xp = xp * x;
        }
        const QScalar expect = QScalar(acc) * QScalar::p_power(R.zmod(), -deg, L);
        tally.check((got - expect).valuation().at_least(Rational(N - deg)), "triple " + std::to_string(trial));
    }
    return tally.verdict("compared to N - deg(P) digits");
}

// ---------------------------------------------------------------------------
// 7. rho and dagger_chi

Verdict unit_factors()
{
    Tally tally;
    Gen g(2007);
    for (int trial = 0; trial < 100; ++trial) {
        const u64 p = g.coin() ? 2 : 3;
        const TowerConfig tw = make_tower(p, 2, true, 8, 12);
        const int lvl = static_cast<int>(g.range(0, 2));
        const FiniteCharacter chi(p, lvl, {g.range(0, 8), g.range(0, 8)});
        std::vector<PlaceData> places;
        for (int i = 0, n = static_cast<int>(g.range(1, 3)); i < n; ++i) {
            const long long deg = g.range(1, 2);
            const Reduction r = g.coin() ? Reduction::SplitMult : Reduction::NonsplitMult;
            PlaceData v = make_place("v" + std::to_string(i), r, deg == 1 ? static_cast<long long>(p) : static_cast<long long>(p * p),
                                     {deg, g.range(-2, 2)}, {{0, g.range(1, 3)}}, g.range(1, 3));
            tally.check(rho_unit_check(v, chi, tw), "rho, config " + std::to_string(trial));
            places.push_back(v);
        }
        const PadicScalar tau = g.unit(Zmod(p, 8), lvl);
        const Series dc = dagger_chi(chi, tw, places, tau, 12 * g.range(0, 2), g.range(-1, 2), tame_conductor(places, chi));
        tally.check(is_unit_rational(dc), "dagger_chi, config " + std::to_string(trial));
    }
    return tally.verdict();
}

// ---------------------------------------------------------------------------
// 8. Monsky sampler

PadicScalar value_at(const Series& f, int level, long long j)
{
    const Zmod& z = f.ring().zmod();
    const int L = std::max(level, f.ring().level());
    long long jj = j;
    for (int i = level; i < L; ++i) jj *= static_cast<long long>(z.p());
    const PadicScalar x = PadicScalar::zeta_pow(z, L, jj) - PadicScalar::from_int(z, 1, L);
    PadicScalar acc(z, L);
    for (const auto& [e, a] : f.terms()) acc = acc + a.at_level(L) * x.pow(e[0]);
    return acc;
}

std::vector<long long> counts_by_enumeration(const Series& f, int max_level, const Rational& threshold)
{
    std::vector<long long> out;
    long long count = 0, order = 1;
    const long long p = static_cast<long long>(f.ring().p());
    for (int k = 0; k <= max_level; ++k) {
        if (k > 0) order *= p;
        for (long long j = 0; j < order; ++j) {
            if (k > 0 && j % p == 0) continue;
            if (value_at(f, k, j).valuation().at_least(threshold - Rational(f.denom_exp()))) ++count;
        }
        out.push_back(count);
    }
    return out;
}

Verdict monsky_shadow()
{
    Tally tally;
    Gen g(2008);
    for (int fixture = 0; fixture < 20; ++fixture) {
        const u64 p = fixture % 2 ? 3 : 2;
        const SeriesRing R(p, 10, 1, 40);
        // mu = 0 with lambda <= 3: a unit coefficient at t^lambda, non-units below.
        const int lambda = static_cast<int>(g.range(0, 3));
        Series f = Series::monomial(R, {lambda}, g.unit(R.zmod(), 0));
        for (int i = 0; i < lambda; ++i) f = f + Series::monomial(R, {i}, g.scalar(R.zmod(), 0)).times_p_power(static_cast<int>(g.range(1, 3)));
        for (int i = lambda + 1; i <= 5; ++i) f = f + Series::monomial(R, {i}, g.scalar(R.zmod(), 0));
        const Rational threshold(g.range(1, 3), 2);
        const std::string tag = "fixture " + std::to_string(fixture);
        tally.check(mu_invariant(f).is_zero(), tag + ": mu = 0");
        const std::vector<long long> counts = monsky_counts(f, 6, threshold);
        const std::vector<long long> oracle = counts_by_enumeration(f, 4, threshold);
        tally.check(std::equal(oracle.begin(), oracle.end(), counts.begin()), tag + ": matches enumeration");
        tally.check(counts[4] == counts[5] && counts[5] == counts[6], tag + ": stable from level 4");
        bool monotone = true;
        for (std::size_t k = 1; k < counts.size(); ++k) monotone = monotone && counts[k] >= counts[k - 1];
        tally.check(monotone, tag + ": monotone");
    }
    return tally.verdict();
}

// ---------------------------------------------------------------------------
// 9. Moduli

FPoly random_poly(std::mt19937_64& rng, std::uint32_t q, int deg)
{
    FPoly f(static_cast<std::size_t>(deg) + 1);
    for (auto& x : f) x = static_cast<std::uint32_t>(rng() % q);
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

bool matches_point_counts(const WeierstrassPair& w, const FiberReport& r)
{
    const GF F(w.q);
    const FPoly delta = discriminant(F, w);
    for (int k = 1; k <= 3; ++k) {
        const Ext X(w.q, k);
        long long add = 0, mult = 0, add_r = 0, mult_r = 0;
        for (const auto& x : X.elements()) {
            if (!Ext::zero(X.eval(delta, x))) continue;
            (Ext::zero(X.eval(w.g2, x)) ? add : mult) += 1;
        }
        for (const auto& f : r.fibers) {
            if (f.point.empty() || k % f.degree != 0) continue;
            if (f.type == FiberType::Additive) add_r += f.degree;
            if (f.type == FiberType::Multiplicative) mult_r += f.degree;
        }
        if (add != add_r || mult != mult_r) return false;
    }
    return r.fibers.back().point.empty() && r.fibers.back().ord_delta == 12 * w.n - fpoly::degree(delta);
}

Verdict moduli_suite()
{
    Tally tally;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        WeierstrassPair w;
        try {
            w = construct_semistable(5, 1, seed, 10000);
        } catch (const Error& e) {
            tally.check(false, "seed " + std::to_string(seed) + ": " + e.what());
            continue;
        }
        const FiberReport r = classify_fibers(w);
        bool semistable = true;
        for (const auto& f : r.fibers) semistable = semistable && f.type != FiberType::Additive;
        tally.check(r.member, "seed " + std::to_string(seed) + ": membership");
        tally.check(semistable, "seed " + std::to_string(seed) + ": no additive fibers");
    }
    std::mt19937_64 rng(2009);
    int compared = 0;
    while (compared < 50) {
        const std::uint32_t q = compared % 2 ? 7 : 5;
        const WeierstrassPair w{q, 1, random_poly(rng, q, 4), random_poly(rng, q, 6)};
        const FiberReport r = classify_fibers(w);
        if (r.delta_zero) continue;
        tally.check(matches_point_counts(w, r), "random pair " + std::to_string(compared));
        ++compared;
    }
    return tally.verdict();
}

// ---------------------------------------------------------------------------
// 10. CLI determinism

std::string run_suite(int threads)
{
    const std::string dir = std::string(IWASAWA_SOURCE_DIR) + "/fixtures/suite";
    const std::string th = std::to_string(threads);
    const char* argv[] = {"iwtool", "suite", dir.c_str(), "--threads", th.c_str()};
    std::ostringstream out, err;
    const int code = cli::run(5, argv, out, err);
    return std::to_string(code) + "\n" + out.str();
}

Verdict cli_determinism()
{
    Tally tally;
    const std::string base = run_suite(1);
    tally.check(base.rfind("0\n", 0) == 0, "suite exit status");
    tally.check(base.find("not ok") == std::string::npos, "every scenario passes");
    tally.check(run_suite(1) == base, "second run, 1 thread");
    for (int threads : {2, 4, 8}) tally.check(run_suite(threads) == base, std::to_string(threads) + " threads");
    const auto n = base.find("1..");
    return tally.verdict(n == std::string::npos ? "" : base.substr(n, base.find('\n', n) - n) + " scenarios");
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria = {
        {1, "rootwise-equal pair", 10, rootwise_regression},
        {2, "Weierstrass preparation reconstruction", 60, weierstrass_reconstruction},
        {3, "operator identities", 120, operator_identities},
        {4, "factor compositionality", 60, compositionality},
        {5, "unit roots", 60, unit_roots},
        {6, "c_chi interpolation", 60, cchi_interpolation},
        {7, "rho and dagger_chi units", 60, unit_factors},
        {8, "Monsky finiteness shadow", 120, monsky_shadow},
        {9, "moduli suite", 60, moduli_suite},
        {10, "CLI determinism", 60, cli_determinism},
    };
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    int failures = 0, ran = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = v.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s  %2d  %-40s %7.2f s / %3.0f s  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_s, v.detail.c_str(),
                    in_time ? "" : " (over time budget)");
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}
