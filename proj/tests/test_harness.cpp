#include "gen.hpp"

#include "iwasawa/errors.hpp"
#include "iwasawa/harness.hpp"

#include <doctest.h>

using namespace iwasawa;
using iwasawa::testing::Gen;

namespace {

Series c(const SeriesRing& R, long long v) { return Series::from_int(R, v); }
Series t(const SeriesRing& R, int i) { return Series::variable(R, i); }
Series pc(const SeriesRing& R, long long v, int e) { return c(R, v).times_p_power(e); }

Series rootwise_f(const SeriesRing& R)
{
    return t(R, 1) * t(R, 1) + (t(R, 0) * t(R, 1)).times_p_power(3) + (t(R, 0) + c(R, static_cast<long long>(R.p()))).times_p_power(3);
}

Series rootwise_g(const SeriesRing& R) { return t(R, 1) * t(R, 1) + (t(R, 0) + c(R, static_cast<long long>(R.p()))).times_p_power(3); }

// Value of a one-variable polynomial at zeta^j - 1, computed term by term.
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

// A polynomial with unit constant or unit top coefficient, so that mu = 0.
Series mu_zero_poly(Gen& g, const SeriesRing& R, int maxdeg)
{
    for (;;) {
        Series f = g.series(R, 4, maxdeg);
        if (mu_invariant(f).is_zero()) return f;
    }
}

}  // namespace

TEST_CASE("characteristic ideals")
{
    const SeriesRing R(3, 10, 2, 10);
    const Series f = t(R, 0) + c(R, 3) + t(R, 1);
    ElementaryModule m;
    m.factors.emplace_back(f, 1);
    m.p_part.push_back(2);
    CHECK(char_ideal(m, R) == f.scaled(PadicScalar::from_int(R.zmod(), 9)));
    CHECK(char_ideal(ElementaryModule{}, R) == Series::one(R));
    CHECK(mu_invariant(char_ideal(m, R)) == Valuation::finite(2));
    ElementaryModule nt;
    nt.non_torsion = true;
    CHECK(char_ideal(nt, R).is_zero_ideal());
    CHECK(char_ideal(m + nt, R).is_zero_ideal());

    Gen g(1201);
    for (int trial = 0; trial < 30; ++trial) {
        ElementaryModule a, b;
        for (int i = 0, n = static_cast<int>(g.range(0, 2)); i < n; ++i) a.factors.emplace_back(g.series(R, 3, 3), static_cast<int>(g.range(1, 2)));
        for (int i = 0, n = static_cast<int>(g.range(0, 2)); i < n; ++i) b.factors.emplace_back(g.series(R, 3, 3), 1);
        for (int i = 0, n = static_cast<int>(g.range(0, 2)); i < n; ++i) b.p_part.push_back(static_cast<int>(g.range(1, 3)));
        CHECK(char_ideal(a + b, R) == char_ideal(a, R) * char_ideal(b, R));
        bool all_mu_zero = true;
        for (const auto& [h, n] : b.factors) all_mu_zero = all_mu_zero && mu_invariant(h).is_zero();
        int total = 0;
        for (int e : b.p_part) total += e;
        if (all_mu_zero && b.factors.size() + b.p_part.size() > 0) CHECK(mu_invariant(char_ideal(b, R)) == Valuation::finite(total));
    }
}

TEST_CASE("functional equation check")
{
    const SeriesRing R(3, 10, 1, 16);
    const Series sigma = c(R, 1) + t(R, 0);
    CHECK(functional_equation_check(sigma + Series::group_element(R, {-1}) - c(R, 2)));
    CHECK(functional_equation_check(t(R, 0)));
    CHECK_FALSE(functional_equation_check(t(R, 0) + c(R, 3)));
    CHECK(functional_equation_check((t(R, 0) + c(R, 3)) * sharp(t(R, 0) + c(R, 3))));
}

TEST_CASE("specialization shape")
{
    const SeriesRing R(3, 10, 2, 10);
    TowerConfig tw;
    tw.p = 3;
    tw.N = 10;
    tw.D = 10;
    tw.d = 2;
    tw.contains_unramified = false;
    PlaceData v1;
    v1.id = "v1";
    v1.q = 3;
    v1.reduction = Reduction::SplitMult;
    v1.frobenius = {1, 0};
    v1.inertia = {{0, 1}};
    PlaceData v2;
    v2.id = "v2";
    v2.q = 9;
    v2.reduction = Reduction::NonsplitMult;
    v2.m = 9;
    v2.frobenius = {0, 1};
    const std::vector<PlaceData> places{v1, v2};
    const SubgroupMap target = SubgroupMap::projection(2, {0});

    Gen g(1202);
    for (int trial = 0; trial < 10; ++trial) {
        Series f1 = mu_zero_poly(g, R, 3);
        ElementaryModule m;
        m.factors = {{f1, 1}, {t(R, 0), 1}};
        m.p_part = {2, 1};
        ElementaryModule m2;
        const Series s = specialize(f1, target);
        if (!mu_invariant(s).is_zero()) continue;
        m2.factors = {{s, 1}};
        m2.p_part = {1};
        CHECK(specialization_shape_check(m, m2, tw, places, target));
        ElementaryModule bad = m2;
        const SeriesRing R1 = s.ring();
        bad.factors.emplace_back(t(R1, 0) + c(R1, 3), 1);
        CHECK_FALSE(specialization_shape_check(m, bad, tw, places, target));
    }

    ElementaryModule same;
    same.factors = {{t(R, 0) + t(R, 1) * t(R, 1) + c(R, 3), 1}};
    CHECK(specialization_shape_check(same, same, tw, {}, SubgroupMap::identity(2)));
}

TEST_CASE("root lemma on the rootwise-equal pair")
{
    for (u64 p : {3u, 5u}) {
        const SeriesRing R(p, 16, 2, 24);
        const RootLemmaVerdict v = root_lemma_run(rootwise_f(R), rootwise_g(R), {1, 2, 3});
        CHECK_FALSE(v.hypothesis_ok);
        REQUIRE(v.per_zeta.size() == 3);
        for (const auto& [k, eq] : v.per_zeta) CHECK(eq);
        CHECK(v.conclusion == Conclusion::NotAssociates);
        CHECK(mu_invariant(rootwise_f(R)).is_zero());
        CHECK(mu_invariant(restrict_to(rootwise_f(R), 0)) == Valuation::finite(3));
    }
}

TEST_CASE("root lemma on associate pairs")
{
    const SeriesRing R(3, 12, 2, 12);
    const Series g0 = t(R, 1) * t(R, 1) + t(R, 0) + c(R, 3);
    RootLemmaVerdict same = root_lemma_run(g0, g0, {1, 2});
    CHECK(same.hypothesis_ok);
    CHECK(same.conclusion == Conclusion::Associates);

    const Series u = c(R, 1) + (t(R, 0) * t(R, 1)).times_p_power(1);
    const RootLemmaVerdict v = root_lemma_run(u * g0, g0, {1, 2, 3});
    CHECK(v.hypothesis_ok);
    for (const auto& [k, eq] : v.per_zeta) CHECK(eq);
    CHECK(v.conclusion == Conclusion::Associates);

    Gen g(1203);
    for (int trial = 0; trial < 20; ++trial) {
        Series base = mu_zero_poly(g, R, 3);
        if (!preparation_hypothesis(base, 0)) continue;
        const Series unit = c(R, static_cast<long long>(g.range(1, 2))) + g.series(R, 3, 3).times_p_power(1);
        const RootLemmaVerdict w = root_lemma_run(base * unit, base, {1, 2});
        CHECK(w.hypothesis_ok);
        for (const auto& [k, eq] : w.per_zeta) CHECK(eq);
        CHECK(w.conclusion == Conclusion::Associates);
    }
}

TEST_CASE("Monsky sampler")
{
    const SeriesRing R(3, 12, 1, 30);
    CHECK(monsky_sampler(t(R, 0), 3, Rational(1)) == 1);
    CHECK(monsky_sampler(c(R, 1), 3, Rational(1)) == 0);
    const Series f = (t(R, 0) - c(R, 3)) * (c(R, 1) + t(R, 0));
    CHECK(monsky_counts(f, 3, Rational(1)) == counts_by_enumeration(f, 3, Rational(1)));
    CHECK_THROWS_AS(monsky_sampler(c(R, 3), 2, Rational(1)), Error);

    Gen g(1204);
    for (int trial = 0; trial < 20; ++trial) {
        const u64 p = g.coin() ? 2 : 3;
        const int lv = static_cast<int>(g.range(0, 1));
        const SeriesRing S(p, 10, 1, 40, lv);
        const Series h = mu_zero_poly(g, S, 4);
        const Rational thr(g.range(1, 3), static_cast<long long>(g.range(1, 2)));
        const std::vector<long long> counts = monsky_counts(h, 4, thr);
        CHECK(counts == counts_by_enumeration(h, 4, thr));
        for (std::size_t k = 1; k < counts.size(); ++k) CHECK(counts[k] >= counts[k - 1]);
    }
}

TEST_CASE("divisibility by kernel forms")
{
    Gen g(1205);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = static_cast<int>(g.range(2, 3));
        const SeriesRing R(3, 8, d, 8);
        std::vector<long long> a;
        long long gcd = 0;
        do {
            a.assign(static_cast<std::size_t>(d), 0);
            gcd = 0;
            for (auto& x : a) {
                x = g.range(-2, 2);
                gcd = std::gcd(gcd, x);
            }
        } while (gcd != 1);
        const SubgroupMap q = kernel_quotient(a);
        CHECK(q.rows() == d - 1);
        CHECK(is_surjective_mod_p(q, 3));
        for (long long x : q.apply(a)) CHECK(x == 0);
        const Series form = Series::group_element(R, a) - c(R, 1);
        CHECK(divisibility_by_kernel(form * g.series(R, 4, 3), {a}));
        CHECK_FALSE(divisibility_by_kernel(Series::one(R), {a}));
    }
    const SeriesRing R(3, 8, 2, 8);
    CHECK(divisibility_by_kernel(Series(R), {{1, 0}}));
    CHECK(divisibility_by_kernel(Series::zero_ideal(R), {{1, 0}}));
    CHECK_FALSE(divisibility_by_kernel(t(R, 0) + c(R, 3), {{1, 0}}));
    CHECK(divisibility_by_kernel(t(R, 0) * (t(R, 1) + c(R, 3)), {{1, 0}}));
    CHECK_THROWS_AS(kernel_quotient({2, 4}), Error);
}
