#include "iwasawa/harness.hpp"

#include "iwasawa/errors.hpp"

#include <numeric>

namespace iwasawa {

namespace {

// Ideal equality that also accepts a series vanishing identically at working
// precision as the zero ideal.
bool same_ideal(const Series& a, const Series& b)
{
    if (a.is_zero_ideal() || b.is_zero_ideal())
        return (a.is_zero_ideal() || a.residues_zero()) && (b.is_zero_ideal() || b.residues_zero());
    return associates(a, b);
}

}  // namespace

ElementaryModule ElementaryModule::operator+(const ElementaryModule& o) const
{
    ElementaryModule out = *this;
    out.factors.insert(out.factors.end(), o.factors.begin(), o.factors.end());
    out.p_part.insert(out.p_part.end(), o.p_part.begin(), o.p_part.end());
    out.non_torsion = non_torsion || o.non_torsion;
    return out;
}

Series char_ideal(const ElementaryModule& m, const SeriesRing& ring)
{
    if (m.non_torsion) return Series::zero_ideal(ring);
    Series out = Series::one(ring);
    for (const auto& [f, n] : m.factors) {
        if (n < 1) throw Error(Errc::InvalidArgument, "factor multiplicity must be positive");
        if (f.ring().d() != ring.d() || f.ring().p() != ring.p()) throw Error(Errc::InvalidArgument, "factor lives in another ring");
        out = out * f.rebased(ring).pow(n);
    }
    int total = 0;
    for (int e : m.p_part) {
        if (e < 1) throw Error(Errc::InvalidArgument, "p-part exponents must be positive");
        total += e;
    }
    return out.times_p_power(total);
}

bool functional_equation_check(const Series& f) { return associates(f, sharp(f)); }

bool specialization_shape_check(const ElementaryModule& m, const ElementaryModule& m_target, const TowerConfig& tower,
                                const std::vector<PlaceData>& places, const SubgroupMap& target)
{
    if (target.cols() != tower.d) throw Error(Errc::InvalidArgument, "target map does not start at Gamma");
    int level = 0;
    for (const auto& [f, n] : m.factors) level = std::max(level, f.ring().level());
    for (const auto& [f, n] : m_target.factors) level = std::max(level, f.ring().level());
    const Series lhs = varrho(tower, target.rows()).at_level(level) * specialize(char_ideal(m, tower.ring(tower.d, level)), target);
    const Series rhs = theta(places, tower, target).at_level(level) * char_ideal(m_target, tower.ring(target.rows(), level));
    return same_ideal(lhs, rhs);
}

const char* conclusion_name(Conclusion c) noexcept
{
    switch (c) {
    case Conclusion::Associates: return "associates";
    case Conclusion::NotAssociates: return "not-associates";
    case Conclusion::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

RootLemmaVerdict root_lemma_run(const Series& f, const Series& g, const std::vector<int>& levels)
{
    if (f.ring().d() != 2 || g.ring().d() != 2) throw Error(Errc::InvalidArgument, "the root lemma runs in two variables");
    RootLemmaVerdict out;
    const Valuation mf = mu_invariant(f);
    out.hypothesis_ok = mu_invariant(restrict_to(f, 0)) == mf && mu_invariant(g) == mf && mu_invariant(restrict_to(g, 0)) == mf;
    const SubgroupMap first = SubgroupMap::projection(2, {0});
    for (int k : levels) {
        if (k < 1) throw Error(Errc::InvalidArgument, "root of unity levels start at 1");
        const FiniteCharacter chi(f.ring().p(), k, {0, 1});
        out.per_zeta.emplace_back(k, associates(chi_map(f, chi, first), chi_map(g, chi, first)));
    }
    try {
        out.conclusion = associates(f, g) ? Conclusion::Associates : Conclusion::NotAssociates;
    } catch (const Error& e) {
        if (e.code() != Errc::Indeterminate) throw;
        out.conclusion = Conclusion::Indeterminate;
    }
    return out;
}

std::vector<long long> monsky_counts(const Series& f, int max_level, const Rational& threshold)
{
    const SeriesRing& R = f.ring();
    if (R.d() != 1) throw Error(Errc::InvalidArgument, "the sampler runs in one variable");
    if (max_level < 0) throw Error(Errc::InvalidArgument, "negative level");
    if (!mu_invariant(f).is_zero()) throw Error(Errc::HypothesisFailed, "the sampler needs mu = 0");
    const long long p = static_cast<long long>(R.p());
    std::vector<long long> out;
    long long count = 0, order = 1;
    for (int k = 0; k <= max_level; ++k) {
        if (k > 0) order *= p;
        if (k == 0) {
            count += evaluate(f, 0, {0}).valuation().at_least(threshold) ? 1 : 0;
        } else if (R.level() == 0) {
            if (evaluate(f, k, {1}).valuation().at_least(threshold)) count += order - order / p;
        } else {
            for (long long j = 1; j < order; ++j)
                if (j % p != 0 && evaluate(f, k, {j}).valuation().at_least(threshold)) ++count;
        }
        out.push_back(count);
    }
    return out;
}

long long monsky_sampler(const Series& f, int max_level, const Rational& threshold)
{
    return monsky_counts(f, max_level, threshold).back();
}

SubgroupMap kernel_quotient(const std::vector<long long>& a)
{
    const std::size_t d = a.size();
    long long g = 0;
    for (long long x : a) g = std::gcd(g, x);
    if (d == 0 || g != 1) throw Error(Errc::InvalidArgument, "kernel generator must be a primitive vector");
    std::vector<BigInt> v(a.begin(), a.end());
    std::vector<std::vector<BigInt>> P(d, std::vector<BigInt>(d, 0));
    for (std::size_t i = 0; i < d; ++i) P[i][i] = 1;
    for (;;) {
        std::size_t piv = d;
        for (std::size_t i = 0; i < d; ++i)
            if (v[i] != 0 && (piv == d || abs(v[i]) < abs(v[piv]))) piv = i;
        bool done = true;
        for (std::size_t i = 0; i < d; ++i) {
            if (i == piv || v[i] == 0) continue;
            const BigInt q = v[i] / v[piv];
            v[i] -= q * v[piv];
            for (std::size_t c = 0; c < d; ++c) P[i][c] -= q * P[piv][c];
            if (v[i] != 0) done = false;
        }
        if (!done) continue;
        IntMatrix M;
        for (std::size_t i = 0; i < d; ++i) {
            if (i == piv) continue;
            std::vector<long long> row;
            for (std::size_t c = 0; c < d; ++c) row.push_back(static_cast<long long>(P[i][c]));
            M.push_back(std::move(row));
        }
        return SubgroupMap(std::move(M), static_cast<int>(d));
    }
}

bool divisibility_by_kernel(const Series& f, const std::vector<std::vector<long long>>& forms)
{
    if (f.is_zero_ideal() || f.residues_zero()) return true;
    for (const auto& a : forms) {
        if (static_cast<int>(a.size()) != f.ring().d()) throw Error(Errc::InvalidArgument, "linear form has the wrong length");
        if (!specialize(f, kernel_quotient(a)).residues_zero()) return false;
    }
    return true;
}

}  // namespace iwasawa
