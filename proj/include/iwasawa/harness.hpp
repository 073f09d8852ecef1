#pragma once

#include "iwasawa/euler.hpp"

#include <utility>
#include <vector>

namespace iwasawa {

/// Lambda/(f_1^{n_1}) + ... + Lambda/(p^{m_1}) + ..., or a non-torsion module.
struct ElementaryModule {
    std::vector<std::pair<Series, int>> factors;
    std::vector<int> p_part;
    bool non_torsion = false;

    ElementaryModule operator+(const ElementaryModule& o) const;
};

/// p^{sum m_j} * prod f_i^{n_i} in the given ring; (0) for a non-torsion module.
Series char_ideal(const ElementaryModule& m, const SeriesRing& ring);

/// (f) = (f^sharp).
bool functional_equation_check(const Series& f);

/// varrho * specialize(char(M)) and theta * char(M') generate the same ideal.
bool specialization_shape_check(const ElementaryModule& m, const ElementaryModule& m_target, const TowerConfig& tower,
                                const std::vector<PlaceData>& places, const SubgroupMap& target);

enum class Conclusion { Associates, NotAssociates, Indeterminate };
const char* conclusion_name(Conclusion c) noexcept;

struct RootLemmaVerdict {
    bool hypothesis_ok = false;
    std::vector<std::pair<int, bool>> per_zeta;  // (level, ideal equality at t_1 = zeta - 1)
    Conclusion conclusion = Conclusion::Indeterminate;
};

/// Compares f(t_0, zeta - 1) and g(t_0, zeta - 1) for zeta of each level and
/// decides the two-variable question.
RootLemmaVerdict root_lemma_run(const Series& f, const Series& g, const std::vector<int>& levels);

/// Number of characters of Z_p of level at most k with ord_p omega(f) >= threshold,
/// for k = 0..max_level. Galois-conjugate characters share one evaluation when
/// f has coefficients in Z_p.
std::vector<long long> monsky_counts(const Series& f, int max_level, const Rational& threshold);
long long monsky_sampler(const Series& f, int max_level, const Rational& threshold);

/// f is divisible by sigma^a - 1 for every primitive exponent vector a.
bool divisibility_by_kernel(const Series& f, const std::vector<std::vector<long long>>& forms);

/// A surjection Z_p^d -> Z_p^{d-1} whose kernel is Z_p a, for primitive a.
SubgroupMap kernel_quotient(const std::vector<long long>& a);

}  // namespace iwasawa
