#pragma once

#include "iwasawa/series.hpp"

#include <random>

namespace iwasawa::testing {

/// Seeded generator for random test inputs.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    long long range(long long lo, long long hi)
    {
        return std::uniform_int_distribution<long long>(lo, hi)(rng_);
    }
    bool coin(double prob = 0.5) { return std::bernoulli_distribution(prob)(rng_); }
    u64 residue(const Zmod& z) { return std::uniform_int_distribution<u64>(0, z.modulus() - 1)(rng_); }

    PadicScalar scalar(const Zmod& z, int level)
    {
        std::vector<u64> c(euler_phi_pow(z.p(), level));
        for (auto& x : c) x = residue(z);
        return PadicScalar::from_coeffs(z, level, std::move(c));
    }

    PadicScalar unit(const Zmod& z, int level)
    {
        for (;;) {
            PadicScalar s = scalar(z, level);
            Valuation v = s.valuation();
            if (v.is_zero()) return s;
        }
    }

    /// Random series with at most `terms` nonzero monomials of degree <= maxdeg.
    Series series(const SeriesRing& R, int terms, int maxdeg, int level = -1)
    {
        Series s(R);
        const int lv = level < 0 ? R.level() : level;
        for (int i = 0; i < terms; ++i) {
            Exponent e(static_cast<std::size_t>(R.d()), 0);
            int budget = static_cast<int>(range(0, maxdeg));
            for (int j = 0; j < R.d() && budget > 0; ++j) {
                int x = static_cast<int>(range(0, budget));
                e[static_cast<std::size_t>(j)] = x;
                budget -= x;
            }
            s = s + Series::monomial(R, e, scalar(R.zmod(), lv));
        }
        return s;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace iwasawa::testing
