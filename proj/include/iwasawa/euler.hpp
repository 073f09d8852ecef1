#pragma once

#include "iwasawa/character.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace iwasawa {

enum class Reduction { GoodOrdinary, SplitMult, NonsplitMult };

const char* reduction_name(Reduction r) noexcept;
Reduction parse_reduction(const std::string& s);

/// One place of K, described by its decomposition data inside Gamma = Z_p^d.
/// Every case flag of the factor tables is derived from these vectors and the
/// target quotient map.
struct PlaceData {
    std::string id;
    long long q = 0;  // q_v, a power of p
    Reduction reduction = Reduction::GoodOrdinary;
    long long a = 0;  // a_v, good ordinary only
    long long m = 1;  // m_v
    std::vector<long long> frobenius;               // a Frobenius lift in Gamma
    std::vector<std::vector<long long>> inertia;    // generators of the inertia group
    std::optional<std::vector<long long>> tate;     // image of the Tate period, split only
    std::optional<std::vector<long long>> sigma;    // generator of Gamma_v for the dagger factor

    bool in_S() const noexcept;
    /// +1 split, -1 non-split; 0 for good reduction.
    int lambda() const noexcept;
    /// The place seen from the quotient Gamma -> Gamma'' given by m.
    PlaceData pushed_forward(const SubgroupMap& m) const;
};

/// The extension L/K: Gamma = Z_p^d with t_{unramified} the constant-field
/// direction (when present), plus the working precision of every factor.
struct TowerConfig {
    u64 p = 3;
    int N = 16;
    int D = 24;
    int d = 1;
    int unramified = 0;
    bool contains_unramified = true;
    long long q = 3;              // size of the constant field
    long long torsion_order = 1;  // |A_{p^infinity}(K)|
    std::vector<SubgroupMap> intermediates;

    SeriesRing ring(int vars, int level = 0) const;
    /// Throws InconsistentFlags when a place contradicts the tower.
    void validate(const PlaceData& v) const;
};

/// Flags of a place relative to the quotient Gamma -> Gamma' given by m.
struct LocalFlags {
    int rank_gamma = 0;        // rank of Gamma_v
    int rank_image = 0;        // rank of Gamma'_v
    int rank_psi = 0;          // rank of Psi_v = Gamma_v cap ker
    bool in_S = false;         // ramified in L
    bool in_S_target = false;  // ramified in L'
    bool quadratic_top = false;     // F_{q_v^2} inside L_v
    bool quadratic_target = false;  // F_{q_v^2} inside L'_v
    std::vector<long long> frob_image;               // [v]_{L'/K}
    std::optional<std::vector<long long>> generator;  // of Gamma'_v when procyclic
};

LocalFlags local_flags(const PlaceData& v, const SubgroupMap& m, u64 p);

/// The unit root of X^2 - a_v X + q_v, by Newton iteration from a_v.
PadicScalar unit_root(const PlaceData& v, const Zmod& z);
/// False when alpha^k = 1 at working precision for some 1 <= k <= bound.
bool avoids_small_roots_of_unity(const PadicScalar& alpha, long long bound);

/// The global factor for a quotient of rank e; 1 for the trivial extension e = d.
Series varrho(const TowerConfig& tower, int e);

/// theta_{L/L',v} with L' given by the quotient map; the zero ideal when the
/// Tate factor vanishes.
Series theta_factor(const PlaceData& v, const TowerConfig& tower, const SubgroupMap& target);
Series theta(const std::vector<PlaceData>& places, const TowerConfig& tower, const SubgroupMap& target);

Series dagger_factor(const PlaceData& v, const TowerConfig& tower);
Series dagger(const std::vector<PlaceData>& places, const TowerConfig& tower);

/// diamond_{v,chi} in the one-variable algebra of the unramified direction,
/// with chi a character of Gamma.
Series diamond(const PlaceData& v, const FiniteCharacter& chi, const TowerConfig& tower);

/// Conductor exponents ord_v(D_omega) keyed by place id; absent means 0.
using Conductor = std::map<std::string, int>;

/// Places where omega is ramified, with exponent 1.
Conductor tame_conductor(const std::vector<PlaceData>& places, const FiniteCharacter& omega);

QScalar xi_factor(const std::vector<PlaceData>& places, const FiniteCharacter& omega, const Conductor& conductor, const Zmod& z);

/// alpha_{D_omega}.
QScalar alpha_conductor(const std::vector<PlaceData>& places, const Conductor& conductor, const Zmod& z, int level = 0);

QScalar star_factor(const FiniteCharacter& omega, const TowerConfig& tower, const std::vector<PlaceData>& places,
                    const PadicScalar& tau, long long deg_delta, long long kappa, const Conductor& conductor);

/// P(q^{-1} sigma^{-1}) with sigma = 1 + t_var, in the given ring.
Series c_chi(const std::vector<PadicScalar>& P, long long q, const SeriesRing& ring, int var = 0);

/// rho_v = (1 - lambda_v chi([v])^{-1} [v]_{L_0/K} q_v^{-1})^sharp.
Series rho_factor(const PlaceData& v, const FiniteCharacter& chi, const TowerConfig& tower);
bool rho_unit_check(const PlaceData& v, const FiniteCharacter& chi, const TowerConfig& tower);

/// The unit factor dagger_chi relating the twisted element to c_chi.
Series dagger_chi(const FiniteCharacter& chi, const TowerConfig& tower, const std::vector<PlaceData>& places,
                  const PadicScalar& tau, long long deg_delta, long long kappa, const Conductor& conductor);

}  // namespace iwasawa
