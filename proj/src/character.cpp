#include "iwasawa/character.hpp"

#include "iwasawa/errors.hpp"

#include <algorithm>
#include <map>

namespace iwasawa {

namespace {

using BigMatrix = std::vector<std::vector<BigInt>>;

long long ipow(u64 p, int e)
{
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<long long>(p);
    return r;
}

long long floor_mod(long long a, long long m) { return ((a % m) + m) % m; }

BigMatrix identity(std::size_t n)
{
    BigMatrix m(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

void require_square(const IntMatrix& H)
{
    for (const auto& row : H)
        if (row.size() != H.size()) throw Error(Errc::InvalidArgument, "subgroup matrix must be square");
}

BigMatrix to_big(const IntMatrix& H)
{
    BigMatrix m;
    for (const auto& row : H) m.emplace_back(row.begin(), row.end());
    return m;
}

BigInt det_big(BigMatrix a)
{
    // Bareiss elimination keeps every intermediate integral.
    const std::size_t n = a.size();
    if (n == 0) return 1;
    BigInt sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

bool descends(const Cyclo& cy, const u64* a, int to_level, u64* out)
{
    std::size_t step = 1;
    for (int i = to_level; i < cy.level(); ++i) step *= static_cast<std::size_t>(cy.zmod().p());
    const std::size_t phi_to = euler_phi_pow(cy.zmod().p(), to_level);
    for (std::size_t i = 0; i < cy.phi(); ++i) {
        if (i % step == 0 && i / step < phi_to) out[i / step] = a[i];
        else if (a[i] != 0) return false;
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Characters

FiniteCharacter::FiniteCharacter(u64 p, int level, std::vector<long long> images) : p_(p), level_(level), images_(std::move(images))
{
    if (!is_prime(p)) throw Error(Errc::InvalidArgument, "character prime must be prime");
    if (level < 0) throw Error(Errc::InvalidArgument, "character level must be non-negative");
    long double order = 1;
    for (int i = 0; i < level; ++i) order *= static_cast<long double>(p);
    if (order > 1e15L) throw Error(Errc::InvalidArgument, "character order too large");
    const long long o = ipow(p, level);
    for (auto& c : images_) c = floor_mod(c, o);
    while (level_ > 0 && std::all_of(images_.begin(), images_.end(), [&](long long c) { return c % static_cast<long long>(p_) == 0; })) {
        for (auto& c : images_) c /= static_cast<long long>(p_);
        --level_;
    }
}

FiniteCharacter FiniteCharacter::trivial(u64 p, int d) { return FiniteCharacter(p, 0, std::vector<long long>(static_cast<std::size_t>(d), 0)); }

std::vector<long long> FiniteCharacter::images_at(int level) const
{
    if (level < level_) throw Error(Errc::InvalidArgument, "character level exceeds the target level");
    const long long lift = ipow(p_, level - level_);
    std::vector<long long> out(images_);
    for (auto& c : out) c *= lift;
    return out;
}

long long FiniteCharacter::exponent_of(const std::vector<long long>& e) const
{
    if (e.size() != images_.size()) throw Error(Errc::InvalidArgument, "exponent has the wrong length");
    const long long o = ipow(p_, level_);
    __int128 acc = 0;
    for (std::size_t i = 0; i < e.size(); ++i) acc = (acc + static_cast<__int128>(images_[i]) * e[i]) % o;
    return floor_mod(static_cast<long long>(acc), o);
}

FiniteCharacter FiniteCharacter::conjugate() const
{
    std::vector<long long> neg(images_);
    for (auto& c : neg) c = -c;
    return FiniteCharacter(p_, level_, std::move(neg));
}

FiniteCharacter FiniteCharacter::operator*(const FiniteCharacter& o) const
{
    if (o.p_ != p_ || o.dim() != dim()) throw Error(Errc::InvalidArgument, "characters of different groups");
    const int L = std::max(level_, o.level_);
    std::vector<long long> a = images_at(L), b = o.images_at(L);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return FiniteCharacter(p_, L, std::move(a));
}

// ---------------------------------------------------------------------------
// Lattices

BigInt determinant(const IntMatrix& H)
{
    require_square(H);
    return det_big(to_big(H));
}

std::vector<std::vector<BigInt>> adjugate(const IntMatrix& H)
{
    require_square(H);
    const std::size_t n = H.size();
    BigMatrix adj(n, std::vector<BigInt>(n, 0));
    if (n == 1) {
        adj[0][0] = 1;
        return adj;
    }
    const BigMatrix a = to_big(H);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            BigMatrix minor;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                std::vector<BigInt> row;
                for (std::size_t c = 0; c < n; ++c)
                    if (c != j) row.push_back(a[r][c]);
                minor.push_back(std::move(row));
            }
            BigInt m = det_big(std::move(minor));
            adj[j][i] = (i + j) % 2 ? BigInt(-m) : m;
        }
    return adj;
}

SmithForm smith_normal_form(const IntMatrix& H)
{
    require_square(H);
    const std::size_t n = H.size();
    BigMatrix A = to_big(H);
    SmithForm s{identity(n), identity(n), {}};
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(A[i], A[j]);
        std::swap(s.P[i], s.P[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (auto& row : A) std::swap(row[i], row[j]);
        for (auto& row : s.Q) std::swap(row[i], row[j]);
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const BigInt& q) {  // row_dst -= q row_src
        for (std::size_t c = 0; c < n; ++c) {
            A[dst][c] -= q * A[src][c];
            s.P[dst][c] -= q * s.P[src][c];
        }
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const BigInt& q) {
        for (std::size_t r = 0; r < n; ++r) {
            A[r][dst] -= q * A[r][src];
            s.Q[r][dst] -= q * s.Q[r][src];
        }
    };

    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            std::size_t pi = n, pj = n;
            for (std::size_t i = t; i < n; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (A[i][j] != 0 && (pi == n || abs(A[i][j]) < abs(A[pi][pj]))) pi = i, pj = j;
            if (pi == n) throw Error(Errc::InvalidArgument, "subgroup matrix is singular");
            swap_rows(t, pi);
            swap_cols(t, pj);
            bool clean = true;
            for (std::size_t i = t + 1; i < n; ++i) {
                add_row(i, t, A[i][t] / A[t][t]);
                if (A[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                add_col(j, t, A[t][j] / A[t][t]);
                if (A[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            std::size_t bad = n;
            for (std::size_t i = t + 1; i < n && bad == n; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == n) break;
            add_row(t, bad, BigInt(-1));
        }
        if (A[t][t] < 0) {
            for (std::size_t c = 0; c < n; ++c) {
                A[t][c] = -A[t][c];
                s.P[t][c] = -s.P[t][c];
            }
        }
        s.diag.push_back(A[t][t]);
    }
    return s;
}

Subgroup::Subgroup(IntMatrix H, u64 p) : H_(std::move(H)), p_(p)
{
    require_square(H_);
    if (!is_prime(p)) throw Error(Errc::InvalidArgument, "subgroup prime must be prime");
    snf_ = smith_normal_form(H_);
    int total = 0;
    for (const BigInt& s : snf_.diag) {
        quot_.push_back(vp_big(s, p));
        total += quot_.back();
    }
    long double idx = 1;
    for (int i = 0; i < total; ++i) idx *= static_cast<long double>(p);
    if (idx > 4096) throw Error(Errc::InvalidArgument, "subgroup index exceeds 4096");
    index_ = ipow(p, total);
    adj_ = adjugate(H_);
    BigInt det = determinant(H_);
    det_vp_ = vp_big(det, p);
    det_unit_ = det;
    for (int i = 0; i < det_vp_; ++i) det_unit_ /= p;
}

Subgroup Subgroup::whole(int d, u64 p)
{
    IntMatrix I(static_cast<std::size_t>(d), std::vector<long long>(static_cast<std::size_t>(d), 0));
    for (int i = 0; i < d; ++i) I[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    return Subgroup(std::move(I), p);
}

std::vector<FiniteCharacter> Subgroup::characters() const
{
    const std::size_t d = H_.size();
    const int n = quot_.empty() ? 0 : *std::max_element(quot_.begin(), quot_.end());
    const long long order = ipow(p_, n);
    std::vector<FiniteCharacter> out;
    std::vector<long long> k(d, 0);
    for (;;) {
        std::vector<long long> c(d, 0);
        for (std::size_t j = 0; j < d; ++j) {
            BigInt acc = 0;
            for (std::size_t i = 0; i < d; ++i) acc += BigInt(k[i] * ipow(p_, n - quot_[i])) * snf_.P[i][j];
            acc %= order;
            c[j] = acc.convert_to<long long>();
        }
        out.emplace_back(p_, n, std::move(c));
        std::size_t i = d;
        while (i-- > 0) {
            if (++k[i] < ipow(p_, quot_[i])) break;
            k[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) break;
    }
    return out;
}

std::vector<BigInt> Subgroup::coordinates(const std::vector<long long>& e, int M) const
{
    const std::size_t d = H_.size();
    if (e.size() != d) throw Error(Errc::InvalidArgument, "exponent has the wrong length");
    BigInt pa = 1, pm = 1;
    for (int i = 0; i < det_vp_; ++i) pa *= p_;
    for (int i = 0; i < M; ++i) pm *= p_;
    const bool exact = det_unit_ == 1 || det_unit_ == -1;
    BigInt uinv = 1;
    if (!exact) {
        // Inverse of the prime-to-p part of det modulo p^M.
        BigInt a = ((det_unit_ % pm) + pm) % pm, m = pm, x0 = 1, x1 = 0;
        while (m != 0) {
            BigInt q = a / m, t = a - q * m;
            a = m, m = t;
            t = x0 - q * x1;
            x0 = x1, x1 = t;
        }
        uinv = ((x0 % pm) + pm) % pm;
    }
    std::vector<BigInt> x(d);
    for (std::size_t i = 0; i < d; ++i) {
        BigInt y = 0;
        for (std::size_t j = 0; j < d; ++j) y += adj_[i][j] * e[j];
        if (y % pa != 0) throw Error(Errc::IntegralityViolation, "group element outside the subgroup");
        y /= pa;
        x[i] = exact ? BigInt(y * det_unit_) : BigInt(((y * uinv) % pm + pm) % pm);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Twisting operators

Series twist(const Series& f, const FiniteCharacter& chi)
{
    const SeriesRing& R = f.ring();
    if (chi.dim() != R.d() || chi.p() != R.p()) throw Error(Errc::InvalidArgument, "character does not match the series");
    const int L = std::max(R.level(), chi.level());
    const Series g = f.at_level(L);
    if (chi.is_trivial() || g.is_zero_ideal()) return g;
    const SeriesRing& T = g.ring();
    const Cyclo cy(T.zmod(), L);
    const std::size_t phi = T.phi();
    const std::vector<long long> c = chi.images_at(L);
    const long long order = static_cast<long long>(cy.order());

    std::vector<u64> a = to_group_ring(g), tmp(phi);
    std::map<long long, std::vector<u64>> zetas;
    for (std::uint32_t slot : T.used()) {
        u64* x = a.data() + slot * phi;
        if (cy.is_zero(x)) continue;
        const Exponent e = T.exponent(slot);
        long long j = 0;
        for (std::size_t i = 0; i < e.size(); ++i) j = (j + c[i] * e[i]) % order;
        if (j == 0) continue;
        auto it = zetas.find(j);
        if (it == zetas.end()) {
            std::vector<u64> zv(phi);
            cy.zeta_pow(j, zv.data());
            it = zetas.emplace(j, std::move(zv)).first;
        }
        cy.mul(x, it->second.data(), tmp.data());
        std::copy(tmp.begin(), tmp.end(), x);
    }
    return from_group_ring(T, std::move(a), g.denom_exp());
}

Series norm_descent(const Series& f, const Subgroup& sub)
{
    const SeriesRing& R = f.ring();
    if (sub.dim() != R.d()) throw Error(Errc::InvalidArgument, "subgroup does not match the series");
    if (f.denom_exp() > 0) throw Error(Errc::DenominatorNotCleared, "norm descent needs an integral series");
    if (f.is_zero_ideal()) return f;
    const std::vector<FiniteCharacter> chars = sub.characters();
    int L = R.level();
    for (const auto& chi : chars) L = std::max(L, chi.level());
    const Zmod& z = R.zmod();
    const Cyclo cy(z, L);
    const std::size_t phi = cy.phi(), d = static_cast<std::size_t>(R.d());

    // sigma-coordinates of f as a polynomial; the product of its twists is
    // formed without truncation on a dense grid of side m*D + 1.
    const Series g = f.at_level(L);
    const std::vector<u64> sig = to_group_ring(g);
    std::vector<std::pair<Exponent, std::vector<u64>>> fterms;
    for (std::uint32_t slot : g.ring().used()) {
        const u64* a = sig.data() + slot * phi;
        if (!cy.is_zero(a)) fterms.emplace_back(g.ring().exponent(slot), std::vector<u64>(a, a + phi));
    }
    const std::size_t side = chars.size() * static_cast<std::size_t>(R.D()) + 1;
    std::vector<std::size_t> stride(d, 1);
    for (std::size_t i = 1; i < d; ++i) stride[i] = stride[i - 1] * side;
    const std::size_t cells = d == 0 ? 1 : stride[d - 1] * side;

    std::vector<u64> prod(cells * phi, 0);
    prod[0] = 1 % z.modulus();
    std::vector<std::size_t> support{0};
    std::vector<u64> tmp(phi), zv(phi);
    const long long order = static_cast<long long>(cy.order());
    for (const auto& chi : chars) {
        const std::vector<long long> c = chi.images_at(L);
        std::vector<std::pair<std::size_t, std::vector<u64>>> twisted;
        for (const auto& [e, a] : fterms) {
            long long j = 0;
            std::size_t off = 0;
            for (std::size_t i = 0; i < d; ++i) {
                j = (j + c[i] * e[i]) % order;
                off += static_cast<std::size_t>(e[i]) * stride[i];
            }
            cy.zeta_pow(j, zv.data());
            std::vector<u64> b(phi);
            cy.mul(a.data(), zv.data(), b.data());
            twisted.emplace_back(off, std::move(b));
        }
        std::vector<u64> next(cells * phi, 0);
        std::vector<char> mark(cells, 0);
        std::vector<std::size_t> next_support;
        for (std::size_t s : support) {
            const u64* x = prod.data() + s * phi;
            for (const auto& [off, b] : twisted) {
                cy.mul(x, b.data(), tmp.data());
                u64* o = next.data() + (s + off) * phi;
                for (std::size_t k = 0; k < phi; ++k) o[k] = z.add(o[k], tmp[k]);
                if (!mark[s + off]) {
                    mark[s + off] = 1;
                    next_support.push_back(s + off);
                }
            }
        }
        prod = std::move(next);
        support = std::move(next_support);
    }

    int M = R.N() + 1;
    for (int j = 2; j <= R.D(); ++j) M += vp_big(BigInt(j), z.p());
    const std::size_t phi_out = R.phi();
    GroupTerms terms;
    std::vector<u64> low(phi_out);
    std::sort(support.begin(), support.end());
    for (std::size_t s : support) {
        const u64* x = prod.data() + s * phi;
        if (cy.is_zero(x)) continue;
        if (!descends(cy, x, R.level(), low.data()))
            throw Error(Errc::IntegralityViolation, "norm coefficient does not descend to the base level");
        std::vector<long long> e(d);
        for (std::size_t i = 0; i < d; ++i) e[i] = static_cast<long long>((s / stride[i]) % side);
        auto& acc = terms[sub.coordinates(e, M)];
        if (acc.empty()) acc.assign(phi_out, 0);
        for (std::size_t k = 0; k < phi_out; ++k) acc[k] = z.add(acc[k], low[k]);
    }
    return expand_group_terms(R, terms, 0);
}

Series chi_map(const Series& f, const FiniteCharacter& chi, const SubgroupMap& m)
{
    if (m.rows() != 1) throw Error(Errc::InvalidArgument, "chi map specialises to a single direction");
    return specialize(twist(f, chi), m);
}

QScalar evaluate_at_character(const Series& f, const FiniteCharacter& omega)
{
    if (omega.dim() != f.ring().d() || omega.p() != f.ring().p()) throw Error(Errc::InvalidArgument, "character does not match the series");
    return evaluate(f, omega.level(), omega.images());
}

}  // namespace iwasawa
