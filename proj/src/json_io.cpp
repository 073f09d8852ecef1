#include "iwasawa/json_io.hpp"

#include "iwasawa/errors.hpp"

#include <set>
#include <string>

namespace iwasawa::io {

namespace {

std::string child(const std::string& at, const std::string& key) { return at + "/" + key; }
std::string child(const std::string& at, std::size_t i) { return at + "/" + std::to_string(i); }

[[noreturn]] void fail(const std::string& at, const std::string& why) { throw SchemaError(at, why); }

int get_int(const Json& j, const char* key, int fallback)
{
    return j.contains(key) ? j.at(key).get<int>() : fallback;
}

std::vector<long long> int_vector(const Json& j, const std::string& at, int len)
{
    std::vector<long long> v = j.get<std::vector<long long>>();
    if (len >= 0 && static_cast<int>(v.size()) != len)
        fail(at, "expected " + std::to_string(len) + " entries, found " + std::to_string(v.size()));
    return v;
}

IntMatrix int_matrix(const Json& j, const std::string& at, int cols)
{
    IntMatrix m;
    for (std::size_t i = 0; i < j.size(); ++i) m.push_back(int_vector(j[i], child(at, i), cols));
    return m;
}

Json order_json(int ord)
{
    if (ord >= kInfiniteOrder) return "inf";
    return ord;
}

}  // namespace

SchemaError::SchemaError(std::string pointer, const std::string& detail)
    : std::runtime_error(detail), pointer_(std::move(pointer))
{
}

// ---------------------------------------------------------------------------
// Serialization

Json to_json(const PadicScalar& a)
{
    Json coeffs = Json::array();
    for (u64 c : a.coeffs()) coeffs.push_back(std::to_string(c));
    return {{"p", a.zmod().p()}, {"N", a.zmod().N()}, {"level", a.level()}, {"coeffs", coeffs}};
}

Json to_json(const QScalar& a) { return {{"value", to_json(a.numerator())}, {"denom_exp", a.denom_exp()}}; }

Json to_json(const SeriesRing& r)
{
    return {{"p", r.p()}, {"N", r.N()}, {"d", r.d()}, {"D", r.D()}, {"level", r.level()}};
}

Json to_json(const Series& f)
{
    Json terms = Json::array();
    if (!f.is_zero_ideal())
        for (const auto& [e, c] : f.terms()) terms.push_back({{"exp", e}, {"coeff", to_json(c)}});
    Json j{{"ring", to_json(f.ring())}, {"denom_exp", f.denom_exp()}, {"terms", terms}};
    if (f.is_zero_ideal()) j["zero_ideal"] = true;
    return j;
}

Json to_json(const FiniteCharacter& chi) { return {{"level", chi.level()}, {"images", chi.images()}}; }

Json to_json(const SubgroupMap& m) { return {{"M", m.M}, {"source", m.source}}; }

Json to_json(const PlaceData& v)
{
    Json j{{"id", v.id},         {"q", v.q},         {"reduction", reduction_name(v.reduction)}, {"a", v.a},
           {"m", v.m},           {"frobenius", v.frobenius}, {"inertia", v.inertia}};
    if (v.inertia.empty()) j["inertia"] = Json::array();
    if (v.tate) j["tate"] = *v.tate;
    if (v.sigma) j["sigma"] = *v.sigma;
    return j;
}

Json to_json(const TowerConfig& t)
{
    Json inter = Json::array();
    for (const auto& m : t.intermediates) inter.push_back(to_json(m));
    return {{"p", t.p},
            {"N", t.N},
            {"D", t.D},
            {"d", t.d},
            {"unramified", t.unramified},
            {"contains_unramified", t.contains_unramified},
            {"q", t.q},
            {"torsion_order", t.torsion_order},
            {"intermediates", inter}};
}

Json to_json(const ElementaryModule& m)
{
    Json factors = Json::array();
    for (const auto& [f, n] : m.factors) factors.push_back({{"series", to_json(f)}, {"mult", n}});
    Json p_part = Json::array();
    for (int e : m.p_part) p_part.push_back(e);
    return {{"factors", factors}, {"p_part", p_part}, {"non_torsion", m.non_torsion}};
}

Json to_json(const Prepared& pr)
{
    Json tail = Json::array();
    for (const Series& a : pr.poly.tail) tail.push_back(to_json(a));
    std::string certified = std::to_string(pr.certified.numerator());
    if (pr.certified.denominator() != 1) certified += "/" + std::to_string(pr.certified.denominator());
    return {{"mu", pr.mu.str()},
            {"unit", to_json(pr.unit)},
            {"poly", {{"var", pr.poly.var}, {"lambda", pr.poly.lambda}, {"tail", tail}}},
            {"certified", certified}};
}

Json to_json(const RootLemmaVerdict& v)
{
    Json per = Json::array();
    for (const auto& [level, eq] : v.per_zeta) per.push_back({{"level", level}, {"equal", eq}});
    Json assoc = nullptr;
    if (v.conclusion != Conclusion::Indeterminate) assoc = v.conclusion == Conclusion::Associates;
    return {{"hypothesis_ok", v.hypothesis_ok}, {"per_zeta", per}, {"conclusion", conclusion_name(v.conclusion)}, {"associates", assoc}};
}

Json to_json(const WeierstrassPair& w) { return {{"q", w.q}, {"n", w.n}, {"g2", w.g2}, {"g3", w.g3}}; }

Json to_json(const FiberReport& r)
{
    Json fibers = Json::array();
    for (const FiberInfo& f : r.fibers) {
        Json point = f.point.empty() ? Json("inf") : Json(f.point);
        fibers.push_back({{"point", point},
                          {"degree", f.degree},
                          {"ord_g2", order_json(f.ord_g2)},
                          {"ord_g3", order_json(f.ord_g3)},
                          {"ord_delta", order_json(f.ord_delta)},
                          {"type", fiber_name(f.type)},
                          {"bound_ok", f.bound_ok}});
    }
    return {{"delta_zero", r.delta_zero}, {"member", r.member}, {"fibers", fibers}};
}

// ---------------------------------------------------------------------------
// Reading

SeriesRing Reader::ring(const Json& j, const std::string& at) const
{
    const u64 p = j.at("p").get<u64>();
    if (!is_prime(p)) fail(child(at, "p"), "p must be prime");
    const int N = opt_.N.value_or(get_int(j, "N", 16));
    const int D = opt_.D.value_or(get_int(j, "D", 24));
    max_N_ = std::max(max_N_, N);
    return SeriesRing(p, N, j.at("d").get<int>(), D, get_int(j, "level", 0));
}

PadicScalar Reader::scalar(const Json& j, const std::string& at) const
{
    const u64 p = j.at("p").get<u64>();
    if (!is_prime(p)) fail(child(at, "p"), "p must be prime");
    const int N = opt_.N.value_or(j.at("N").get<int>());
    max_N_ = std::max(max_N_, N);
    return scalar_in(j, at, Zmod(p, N), j.at("level").get<int>());
}

PadicScalar Reader::scalar_in(const Json& j, const std::string& at, const Zmod& z, int level) const
{
    if (j.at("p").get<u64>() != z.p()) fail(child(at, "p"), "prime differs from the enclosing value");
    const int lv = j.at("level").get<int>();
    if (lv > level) fail(child(at, "level"), "level exceeds the enclosing ring level " + std::to_string(level));
    const Json& cs = j.at("coeffs");
    const std::size_t phi = euler_phi_pow(z.p(), lv);
    if (cs.size() != phi) fail(child(at, "coeffs"), "expected " + std::to_string(phi) + " coefficients at level " + std::to_string(lv));
    std::vector<u64> c;
    for (const auto& x : cs) c.push_back(z.from_decimal(x.get<std::string>()));
    return PadicScalar::from_coeffs(z, lv, std::move(c)).at_level(level);
}

Series Reader::series(const Json& j, const std::string& at) const
{
    const std::string ring_at = child(at, "ring");
    const Reader plain;
    const SeriesRing file_ring = plain.ring(j.at("ring"), ring_at);
    const SeriesRing target = ring(j.at("ring"), ring_at);
    const Json& terms = j.at("terms");
    const bool zero = j.value("zero_ideal", false);
    if (zero && !terms.empty()) fail(child(at, "terms"), "the zero ideal has no terms");
    if (zero) return Series::zero_ideal(target);

    std::vector<u64> data(file_ring.slots() * file_ring.phi(), 0);
    std::set<Exponent> seen;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string term_at = child(child(at, "terms"), i);
        const Exponent e = terms[i].at("exp").get<Exponent>();
        if (static_cast<int>(e.size()) != file_ring.d())
            fail(child(term_at, "exp"), "expected " + std::to_string(file_ring.d()) + " exponents");
        int deg = 0;
        for (int x : e) deg += x;
        if (deg > file_ring.D()) fail(child(term_at, "exp"), "total degree exceeds D = " + std::to_string(file_ring.D()));
        if (!seen.insert(e).second) fail(child(term_at, "exp"), "duplicate exponent");
        const Json& cj = terms[i].at("coeff");
        if (cj.at("N").get<int>() != file_ring.N()) fail(child(child(term_at, "coeff"), "N"), "coefficient precision differs from the ring");
        const PadicScalar c = scalar_in(cj, child(term_at, "coeff"), file_ring.zmod(), file_ring.level());
        std::copy(c.coeffs().begin(), c.coeffs().end(), data.begin() + static_cast<std::ptrdiff_t>(file_ring.index(e) * file_ring.phi()));
    }
    Series f = Series::from_data(file_ring, std::move(data), get_int(j, "denom_exp", 0));
    return f.ring() == target ? f : f.rebased(target);
}

FiniteCharacter Reader::character(const Json& j, const std::string& at, u64 p, int dim) const
{
    return FiniteCharacter(p, j.at("level").get<int>(), int_vector(j.at("images"), child(at, "images"), dim));
}

SubgroupMap Reader::subgroup_map(const Json& j, const std::string& at, int source) const
{
    if (j.contains("source") && j.at("source").get<int>() != source)
        fail(child(at, "source"), "expected source dimension " + std::to_string(source));
    return SubgroupMap(int_matrix(j.at("M"), child(at, "M"), source), source);
}

Subgroup Reader::subgroup(const Json& j, const std::string& at, u64 p, int dim) const
{
    const IntMatrix H = int_matrix(j.at("H"), child(at, "H"), dim);
    if (static_cast<int>(H.size()) != dim) fail(child(at, "H"), "expected a square matrix of size " + std::to_string(dim));
    return Subgroup(H, p);
}

PlaceData Reader::place(const Json& j, const std::string& at, int dim) const
{
    PlaceData v;
    v.id = j.at("id").get<std::string>();
    v.q = j.at("q").get<long long>();
    v.reduction = parse_reduction(j.at("reduction").get<std::string>());
    v.a = j.value("a", 0LL);
    v.m = j.value("m", 1LL);
    v.frobenius = int_vector(j.at("frobenius"), child(at, "frobenius"), dim);
    if (j.contains("inertia")) v.inertia = int_matrix(j.at("inertia"), child(at, "inertia"), dim);
    if (j.contains("tate")) v.tate = int_vector(j.at("tate"), child(at, "tate"), dim);
    if (j.contains("sigma")) v.sigma = int_vector(j.at("sigma"), child(at, "sigma"), dim);
    return v;
}

std::vector<PlaceData> Reader::places(const Json& j, const std::string& at, int dim) const
{
    std::vector<PlaceData> out;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(place(j[i], child(at, i), dim));
        if (!ids.insert(out.back().id).second) fail(child(child(at, i), "id"), "duplicate place id");
    }
    return out;
}

TowerConfig Reader::tower(const Json& j, const std::string& at) const
{
    TowerConfig t;
    t.p = j.at("p").get<u64>();
    if (!is_prime(t.p)) fail(child(at, "p"), "p must be prime");
    t.N = opt_.N.value_or(get_int(j, "N", 16));
    t.D = opt_.D.value_or(get_int(j, "D", 24));
    max_N_ = std::max(max_N_, t.N);
    t.d = j.at("d").get<int>();
    t.unramified = get_int(j, "unramified", 0);
    if (t.unramified >= t.d) fail(child(at, "unramified"), "direction index out of range");
    t.contains_unramified = j.value("contains_unramified", true);
    t.q = j.value("q", static_cast<long long>(t.p));
    t.torsion_order = j.value("torsion_order", 1LL);
    if (j.contains("intermediates")) {
        const Json& inter = j.at("intermediates");
        for (std::size_t i = 0; i < inter.size(); ++i)
            t.intermediates.push_back(subgroup_map(inter[i], child(child(at, "intermediates"), i), t.d));
    }
    return t;
}

ElementaryModule Reader::module(const Json& j, const std::string& at, const SeriesRing& ring) const
{
    ElementaryModule m;
    if (j.contains("factors")) {
        const Json& fs = j.at("factors");
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const std::string f_at = child(child(at, "factors"), i);
            Series f = series(fs[i].at("series"), child(f_at, "series"));
            if (f.ring().with_level(ring.level()) != ring) fail(child(f_at, "series"), "factor ring differs from the module ring");
            m.factors.emplace_back(std::move(f), fs[i].at("mult").get<int>());
        }
    }
    if (j.contains("p_part")) m.p_part = j.at("p_part").get<std::vector<int>>();
    m.non_torsion = j.value("non_torsion", false);
    return m;
}

Conductor Reader::conductor(const Json& j, const std::string&) const { return j.get<Conductor>(); }

std::vector<PadicScalar> Reader::lpoly(const Json& j, const std::string& at, const Zmod& z, int level) const
{
    std::vector<PadicScalar> out;
    const Json& cs = j.at("coeffs");
    for (std::size_t i = 0; i < cs.size(); ++i) out.push_back(scalar_in(cs[i], child(child(at, "coeffs"), i), z, level));
    return out;
}

Rational Reader::rational(const Json& j, const std::string& at) const
{
    const std::string s = j.get<std::string>();
    try {
        const auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        fail(at, "bad rational literal '" + s + "'");
    }
}

WeierstrassPair Reader::pair(const Json& j, const std::string& at) const
{
    WeierstrassPair w;
    w.q = j.at("q").get<std::uint32_t>();
    w.n = j.at("n").get<int>();
    for (const char* key : {"g2", "g3"}) {
        FPoly f = j.at(key).get<FPoly>();
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f[i] >= w.q) fail(child(child(at, key), i), "coefficient must lie in [0, q)");
        while (!f.empty() && f.back() == 0) f.pop_back();
        (std::string(key) == "g2" ? w.g2 : w.g3) = std::move(f);
    }
    return w;
}

}  // namespace iwasawa::io
