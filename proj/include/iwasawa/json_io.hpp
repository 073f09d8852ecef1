#pragma once

#include "iwasawa/harness.hpp"
#include "iwasawa/moduli.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwasawa::io {

using Json = nlohmann::json;

/// A document that does not have the expected shape. The pointer locates the
/// offending value inside the document.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string pointer, const std::string& detail);
    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

/// Precision overrides applied to every ring, tower and scalar read.
struct ReadOptions {
    std::optional<int> N;
    std::optional<int> D;
};

Json to_json(const PadicScalar& a);
Json to_json(const QScalar& a);
Json to_json(const SeriesRing& r);
/// Canonical form: terms sorted by exponent, residues as decimal strings.
Json to_json(const Series& f);
Json to_json(const FiniteCharacter& chi);
Json to_json(const SubgroupMap& m);
Json to_json(const PlaceData& v);
Json to_json(const TowerConfig& t);
Json to_json(const ElementaryModule& m);
Json to_json(const Prepared& pr);
Json to_json(const RootLemmaVerdict& v);
Json to_json(const WeierstrassPair& w);
Json to_json(const FiberReport& r);

/// Reads typed values out of documents that already passed schema
/// validation, checking the constraints a schema cannot express. Every
/// reader takes the JSON pointer of its value for diagnostics.
class Reader {
public:
    explicit Reader(ReadOptions opt = {}) : opt_(opt) {}

    SeriesRing ring(const Json& j, const std::string& at) const;
    PadicScalar scalar(const Json& j, const std::string& at) const;
    /// A scalar moved into the given Z/p^N and level.
    PadicScalar scalar_in(const Json& j, const std::string& at, const Zmod& z, int level) const;
    Series series(const Json& j, const std::string& at) const;
    FiniteCharacter character(const Json& j, const std::string& at, u64 p, int dim) const;
    SubgroupMap subgroup_map(const Json& j, const std::string& at, int source) const;
    Subgroup subgroup(const Json& j, const std::string& at, u64 p, int dim) const;
    PlaceData place(const Json& j, const std::string& at, int dim) const;
    std::vector<PlaceData> places(const Json& j, const std::string& at, int dim) const;
    TowerConfig tower(const Json& j, const std::string& at) const;
    ElementaryModule module(const Json& j, const std::string& at, const SeriesRing& ring) const;
    Conductor conductor(const Json& j, const std::string& at) const;
    std::vector<PadicScalar> lpoly(const Json& j, const std::string& at, const Zmod& z, int level) const;
    Rational rational(const Json& j, const std::string& at) const;
    WeierstrassPair pair(const Json& j, const std::string& at) const;

    /// Largest p-adic precision seen so far, for diagnostics.
    int max_precision() const noexcept { return max_N_; }

private:
    ReadOptions opt_;
    mutable int max_N_ = 0;
};

}  // namespace iwasawa::io
