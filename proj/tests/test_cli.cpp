#include "gen.hpp"

#include "iwasawa/cli.hpp"
#include "iwasawa/errors.hpp"
#include "iwasawa/schema.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace iwasawa;
using io::Json;
using iwasawa::testing::Gen;
namespace fs = std::filesystem;

namespace {

const fs::path kSuite = fs::path(IWASAWA_SOURCE_DIR) / "fixtures" / "suite";

Json load(const fs::path& p)
{
    std::ifstream is(p);
    return Json::parse(is);
}

std::vector<fs::path> fixture_files()
{
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(kSuite))
        if (e.path().extension() == ".json") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

// Every embedded series document, with its JSON pointer.
void collect_series(const Json& j, const std::string& at, std::vector<std::pair<std::string, Json>>& out)
{
    if (j.is_object() && j.contains("ring") && j.contains("terms")) {
        out.emplace_back(at, j);
        return;
    }
    if (j.is_object())
        for (const auto& [k, v] : j.items()) collect_series(v, at + "/" + k, out);
    if (j.is_array())
        for (std::size_t i = 0; i < j.size(); ++i) collect_series(j[i], at + "/" + std::to_string(i), out);
}

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "iwtool");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name, const Json& doc)
{
    const fs::path p = fs::temp_directory_path() / ("iwtool_test_" + name);
    std::ofstream(p) << doc.dump();
    return p;
}

std::string schema_pointer(const Json& doc, const std::string& ref)
{
    try {
        io::validate(doc, ref);
    } catch (const io::SchemaError& e) {
        return e.pointer();
    }
    return "<valid>";
}

}  // namespace

TEST_CASE("shipped fixtures are canonical and round-trip")
{
    const io::Reader rd;
    const auto files = fixture_files();
    REQUIRE(files.size() >= 30);
    int checked = 0;
    for (const auto& f : files) {
        const Json doc = load(f);
        CHECK_NOTHROW(io::validate(doc, "scenario.schema.json"));
        std::vector<std::pair<std::string, Json>> found;
        collect_series(doc, "", found);
        for (const auto& [at, sj] : found) {
            INFO(f.string() << at);
            const Series s = rd.series(sj, at);
            const Json again = io::to_json(s);
            CHECK(rd.series(again, at) == s);
            CHECK(again == sj);
            ++checked;
        }
    }
    CHECK(checked >= 35);
}

TEST_CASE("serialization round-trips random values")
{
    Gen g(1401);
    const io::Reader rd;
    for (int trial = 0; trial < 60; ++trial) {
        const u64 p = g.coin() ? 3 : 5;
        const int level = static_cast<int>(g.range(0, 2));
        const SeriesRing R(p, static_cast<int>(g.range(4, 12)), static_cast<int>(g.range(1, 3)), static_cast<int>(g.range(4, 8)), level);
        Series f = g.series(R, 6, R.D()).times_p_power(-static_cast<int>(g.range(0, 2)));
        if (trial % 10 == 0) f = Series::zero_ideal(R);
        const Json j = io::to_json(f);
        const Series back = rd.series(j, "");
        CHECK(back == f);
        CHECK(back.is_zero_ideal() == f.is_zero_ideal());
        CHECK(io::to_json(back).dump() == j.dump());
        CHECK_NOTHROW(io::validate(j, "common.schema.json#/$defs/series"));

        const PadicScalar a = g.scalar(R.zmod(), level);
        CHECK(rd.scalar(io::to_json(a), "") == a);
    }
    WeierstrassPair w{7, 1, {1, 2, 3}, {0, 0, 6}};
    CHECK(rd.pair(io::to_json(w), "") == w);
}

TEST_CASE("schema diagnostics carry JSON pointers")
{
    const std::string ref = "commands.schema.json#/$defs/theta";
    Json doc = {{"tower", {{"p", 3}, {"d", 2}}}, {"places", Json::array()}, {"target", {{"M", {{1, 0}}}}}};
    CHECK(schema_pointer(doc, ref) == "<valid>");

    Json missing = doc;
    missing.erase("target");
    CHECK(schema_pointer(missing, ref) == "");

    Json extra = doc;
    extra["tower"]["colour"] = 1;
    CHECK(schema_pointer(extra, ref) == "/tower/colour");

    Json wrong = doc;
    wrong["places"] = {{{"id", "v"}, {"q", "3"}, {"reduction", "good-ordinary"}, {"frobenius", {1, 0}}}};
    CHECK(schema_pointer(wrong, ref) == "/places/0/q");

    Json bad_enum = doc;
    bad_enum["places"] = {{{"id", "v"}, {"q", 3}, {"reduction", "additive"}, {"frobenius", {1, 0}}}};
    CHECK(schema_pointer(bad_enum, ref) == "/places/0/reduction");

    const Json digits = {{"p", 3}, {"N", 4}, {"level", 0}, {"coeffs", {"1x"}}};
    CHECK(schema_pointer(digits, "common.schema.json#/$defs/scalar") == "/coeffs/0");

    const Json low = {{"p", 3}, {"N", 3}, {"d", 1}};
    CHECK(schema_pointer(low, "common.schema.json#/$defs/ring") == "/N");

    const Json floaty = {{"p", 3.0}, {"d", 1}};
    CHECK(schema_pointer(floaty, "common.schema.json#/$defs/ring") == "/p");

    CHECK(io::schema_files().size() == 3);
}

TEST_CASE("reader rejects values a schema cannot express")
{
    const io::Reader rd;
    const Json term = {{"exp", {0, 0}}, {"coeff", {{"p", 3}, {"N", 16}, {"level", 0}, {"coeffs", {"1"}}}}};
    Json s = {{"ring", {{"p", 3}, {"d", 2}}}, {"terms", {term, term}}};
    try {
        rd.series(s, "/series");
        FAIL("duplicate exponents accepted");
    } catch (const io::SchemaError& e) {
        CHECK(e.pointer() == "/series/terms/1/exp");
    }
    s["terms"] = {term};
    s["terms"][0]["coeff"]["level"] = 1;
    try {
        rd.series(s, "");
        FAIL("coefficient above the ring level accepted");
    } catch (const io::SchemaError& e) {
        CHECK(e.pointer() == "/terms/0/coeff/level");
    }
    s["terms"][0]["exp"] = {0};
    try {
        rd.series(s, "");
        FAIL("short exponent accepted");
    } catch (const io::SchemaError& e) {
        CHECK(e.pointer() == "/terms/0/exp");
    }
}

TEST_CASE("precision overrides rebase every input")
{
    const Json input = load(kSuite / "mu" / "rootwise_f_p3.json").at("input");
    const io::Reader wide(io::ReadOptions{8, 6});
    const Series f = wide.series(input, "");
    CHECK(f.ring().N() == 8);
    CHECK(f.ring().D() == 6);

    const fs::path in = temp_file("sharp.json", input);
    const Result r = invoke({"sharp", in.string(), "--precision", "8", "--degree", "6"});
    REQUIRE(r.code == cli::kOk);
    const Json out = Json::parse(r.out);
    CHECK(out["series"]["ring"]["N"] == 8);
    CHECK(out["series"]["ring"]["D"] == 6);

    CHECK(invoke({"mu", in.string(), "--precision", "3"}).code == cli::kSchemaViolation);
    CHECK(invoke({"mu", in.string(), "--degree", "2"}).code == cli::kSchemaViolation);
}

TEST_CASE("exit codes partition failure classes")
{
    const fs::path rootwise = temp_file("rootwise.json", load(kSuite / "mu" / "rootwise_f_p3.json").at("input"));
    const Result ok = invoke({"mu", rootwise.string()});
    CHECK(ok.code == cli::kOk);
    CHECK(Json::parse(ok.out) == Json{{"mu", "0"}});

    const fs::path out = fs::temp_directory_path() / "iwtool_test_out.json";
    fs::remove(out);
    CHECK(invoke({"mu", rootwise.string(), "--out", out.string()}).out.empty());
    CHECK(load(out) == Json{{"mu", "0"}});

    const Result schema = invoke({"twist", rootwise.string()});
    CHECK(schema.code == cli::kSchemaViolation);
    CHECK(schema.err.find("\"\"") != std::string::npos);

    const fs::path small = temp_file("small.json", Json{{"pair", {{"q", 3}, {"n", 1}, {"g2", {1}}, {"g3", {1}}}}});
    const Result domain = invoke({"moduli-member", small.string()});
    CHECK(domain.code == cli::kDomainError);
    CHECK(domain.err.find("CharTooSmall") != std::string::npos);

    const Json vanishing = {{"ring", {{"p", 3}, {"d", 1}}}, {"terms", Json::array()}};
    const Result precision = invoke({"prepare", temp_file("zero.json", vanishing).string()});
    CHECK(precision.code == cli::kPrecisionExhausted);
    CHECK(precision.err.find("--precision 32") != std::string::npos);

    CHECK(invoke({"mu", "/nonexistent/file.json"}).code == cli::kSchemaViolation);
    CHECK(invoke({"frobnicate"}).code == cli::kSchemaViolation);
    CHECK(invoke({"--help"}).code == cli::kOk);
}

TEST_CASE("root-lemma verdict on the shipped fixture")
{
    const Json scenario = load(kSuite / "root-lemma" / "rootwise_p3.json");
    const Json v = cli::execute("root-lemma", scenario.at("input"), cli::RunConfig{});
    CHECK(v.at("associates") == false);
    CHECK(v.at("hypothesis_ok") == false);
    CHECK(v.at("conclusion") == "not-associates");
    for (const auto& z : v.at("per_zeta")) CHECK(z.at("equal") == true);
}

TEST_CASE("suite runner")
{
    const fs::path empty = fs::temp_directory_path() / "iwtool_test_empty_suite";
    fs::create_directories(empty);
    for (const auto& e : fs::directory_iterator(empty)) fs::remove_all(e.path());
    const Result none = invoke({"suite", empty.string()});
    CHECK(none.code == cli::kOk);
    CHECK(none.out.find("1..0\n") != std::string::npos);

    const Result one = invoke({"suite", kSuite.string(), "--threads", "1"});
    const Result many = invoke({"suite", kSuite.string(), "--threads", "8"});
    const Result again = invoke({"suite", kSuite.string(), "--threads", "8"});
    CHECK(one.code == cli::kOk);
    CHECK(one.out == many.out);
    CHECK(many.out == again.out);
    CHECK(one.out.find("not ok") == std::string::npos);

    fs::copy(kSuite / "monsky" / "half_threshold.json", empty / "a.json");
    Json broken = load(kSuite / "monsky" / "one.json");
    broken["expect"]["count"] = 5;
    std::ofstream(empty / "b.json") << broken.dump();
    std::ofstream(empty / "c.json") << "{\"kind\": \"mu\"}";
    const Result mixed = invoke({"suite", empty.string()});
    CHECK(mixed.code == cli::kDomainError);
    CHECK(mixed.out.find("ok 1 - a.json") != std::string::npos);
    CHECK(mixed.out.find("not ok 2 - b.json") != std::string::npos);
    CHECK(mixed.out.find("not ok 3 - c.json") != std::string::npos);
    CHECK(mixed.out.find("# pass 1/3") != std::string::npos);
    fs::remove_all(empty);
}
