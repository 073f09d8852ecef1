#include "iwasawa/cli.hpp"

#include "iwasawa/errors.hpp"
#include "iwasawa/schema.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace iwasawa::cli {

using io::Json;
using io::SchemaError;

namespace {

/// A PrecisionExhausted error together with the precision worth retrying at.
class PrecisionError : public Error {
public:
    PrecisionError(const std::string& detail, int suggested)
        : Error(Errc::PrecisionExhausted, detail), suggested_(suggested)
    {
    }
    int suggested() const noexcept { return suggested_; }

private:
    int suggested_;
};

struct Context {
    const Json& in;
    const RunConfig& cfg;
    io::Reader rd;

    Series series(const char* key) const { return rd.series(in.at(key), std::string("/") + key); }
    TowerConfig tower() const { return rd.tower(in.at("tower"), "/tower"); }
    std::vector<PlaceData> places(const TowerConfig& t) const { return rd.places(in.at("places"), "/places", t.d); }
    FiniteCharacter character(u64 p, int d) const { return rd.character(in.at("character"), "/character", p, d); }
    SubgroupMap map(const char* key, int source) const { return rd.subgroup_map(in.at(key), std::string("/") + key, source); }
    int index(const char* key, int bound) const
    {
        const int v = in.value(key, 0);
        if (v >= bound) throw SchemaError(std::string("/") + key, "index must be below " + std::to_string(bound));
        return v;
    }
};

using Handler = std::function<Json(const Context&)>;

Json series_result(const Series& f) { return {{"series", io::to_json(f)}}; }

const std::map<std::string, Handler>& handlers()
{
    static const std::map<std::string, Handler> table = {
        {"mu", [](const Context& c) { return Json{{"mu", mu_invariant(c.series("series")).str()}}; }},
        {"sharp", [](const Context& c) { return series_result(sharp(c.series("series"))); }},
        {"prepare",
         [](const Context& c) {
             const Series f = c.series("series");
             return io::to_json(weierstrass_prepare(f, c.index("var", f.ring().d())));
         }},
        {"specialize",
         [](const Context& c) {
             const Series f = c.series("series");
             return series_result(specialize(f, c.map("map", f.ring().d())));
         }},
        {"twist",
         [](const Context& c) {
             const Series f = c.series("series");
             return series_result(twist(f, c.character(f.ring().p(), f.ring().d())));
         }},
        {"norm",
         [](const Context& c) {
             const Series f = c.series("series");
             return series_result(norm_descent(f, c.rd.subgroup(c.in.at("subgroup"), "/subgroup", f.ring().p(), f.ring().d())));
         }},
        {"chimap",
         [](const Context& c) {
             const Series f = c.series("series");
             return series_result(chi_map(f, c.character(f.ring().p(), f.ring().d()), c.map("map", f.ring().d())));
         }},
        {"theta",
         [](const Context& c) {
             const TowerConfig t = c.tower();
             return series_result(theta(c.places(t), t, c.map("target", t.d)));
         }},
        {"dagger",
         [](const Context& c) {
             const TowerConfig t = c.tower();
             return series_result(dagger(c.places(t), t));
         }},
        {"diamond",
         [](const Context& c) {
             const TowerConfig t = c.tower();
             const PlaceData v = c.rd.place(c.in.at("place"), "/place", t.d);
             return series_result(diamond(v, c.character(t.p, t.d), t));
         }},
        {"star",
         [](const Context& c) {
             const TowerConfig t = c.tower();
             const std::vector<PlaceData> places = c.places(t);
             const FiniteCharacter chi = c.character(t.p, t.d);
             const Json& tj = c.in.at("tau");
             const PadicScalar tau = c.rd.scalar_in(tj, "/tau", Zmod(t.p, t.N), tj.at("level").get<int>());
             const Conductor cond = c.in.contains("conductor") ? c.rd.conductor(c.in.at("conductor"), "/conductor") : tame_conductor(places, chi);
             const QScalar v = star_factor(chi, t, places, tau, c.in.value("deg_delta", 0LL), c.in.value("kappa", 0LL), cond);
             return Json{{"value", io::to_json(v)}};
         }},
        {"cchi",
         [](const Context& c) {
             const SeriesRing R = c.rd.ring(c.in.at("ring"), "/ring");
             const std::vector<PadicScalar> P = c.rd.lpoly(c.in.at("lpoly"), "/lpoly", R.zmod(), R.level());
             return series_result(c_chi(P, c.in.at("q").get<long long>(), R, c.index("var", R.d())));
         }},
        {"charideal",
         [](const Context& c) {
             const SeriesRing R = c.rd.ring(c.in.at("ring"), "/ring");
             return series_result(char_ideal(c.rd.module(c.in.at("module"), "/module", R), R));
         }},
        {"fe-check", [](const Context& c) { return Json{{"holds", functional_equation_check(c.series("series"))}}; }},
        {"shape-check",
         [](const Context& c) {
             const TowerConfig t = c.tower();
             const SubgroupMap target = c.map("target", t.d);
             const ElementaryModule m = c.rd.module(c.in.at("module"), "/module", t.ring(t.d));
             const ElementaryModule m2 = c.rd.module(c.in.at("target_module"), "/target_module", t.ring(target.rows()));
             return Json{{"holds", specialization_shape_check(m, m2, t, c.places(t), target)}};
         }},
        {"root-lemma",
         [](const Context& c) {
             const Series f = c.series("f"), g = c.series("g");
             if (f.ring().d() != 2) throw SchemaError("/f/ring/d", "the root lemma needs two variables");
             if (g.ring() != f.ring()) throw SchemaError("/g/ring", "f and g must share a ring");
             const std::vector<int> levels = c.in.value("levels", std::vector<int>{1, 2, 3});
             return io::to_json(root_lemma_run(f, g, levels));
         }},
        {"monsky",
         [](const Context& c) {
             const Series f = c.series("series");
             const std::vector<long long> counts =
                 monsky_counts(f, c.in.at("max_level").get<int>(), c.rd.rational(c.in.at("threshold"), "/threshold"));
             return Json{{"count", counts.back()}, {"counts", counts}};
         }},
        {"divisibility",
         [](const Context& c) {
             const Series f = c.series("series");
             std::vector<std::vector<long long>> forms;
             const Json& fj = c.in.at("forms");
             for (std::size_t i = 0; i < fj.size(); ++i) {
                 forms.push_back(fj[i].get<std::vector<long long>>());
                 if (static_cast<int>(forms.back().size()) != f.ring().d())
                     throw SchemaError("/forms/" + std::to_string(i), "expected " + std::to_string(f.ring().d()) + " exponents");
             }
             return Json{{"divisible", divisibility_by_kernel(f, forms)}};
         }},
        {"moduli-member", [](const Context& c) { return Json{{"member", membership(c.rd.pair(c.in.at("pair"), "/pair"))}}; }},
        {"moduli-classify", [](const Context& c) { return io::to_json(classify_fibers(c.rd.pair(c.in.at("pair"), "/pair"))); }},
        {"moduli-construct",
         [](const Context& c) {
             const WeierstrassPair w = construct_semistable(c.in.at("q").get<std::uint32_t>(), c.in.at("n").get<int>(), c.cfg.seed,
                                                            c.in.value("retries", 10000));
             return Json{{"pair", io::to_json(w)}};
         }},
    };
    return table;
}

const std::map<std::string, std::string>& descriptions()
{
    static const std::map<std::string, std::string> table = {
        {"mu", "mu-invariant of a series"},
        {"sharp", "the involution (1 + t_i) -> (1 + t_i)^-1"},
        {"prepare", "Weierstrass preparation along one variable"},
        {"specialize", "push a series along a quotient map"},
        {"twist", "twist a series by a finite character"},
        {"norm", "norm of a series down to a finite-index subgroup"},
        {"chimap", "twist, then specialize to one direction"},
        {"theta", "the local factor product for a quotient"},
        {"dagger", "the dagger factor product"},
        {"diamond", "the diamond factor of one place at a character"},
        {"star", "the star constant at a character"},
        {"cchi", "the series attached to an L-polynomial"},
        {"charideal", "characteristic ideal of an elementary module"},
        {"fe-check", "check that (f) equals (f^sharp)"},
        {"shape-check", "check both sides of the specialization identity"},
        {"root-lemma", "compare two series at roots of unity and globally"},
        {"monsky", "count characters where a series has large valuation"},
        {"divisibility", "test divisibility by kernel generators"},
        {"moduli-member", "membership of a Weierstrass pair"},
        {"moduli-classify", "fiber types of a Weierstrass pair"},
        {"moduli-construct", "sample a semistable Weierstrass pair"},
    };
    return table;
}

bool takes_bare_series(const std::string& command)
{
    return command == "mu" || command == "sharp" || command == "prepare" || command == "fe-check";
}

Json read_json(std::istream& is, const std::string& what)
{
    try {
        return Json::parse(is);
    } catch (const Json::parse_error& e) {
        throw SchemaError("", "cannot parse " + what + ": " + e.what());
    }
}

Json read_file(const std::string& path)
{
    if (path == "-") return read_json(std::cin, "standard input");
    std::ifstream is(path);
    if (!is) throw SchemaError("", "cannot open '" + path + "'");
    return read_json(is, "'" + path + "'");
}

std::string pointer_text(const SchemaError& e) { return "\"" + e.pointer() + "\""; }

// Every key of expect must be present in got; objects compare recursively.
bool matches(const Json& expect, const Json& got)
{
    if (!expect.is_object()) return expect == got;
    if (!got.is_object()) return false;
    for (const auto& [key, value] : expect.items())
        if (!got.contains(key) || !matches(value, got.at(key))) return false;
    return true;
}

struct Outcome {
    bool ok = false;
    std::string note;
};

Outcome run_scenario(const std::filesystem::path& file, const RunConfig& base)
{
    Json scenario;
    try {
        scenario = read_file(file.string());
        io::validate(scenario, "scenario.schema.json");
    } catch (const SchemaError& e) {
        return {false, "scenario schema violation at " + pointer_text(e) + ": " + e.what()};
    }
    RunConfig cfg = base;
    if (!cfg.N && scenario.contains("precision")) cfg.N = scenario.at("precision").get<int>();
    if (!cfg.D && scenario.contains("degree")) cfg.D = scenario.at("degree").get<int>();
    if (scenario.contains("seed")) cfg.seed = scenario.at("seed").get<std::uint64_t>();
    const Json& expect = scenario.at("expect");

    Json got;
    try {
        got = execute(scenario.at("kind").get<std::string>(), scenario.at("input"), cfg);
    } catch (const SchemaError& e) {
        got = {{"error", "SchemaViolation"}, {"detail", "at " + pointer_text(e) + ": " + e.what()}};
    } catch (const Error& e) {
        got = {{"error", e.name()}, {"detail", e.what()}};
    }
    if (matches(expect, got)) return {true, ""};
    Json shown = Json::object();
    for (const auto& [key, value] : expect.items()) shown[key] = got.contains(key) ? got.at(key) : Json("<missing>");
    if (got.contains("error")) shown["error"] = got.at("error"), shown["detail"] = got.at("detail");
    return {false, "expected " + expect.dump() + ", got " + shown.dump()};
}

int effective_threads(int requested, std::size_t jobs)
{
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    n = std::max(1, n);
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(jobs, 1)));
}

void write_output(const std::string& text, const RunConfig& cfg, std::ostream& out)
{
    if (!cfg.out) {
        out << text;
        return;
    }
    std::ofstream os(*cfg.out, std::ios::binary);
    if (!os) throw SchemaError("", "cannot write '" + *cfg.out + "'");
    os << text;
}

}  // namespace

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, h] : handlers()) v.push_back(name);
        return v;
    }();
    return names;
}

Json execute(const std::string& command, const Json& input, const RunConfig& cfg)
{
    const auto it = handlers().find(command);
    if (it == handlers().end()) throw SchemaError("", "unknown command '" + command + "'");
    const Json doc = takes_bare_series(command) && input.is_object() && input.contains("ring") ? Json{{"series", input}} : input;
    io::validate(doc, "commands.schema.json#/$defs/" + command);
    const Context ctx{doc, cfg, io::Reader(io::ReadOptions{cfg.N, cfg.D})};
    try {
        return it->second(ctx);
    } catch (const PrecisionError&) {
        throw;
    } catch (const Error& e) {
        if (e.code() != Errc::PrecisionExhausted) throw;
        const std::string what = e.what();
        const std::string detail = what.substr(std::min(what.size(), what.find(": ") + 2));
        const int used = std::max({ctx.rd.max_precision(), cfg.N.value_or(0), kDefaultPrecision});
        throw PrecisionError(detail, 2 * used);
    }
}

int run_suite(const std::string& dir, const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        err << "error: '" << dir << "' is not a directory\n";
        return kSchemaViolation;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::vector<std::pair<std::string, fs::path>> jobs;
    for (const auto& f : files) jobs.emplace_back(fs::relative(f, dir).generic_string(), f);
    std::sort(jobs.begin(), jobs.end());

    std::vector<Outcome> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) results[i] = run_scenario(jobs[i].second, cfg);
    };
    std::vector<std::thread> pool;
    const int n = effective_threads(cfg.threads, jobs.size());
    for (int i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ostringstream os;
    os << "TAP version 13\n1.." << jobs.size() << "\n";
    std::size_t passed = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        os << (results[i].ok ? "ok " : "not ok ") << i + 1 << " - " << jobs[i].first << "\n";
        if (!results[i].ok) os << "  # " << results[i].note << "\n";
        passed += results[i].ok ? 1 : 0;
    }
    os << "# pass " << passed << "/" << jobs.size() << "\n";
    write_output(os.str(), cfg, out);
    return passed == jobs.size() ? kOk : kDomainError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Iwasawa-theoretic computations on truncated power series", "iwtool"};
    app.fallthrough();
    app.require_subcommand(1);
    RunConfig cfg;
    int precision = 0, degree = 0;
    std::string out_path;
    app.add_option("--precision", precision, "p-adic precision N")->envname("IWASAWA_PRECISION")->check(CLI::Range(kMinPrecision, 62));
    app.add_option("--degree", degree, "truncation degree D")->envname("IWASAWA_DEGREE")->check(CLI::Range(kMinDegree, 4096));
    app.add_option("--seed", cfg.seed, "seed for randomized searches")->envname("IWASAWA_SEED");
    app.add_option("--out", out_path, "write the result to a file instead of stdout")->envname("IWASAWA_OUT");
    app.add_option("--threads", cfg.threads, "suite workers (0: hardware concurrency)")->envname("IWASAWA_THREADS")->check(CLI::NonNegativeNumber);

    for (const std::string& name : commands()) {
        CLI::App* sub = app.add_subcommand(name, descriptions().at(name));
        sub->add_option("input", cfg.input, "input file, or - for stdin")->capture_default_str();
        sub->callback([&cfg, name] { cfg.command = name; });
    }
    CLI::App* suite = app.add_subcommand("suite", "run every scenario in a directory");
    suite->add_option("dir", cfg.input, "scenario directory")->required();
    suite->callback([&cfg] { cfg.command = "suite"; });
    cfg.input = "-";

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kSchemaViolation;
    }
    if (precision > 0) cfg.N = precision;
    if (degree > 0) cfg.D = degree;
    if (!out_path.empty()) cfg.out = out_path;

    try {
        if (cfg.command == "suite") return run_suite(cfg.input, cfg, out, err);
        const Json result = execute(cfg.command, read_file(cfg.input), cfg);
        write_output(result.dump(2) + "\n", cfg, out);
        return kOk;
    } catch (const SchemaError& e) {
        err << "schema violation at " << pointer_text(e) << ": " << e.what() << "\n";
        return kSchemaViolation;
    } catch (const PrecisionError& e) {
        err << "error: " << e.what() << "\nhint: rerun with --precision " << e.suggested() << "\n";
        return kPrecisionExhausted;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == Errc::PrecisionExhausted ? kPrecisionExhausted : kDomainError;
    }
}

}  // namespace iwasawa::cli
