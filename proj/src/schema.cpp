#include "iwasawa/schema.hpp"

#include <map>
#include <mutex>
#include <regex>

namespace iwasawa::io {

namespace detail {
extern const std::vector<std::pair<const char*, const char*>> kEmbeddedSchemas;
}

namespace {

const std::map<std::string, Json>& registry()
{
    static const std::map<std::string, Json> docs = [] {
        std::map<std::string, Json> m;
        for (const auto& [name, text] : detail::kEmbeddedSchemas) m.emplace(name, Json::parse(text));
        return m;
    }();
    return docs;
}

const std::regex& cached_regex(const std::string& pattern)
{
    static std::mutex mu;
    static std::map<std::string, std::regex> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(pattern);
    if (it == cache.end()) it = cache.emplace(pattern, std::regex(pattern, std::regex::ECMAScript)).first;
    return it->second;
}

std::string escape(const std::string& key)
{
    std::string out;
    for (char c : key) {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

std::string type_of(const Json& v)
{
    if (v.is_object()) return "object";
    if (v.is_array()) return "array";
    if (v.is_string()) return "string";
    if (v.is_boolean()) return "boolean";
    if (v.is_null()) return "null";
    if (v.is_number_integer()) return "integer";
    return "number";
}

bool has_type(const Json& v, const std::string& t)
{
    const std::string actual = type_of(v);
    return actual == t || (t == "number" && actual == "integer");
}

class Validator {
public:
    void check(const Json& v, const Json& s, const std::string& file, const std::string& at) const
    {
        if (s.contains("$ref")) {
            const std::string ref = s.at("$ref").get<std::string>();
            const auto hash = ref.find('#');
            const std::string target_file = hash == 0 ? file : ref.substr(0, hash);
            const std::string frag = hash == std::string::npos ? "" : ref.substr(hash + 1);
            check(v, schema(target_file).at(Json::json_pointer(frag)), target_file, at);
            return;
        }
        if (s.contains("type")) {
            const Json& t = s.at("type");
            bool ok = false;
            if (t.is_string()) ok = has_type(v, t.get<std::string>());
            for (const auto& alt : t.is_array() ? t : Json::array()) ok = ok || has_type(v, alt.get<std::string>());
            if (!ok) fail(at, "expected " + t.dump() + ", found " + type_of(v));
        }
        if (s.contains("enum")) {
            bool found = false;
            for (const auto& e : s.at("enum")) found = found || e == v;
            if (!found) fail(at, "value " + v.dump() + " is not one of " + s.at("enum").dump());
        }
        if (s.contains("const") && s.at("const") != v) fail(at, "expected the constant " + s.at("const").dump());
        if (v.is_string()) {
            const std::string& str = v.get_ref<const std::string&>();
            if (s.contains("pattern") && !std::regex_search(str, cached_regex(s.at("pattern").get<std::string>())))
                fail(at, "string '" + str + "' does not match " + s.at("pattern").get<std::string>());
            if (s.contains("minLength") && str.size() < s.at("minLength").get<std::size_t>())
                fail(at, "string shorter than " + s.at("minLength").dump());
        }
        if (v.is_number_integer()) {
            const long double x = v.is_number_unsigned() ? static_cast<long double>(v.get<unsigned long long>())
                                                         : static_cast<long double>(v.get<long long>());
            if (s.contains("minimum") && x < s.at("minimum").get<long double>()) fail(at, "value below the minimum " + s.at("minimum").dump());
            if (s.contains("maximum") && x > s.at("maximum").get<long double>()) fail(at, "value above the maximum " + s.at("maximum").dump());
        }
        if (v.is_array()) {
            if (s.contains("minItems") && v.size() < s.at("minItems").get<std::size_t>())
                fail(at, "expected at least " + s.at("minItems").dump() + " items");
            if (s.contains("maxItems") && v.size() > s.at("maxItems").get<std::size_t>())
                fail(at, "expected at most " + s.at("maxItems").dump() + " items");
            if (s.contains("items"))
                for (std::size_t i = 0; i < v.size(); ++i) check(v[i], s.at("items"), file, at + "/" + std::to_string(i));
        }
        if (v.is_object()) {
            if (s.contains("required"))
                for (const auto& key : s.at("required"))
                    if (!v.contains(key.get<std::string>())) fail(at, "missing required property '" + key.get<std::string>() + "'");
            const Json empty = Json::object();
            const Json& props = s.contains("properties") ? s.at("properties") : empty;
            for (const auto& [key, value] : v.items()) {
                const std::string key_at = at + "/" + escape(key);
                if (props.contains(key)) {
                    check(value, props.at(key), file, key_at);
                } else if (s.contains("additionalProperties")) {
                    const Json& extra = s.at("additionalProperties");
                    if (extra.is_boolean() && !extra.get<bool>()) fail(key_at, "unexpected property '" + key + "'");
                    if (extra.is_object()) check(value, extra, file, key_at);
                }
            }
        }
    }

private:
    [[noreturn]] static void fail(const std::string& at, const std::string& why) { throw SchemaError(at, why); }
};

}  // namespace

std::vector<std::string> schema_files()
{
    std::vector<std::string> out;
    for (const auto& [name, doc] : registry()) out.push_back(name);
    return out;
}

const Json& schema(const std::string& file)
{
    const auto& docs = registry();
    auto it = docs.find(file);
    if (it == docs.end()) throw std::out_of_range("unknown schema file '" + file + "'");
    return it->second;
}

void validate(const Json& doc, const std::string& ref)
{
    const auto hash = ref.find('#');
    const std::string file = ref.substr(0, hash);
    const std::string frag = hash == std::string::npos ? "" : ref.substr(hash + 1);
    Validator().check(doc, schema(file).at(Json::json_pointer(frag)), file, "");
}

}  // namespace iwasawa::io
