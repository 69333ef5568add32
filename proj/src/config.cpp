#include "govsim/config.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "govsim/gas.hpp"
#include "govsim/governor.hpp"

namespace govsim::config {

namespace {

json scalar(const YAML::Node& n) {
    const std::string& text = n.Scalar();
    if (n.Tag() == "!") return text;  // quoted
    if (text == "true" || text == "True") return true;
    if (text == "false" || text == "False") return false;
    if (text == "null" || text == "~" || text.empty()) return nullptr;
    std::int64_t i = 0;
    if (auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
        ec == std::errc{} && p == text.data() + text.size())
        return i;
    double d = 0;
    if (auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
        ec == std::errc{} && p == text.data() + text.size())
        return d;
    return text;
}

json convert(const YAML::Node& n) {
    switch (n.Type()) {
        case YAML::NodeType::Map: {
            json out = json::object();
            for (const auto& kv : n) out[kv.first.as<std::string>()] = convert(kv.second);
            return out;
        }
        case YAML::NodeType::Sequence: {
            json out = json::array();
            for (const auto& v : n) out.push_back(convert(v));
            return out;
        }
        case YAML::NodeType::Scalar:
            return scalar(n);
        default:
            return nullptr;
    }
}

bool compatible(const json& expected, const json& got) {
    if (expected.is_number_float()) return got.is_number();
    if (expected.is_number_integer()) return got.is_number_integer();
    return expected.type() == got.type();
}

void check(const json& expected, const json& got, const std::string& path, std::vector<std::string>& bad) {
    if (!compatible(expected, got)) {
        bad.push_back(path);
        return;
    }
    if (expected.is_array() && !expected.empty()) {
        for (std::size_t i = 0; i < got.size(); ++i) check(expected.front(), got[i], path + "[" + std::to_string(i) + "]", bad);
    } else if (expected.is_object() && !expected.empty()) {
        for (const auto& [k, v] : got.items()) {
            if (!expected.contains(k))
                bad.push_back(path + "." + k);
            else
                check(expected.at(k), v, path + "." + k, bad);
        }
    }
}

}  // namespace

json from_yaml(const std::string& text) {
    try {
        return convert(YAML::Load(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed YAML: ") + e.what(), {});
    }
}

json load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config: " + path.string(), {});
    std::stringstream buf;
    buf << in.rdbuf();
    json doc;
    if (path.extension() == ".json") {
        try {
            doc = json::parse(buf.str());
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("malformed JSON: ") + e.what(), {});
        }
    } else {
        doc = from_yaml(buf.str());
    }
    if (!doc.is_object()) throw ConfigError("config must be a mapping", {});
    return doc;
}

std::vector<json> runs_of(const json& doc) {
    if (!doc.contains("runs")) return {doc};
    if (!doc.at("runs").is_array() || doc.size() != 1) throw ConfigError("\"runs\" must be the only key and a list", {"runs"});
    std::vector<json> out;
    for (const auto& r : doc.at("runs")) {
        if (!r.is_object()) throw ConfigError("each run must be a mapping", {"runs"});
        out.push_back(r);
    }
    return out;
}

std::vector<std::string> schema_errors(const json& doc, const json& defaults) {
    std::vector<std::string> bad;
    for (const auto& [k, v] : doc.items()) {
        if (k == "scenario") {
            if (!v.is_string()) bad.push_back(k);
        } else if (k == "gas") {
            try {
                parse_gas_descriptor(v);
            } catch (const std::exception&) {
                bad.push_back(k);
            }
        } else if (k == "params" && v.is_object() && v.contains("governor_overrides") &&
                   defaults.at("params").contains("governor_overrides")) {
            json params = v;
            params.erase("governor_overrides");
            check(defaults.at("params"), params, "params", bad);
            const json known = GovernorParams{};
            const auto& ov = v.at("governor_overrides");
            if (!ov.is_object()) {
                bad.push_back("params.governor_overrides");
            } else {
                for (const auto& [ok, ovv] : ov.items()) {
                    (void)ovv;
                    if (!known.contains(ok)) bad.push_back("params.governor_overrides." + ok);
                }
                if (bad.empty()) {
                    try {
                        json merged = known;
                        for (const auto& [ok, ovv] : ov.items()) merged[ok] = ovv;
                        (void)merged.get<GovernorParams>();
                    } catch (const std::exception&) {
                        bad.push_back("params.governor_overrides");
                    }
                }
            }
        } else if (defaults.contains(k)) {
            check(defaults.at(k), v, k, bad);
        } else {
            bad.push_back(k);
        }
    }
    return bad;
}

std::string canonical(const json& doc) { return doc.dump(); }

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

}  // namespace govsim::config
