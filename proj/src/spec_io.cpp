#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "minface/error.hpp"
#include "minface/surface.hpp"

namespace minface {
namespace {

using nlohmann::json;

[[noreturn]] void spec_error(const std::string& msg) {
    throw Error(ErrorKind::Spec, msg);
}

Expression expression_at(const json& j, const std::string& key) {
    if (!j.is_string()) spec_error(fmt::format("{}: expected an expression string", key));
    try {
        return Expression::parse(j.get<std::string>());
    } catch (const Error& err) {
        throw Error(err.kind(), fmt::format("{}: {}", key, err.what()), err.offset());
    }
}

std::vector<double> numbers_at(const json& j, const std::string& key, std::size_t n) {
    if (!j.is_array() || j.size() != n) {
        spec_error(fmt::format("{}: expected an array of {} numbers", key, n));
    }
    std::vector<double> out;
    for (const auto& x : j) {
        if (!x.is_number()) spec_error(fmt::format("{}: expected an array of {} numbers", key, n));
        out.push_back(x.get<double>());
    }
    return out;
}

std::array<Expression, 3> curve_at(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 3) {
        spec_error(fmt::format("{}: expected an array of 3 expression strings", key));
    }
    return {expression_at(j[0], key + "[0]"), expression_at(j[1], key + "[1]"),
            expression_at(j[2], key + "[2]")};
}

Domain domain_at(const json& j) {
    if (!j.is_object()) spec_error("domain: expected an object with keys u and v");
    for (const auto& [k, _] : j.items()) {
        if (k != "u" && k != "v") spec_error(fmt::format("domain: unknown key '{}'", k));
    }
    if (!j.contains("u") || !j.contains("v")) spec_error("domain: keys u and v are required");
    const auto u = numbers_at(j["u"], "domain.u", 2);
    const auto v = numbers_at(j["v"], "domain.v", 2);
    return {u[0], u[1], v[0], v[1]};
}

json domain_json(const Domain& d) {
    return {{"u", {d.u_min, d.u_max}}, {"v", {d.v_min, d.v_max}}};
}

}  // namespace

SurfaceData parse_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Spec, fmt::format("malformed JSON: {}", e.what()), e.byte);
    }
    if (!j.is_object()) spec_error("spec must be a JSON object");
    if (!j.contains("mode") || !j["mode"].is_string()) spec_error("mode: required string");
    const std::string mode = j["mode"].get<std::string>();

    std::set<std::string> allowed{"mode", "domain", "base", "f0"};
    if (mode == "weierstrass") {
        allowed.insert({"g1", "g2", "w1", "w2"});
    } else if (mode == "curves") {
        allowed.insert({"phi", "psi"});
    } else {
        spec_error(fmt::format("mode: expected \"weierstrass\" or \"curves\", got \"{}\"", mode));
    }
    for (const auto& [k, _] : j.items()) {
        if (!allowed.count(k)) spec_error(fmt::format("unknown key '{}'", k));
    }
    for (const auto& k : allowed) {
        if (k != "base" && k != "f0" && !j.contains(k)) {
            spec_error(fmt::format("{}: required", k));
        }
    }

    const Domain dom = domain_at(j["domain"]);
    Vec2 base{0.5 * (dom.u_min + dom.u_max), 0.5 * (dom.v_min + dom.v_max)};
    if (j.contains("base")) {
        const auto b = numbers_at(j["base"], "base", 2);
        base = {b[0], b[1]};
    }
    Vec3 f0 = Vec3::Zero();
    if (j.contains("f0")) {
        const auto f = numbers_at(j["f0"], "f0", 3);
        f0 = {f[0], f[1], f[2]};
    }

    if (mode == "weierstrass") {
        return RealWeierstrassData{expression_at(j["g1"], "g1"),
                                   expression_at(j["g2"], "g2"),
                                   expression_at(j["w1"], "w1"),
                                   expression_at(j["w2"], "w2"),
                                   dom,
                                   base,
                                   f0};
    }
    return RawCurveData{curve_at(j["phi"], "phi"), curve_at(j["psi"], "psi"), dom,
                        base, f0};
}

SurfaceData load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) spec_error(fmt::format("cannot open spec file '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string dump_spec(const SurfaceData& d) {
    json j;
    if (const auto* w = std::get_if<RealWeierstrassData>(&d)) {
        j["mode"] = "weierstrass";
        j["g1"] = w->g1.to_string();
        j["g2"] = w->g2.to_string();
        j["w1"] = w->w1.to_string();
        j["w2"] = w->w2.to_string();
    } else {
        const auto& r = std::get<RawCurveData>(d);
        j["mode"] = "curves";
        j["phi"] = {r.phi[0].to_string(), r.phi[1].to_string(), r.phi[2].to_string()};
        j["psi"] = {r.psi[0].to_string(), r.psi[1].to_string(), r.psi[2].to_string()};
    }
    j["domain"] = domain_json(domain_of(d));
    const Vec2& b = base_of(d);
    const Vec3& f = f0_of(d);
    j["base"] = {b[0], b[1]};
    j["f0"] = {f[0], f[1], f[2]};
    return j.dump(2) + "\n";
}

void save_spec(const SurfaceData& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Spec, fmt::format("cannot write spec file '{}'", path));
    out << dump_spec(d);
    if (!out) throw Error(ErrorKind::Spec, fmt::format("write to '{}' failed", path));
}

}  // namespace minface
