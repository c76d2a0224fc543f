#include "bhrvt/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bhrvt::config {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

const json& need(const json& j, const char* key) {
    if (!j.contains(key)) fail(std::string("missing key '") + key + "'");
    return j.at(key);
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) fail(what + " must be a number");
    return j.get<double>();
}

Interval interval(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2) fail(what + " must be a [lo, hi] pair");
    return {number(j[0], what), number(j[1], what)};
}

DistributionSpec distribution_from(const json& j) {
    if (!j.is_object()) fail("distribution must be an object");
    const std::string kind = need(j, "kind").get<std::string>();
    DistributionSpec s;
    s.name = j.value("name", kind);
    if (kind == "independent_uniform") {
        s.kind = DistributionSpec::Kind::independent_uniform;
        s.box = {interval(need(j, "c_interval"), "c_interval"), interval(need(j, "a_interval"), "a_interval"),
                 interval(need(j, "b_interval"), "b_interval")};
    } else if (kind == "truncated_gaussian") {
        s.kind = DistributionSpec::Kind::truncated_gaussian;
        const json& mu = need(j, "mu");
        if (!mu.is_array() || mu.size() != 3) fail("mu must hold 3 numbers (c, a, b)");
        for (int i = 0; i < 3; ++i) s.mu[i] = number(mu[i], "mu");
        const json& sigma = need(j, "sigma");
        if (!sigma.is_array() || sigma.size() != 9) fail("sigma must hold 9 numbers (row-major 3x3)");
        for (int i = 0; i < 9; ++i) s.sigma[i / 3][i % 3] = number(sigma[i], "sigma");
        const json& box = need(j, "box");
        if (!box.is_array() || box.size() != 3) fail("box must hold three [lo, hi] pairs");
        s.box = {interval(box[0], "box[0]"), interval(box[1], "box[1]"), interval(box[2], "box[2]")};
    } else {
        fail("unknown kind '" + kind + "' (expected independent_uniform or truncated_gaussian)");
    }
    try {
        s.box.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    return s;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
}

RunConfig run_from(const json& j) {
    if (!j.is_object()) fail("top level must be an object");
    RunConfig rc;
    if (j.contains("kind")) {
        rc.distribution = distribution_from(j);
        return rc;
    }
    const bool has_preset = j.contains("preset");
    const bool has_dist = j.contains("distribution");
    if (has_preset == has_dist) fail("give exactly one of 'preset' and 'distribution'");
    try {
        rc.distribution = has_preset ? preset_spec(j.at("preset").get<std::string>()) : distribution_from(j.at("distribution"));
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (j.contains("quadrature")) {
        const json& q = j.at("quadrature");
        rc.quadrature.rel_tol = q.value("rel_tol", rc.quadrature.rel_tol);
        rc.quadrature.abs_tol = q.value("abs_tol", rc.quadrature.abs_tol);
        rc.quadrature.max_depth = q.value("max_depth", rc.quadrature.max_depth);
        try {
            rc.quadrature.validate();
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    if (j.contains("mc")) {
        const json& m = j.at("mc");
        rc.mc.n_samples = m.value("samples", rc.mc.n_samples);
        rc.mc.seed = m.value("seed", rc.mc.seed);
        rc.mc.n_bins = m.value("bins", rc.mc.n_bins);
        try {
            rc.mc.validate();
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (g.contains("values")) {
            rc.grid = rvt::GridSpec::explicit_grid(g.at("values").get<std::vector<double>>());
        } else if (g.contains("range")) {
            rc.grid = rvt::GridSpec::uniform_grid(interval(g.at("range"), "grid.range"), g.value("points", 200u));
        } else {
            rc.grid = rvt::GridSpec::automatic_grid(g.value("points", 200u));
        }
    }
    rc.output_path = j.value("output", std::string());
    return rc;
}

// Type mismatches inside nlohmann::json surface as ConfigError too.
template <class Fn>
auto guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        fail(e.what());
    }
}

}  // namespace

DistributionSpec preset_spec(const std::string& name) {
    const dist::JointDensity d = dist::preset(name);
    DistributionSpec s;
    s.name = name;
    s.box = d.support();
    if (const auto* g = std::get_if<dist::TruncatedGaussianJoint>(&d.impl())) {
        s.kind = DistributionSpec::Kind::truncated_gaussian;
        s.mu = g->mu();
        s.sigma = g->sigma();
    }
    return s;
}

dist::JointDensity make_distribution(const DistributionSpec& spec, const quad::QuadratureConfig& cfg) {
    if (spec.kind == DistributionSpec::Kind::independent_uniform) {
        return dist::JointDensity(dist::IndependentUniformJoint(spec.box), spec.name);
    }
    return dist::JointDensity(dist::TruncatedGaussianJoint(spec.mu, spec.sigma, spec.box, cfg), spec.name);
}

DistributionSpec parse_distribution(const std::string& json_text) {
    return guarded([&] { return distribution_from(parse_json(json_text)); });
}

RunConfig parse_config(const std::string& json_text) {
    return guarded([&] { return run_from(parse_json(json_text)); });
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace bhrvt::config
