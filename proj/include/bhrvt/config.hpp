#pragma once
// Run configuration read from JSON.
//
// A config file is either a bare distribution object
//   {"kind": "independent_uniform", "c_interval": [0, 1], "a_interval": [1.1, 2], "b_interval": [0.1, 1]}
//   {"kind": "truncated_gaussian", "mu": [...3], "sigma": [...9 row-major], "box": [[lo, hi], x3]}
// or a run object with any of
//   "preset": "example1" | "distribution": {...}   (exactly one)
//   "quadrature": {"rel_tol", "abs_tol", "max_depth"}
//   "mc": {"samples", "seed", "bins"}
//   "grid": {"points", "range": [lo, hi]} or {"values": [...]}
//   "output": "path"

#include <optional>
#include <string>

#include "bhrvt/dist.hpp"
#include "bhrvt/mc.hpp"
#include "bhrvt/quad.hpp"
#include "bhrvt/rvt.hpp"

namespace bhrvt::config {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DistributionSpec {
    enum class Kind { independent_uniform, truncated_gaussian };
    Kind kind = Kind::independent_uniform;
    std::string name;
    dist::SupportBox box;
    dist::Vec3 mu{};
    dist::Mat3 sigma{};
};

// The two built-in examples as specs.
DistributionSpec preset_spec(const std::string& name);
dist::JointDensity make_distribution(const DistributionSpec& spec, const quad::QuadratureConfig& cfg = {});

struct RunConfig {
    std::optional<DistributionSpec> distribution;
    quad::QuadratureConfig quadrature;
    mc::McConfig mc;
    std::string output_path;
    std::optional<rvt::GridSpec> grid;
};

// Throws ConfigError with the offending key on any schema violation.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
DistributionSpec parse_distribution(const std::string& json_text);

}  // namespace bhrvt::config
