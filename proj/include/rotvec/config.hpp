#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotvec/chord.hpp"
#include "rotvec/geometry.hpp"
#include "rotvec/hamiltonian.hpp"
#include "rotvec/integrator.hpp"
#include "rotvec/orbit_search.hpp"
#include "rotvec/pb.hpp"
#include "rotvec/profile.hpp"
#include "rotvec/region.hpp"
#include "rotvec/suspension.hpp"

namespace rotvec {

using nlohmann::json;

const std::vector<std::string>& experiment_names();

// A parsed experiment config. `params` is the user config merged over the
// experiment's defaults, so it is also the config echo of the report.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::optional<std::string> output;
  std::optional<std::size_t> jobs;
  json params;
};

// Throws ConfigError (with the JSON pointer of the bad value) on any schema
// problem, including unknown keys.
ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::string& path);

// Builtin defaults of an experiment, as a config object.
json default_config(const std::string& experiment);

// Pieces of a config. Each takes the JSON pointer of the value it reads so
// errors point at the right place.
PhaseSpace space_from_json(const json& j, const std::string& ptr);
CohomologyClass class_from_json(const json& j, const PhaseSpace& space, const std::string& ptr);
ClosedOneForm form_from_json(const json& j, const PhaseSpace& space, const std::string& ptr);
RegionSpec region_from_json(const json& j, const PhaseSpace& space, const std::string& ptr);
std::vector<PhasePoint> seeds_from_json(const json& j, const PhaseSpace& space, const std::string& ptr);
PhasePoint point_from_json(const json& j, const PhaseSpace& space, const std::string& ptr);
IntegrateOptions integrate_from_json(const json& j, const std::string& ptr);
std::size_t coordinate_from_name(const std::string& name, const PhaseSpace& space, const std::string& ptr);

struct ProfileConfig {
  std::vector<Pin> pins;
  std::size_t n_modes = 32;
  ProfileBasis basis = ProfileBasis::full;
  std::optional<double> slope_target;
};

struct FamilyConfig {
  std::optional<HamiltonianSpec> fixed;
  std::optional<ProfileConfig> profile;
};

FamilyConfig family_from_json(const json& j, const PhaseSpace& space, const std::string& ptr);

// F of a family: the fixed member, or the (slope-minimized) pinned profile.
PinnedProfileResult realize_profile(const ProfileConfig& profile, std::size_t n);
HamiltonianSpec realize_family(const FamilyConfig& family, std::size_t n);

}  // namespace rotvec
