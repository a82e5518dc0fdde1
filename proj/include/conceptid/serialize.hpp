#ifndef CONCEPTID_SERIALIZE_HPP
#define CONCEPTID_SERIALIZE_HPP

#include "conceptid/baselines.hpp"
#include "conceptid/concept.hpp"
#include "conceptid/dataset.hpp"
#include "conceptid/geometry.hpp"
#include "conceptid/identify.hpp"
#include "conceptid/metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace conceptid {

using json = nlohmann::json;

/// {"subspaces": [{"name": .., "columns": [..]}, ..]}; other keys are ignored.
SubspaceSpec subspace_spec_from_json(const json& j);
json to_json(const SubspaceSpec& spec);

json to_json(const Ellipsoid& e);
Ellipsoid ellipsoid_from_json(const json& j);
/// {"concepts": [[region per subspace], ..]}
json to_json(const EllipsoidSet& set);
EllipsoidSet ellipsoid_set_from_json(const json& j);

json to_json(const Labeling& labeling);
Labeling labeling_from_json(const json& j);
/// `sample_index,label`, label -1 for unassigned.
void write_labeling_csv(const Labeling& labeling, std::ostream& out);
void write_labeling_csv(const Labeling& labeling, const std::filesystem::path& path);
Labeling read_labeling_csv(std::istream& in);
Labeling read_labeling_csv(const std::filesystem::path& path);

json to_json(const CqmConfig& cfg);
CqmConfig cqm_config_from_json(const json& j);
json to_json(const CmaesConfig& cfg);
CmaesConfig cmaes_config_from_json(const json& j);

json to_json(const ConceptModel& model, const std::vector<std::string>& column_names);
ConceptModel concept_model_from_json(const json& j, const std::vector<std::string>& column_names);

json to_json(const KmeansResult& result);
json to_json(const GmmResult& result);

json to_json(const ConsistencyReport& report);
/// One row per method x metric x subspace (pair).
void write_report_csv(const ConsistencyReport& report, std::ostream& out);

/// FNV-1a of the compact dump; used to tag artifacts with their configuration.
std::string config_hash(const json& config);

/// Deterministic pretty dump followed by a newline.
void write_json(const json& j, const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);

} // namespace conceptid

#endif
