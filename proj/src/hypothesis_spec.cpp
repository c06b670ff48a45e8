#include <fstream>

#include "json.hpp"
#include "mixedtrails/io.hpp"

namespace mixedtrails::io {

namespace {

using nlohmann::json;

// phi built from the dataset's own observed transitions ("data" mode).
BeliefMatrix empirical_matrix(const TransitionDataset& d, std::string label) {
  BeliefMatrix phi(std::move(label), d.n_states());
  for (const Transition& t : d.transitions()) phi.add_weight(t.src, t.dst, 1.0);
  phi.normalize();
  return phi;
}

// Adjacency list file: `src<TAB>dst` per line; uniform over listed targets.
BeliefMatrix adjacency_matrix(const std::filesystem::path& path, const StateSpace& space,
                              std::string label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  BeliefMatrix phi(std::move(label), space.size());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw ParseError(path.filename().string() + " line " + std::to_string(line_no) +
                       ": expected src<TAB>dst");
    const auto src = space.find(line.substr(0, tab));
    const auto dst = space.find(line.substr(tab + 1));
    if (!src || !dst)
      throw ParseError(path.filename().string() + " line " + std::to_string(line_no) +
                       ": unknown state");
    phi.add_weight(*src, *dst, 1.0);
  }
  phi.normalize();
  return phi;
}

GroupAssignmentProbabilities gamma_from_column(const TransitionDataset& d,
                                               const std::string& column,
                                               const std::vector<std::string>& groups,
                                               const std::string& spec_name) {
  const auto* values = d.metadata_column(column);
  if (values == nullptr)
    throw ParseError("hypothesis '" + spec_name + "': dataset has no metadata column '" +
                     column + "'");
  std::vector<double> gamma(d.size() * groups.size(), 0.0);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto it = std::find(groups.begin(), groups.end(), (*values)[k]);
    if (it == groups.end())
      throw ParseError("hypothesis '" + spec_name + "': metadata value '" + (*values)[k] +
                       "' in column '" + column + "' does not name a group");
    gamma[k * groups.size() + static_cast<std::size_t>(it - groups.begin())] = 1.0;
  }
  return GroupAssignmentProbabilities(groups, std::move(gamma));
}

}  // namespace

Hypothesis load_hypothesis_spec(const std::filesystem::path& path, const TransitionDataset& d) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  json spec;
  try {
    spec = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  const auto base_dir = path.parent_path();
  auto resolve = [&](const std::string& p) { return base_dir / p; };

  if (!spec.is_object()) throw ParseError(path.string() + ": spec must be a JSON object");
  if (!spec.contains("name") || !spec["name"].is_string())
    throw ParseError(path.string() + ": missing string field 'name'");
  const std::string name = spec["name"].get<std::string>();

  std::vector<std::string> groups;
  if (spec.contains("groups")) {
    for (const auto& g : spec["groups"]) {
      if (!g.is_string()) throw ParseError(path.string() + ": 'groups' must be strings");
      groups.push_back(g.get<std::string>());
    }
  }

  if (!spec.contains("gamma")) throw ParseError(path.string() + ": missing field 'gamma'");
  const json& gamma_spec = spec["gamma"];

  GroupAssignmentProbabilities gamma({"all"}, {});
  if (gamma_spec.is_string() && gamma_spec.get<std::string>() == "single") {
    if (groups.empty()) groups = {"all"};
    if (groups.size() != 1)
      throw ParseError(path.string() + ": gamma 'single' requires exactly one group");
    gamma = GroupAssignmentProbabilities(groups, std::vector<double>(d.size(), 1.0));
  } else if (gamma_spec.is_object() && gamma_spec.contains("column")) {
    if (groups.empty()) throw ParseError(path.string() + ": 'groups' required for column gamma");
    gamma = gamma_from_column(d, gamma_spec["column"].get<std::string>(), groups, name);
  } else if (gamma_spec.is_object() && gamma_spec.contains("file")) {
    if (groups.empty()) throw ParseError(path.string() + ": 'groups' required for file gamma");
    gamma = load_gamma_file(resolve(gamma_spec["file"].get<std::string>()), d.size(), groups);
  } else {
    throw ParseError(path.string() +
                     ": 'gamma' must be \"single\", {\"column\": ...} or {\"file\": ...}");
  }

  if (!spec.contains("phi") || !spec["phi"].is_object())
    throw ParseError(path.string() + ": missing object field 'phi'");
  const json& phi_spec = spec["phi"];
  if (phi_spec.size() != groups.size())
    throw ParseError(path.string() + ": 'phi' names " + std::to_string(phi_spec.size()) +
                     " groups, 'gamma' has " + std::to_string(groups.size()));

  std::vector<BeliefMatrix> phis;
  for (const std::string& group : groups) {
    if (!phi_spec.contains(group))
      throw ParseError(path.string() + ": 'phi' is missing group '" + group + "'");
    const json& entry = phi_spec[group];
    if (entry.is_string() && entry.get<std::string>() == "uniform") {
      BeliefMatrix phi(group, d.n_states());
      phi.normalize();  // all rows empty: uniform belief from every state
      phis.push_back(std::move(phi));
    } else if (entry.is_string() && entry.get<std::string>() == "data") {
      phis.push_back(empirical_matrix(d, group));
    } else if (entry.is_object() && entry.contains("file")) {
      phis.push_back(
          load_belief_matrix(resolve(entry["file"].get<std::string>()), d.space(), group));
    } else if (entry.is_object() && entry.contains("adjacency")) {
      phis.push_back(
          adjacency_matrix(resolve(entry["adjacency"].get<std::string>()), d.space(), group));
    } else {
      throw ParseError(path.string() + ": phi for group '" + group +
                       "' must be \"uniform\", \"data\", {\"file\": ...} or {\"adjacency\": ...}");
    }
  }

  const bool naive = spec.value("naive_elicitation", false);
  return Hypothesis{name, std::move(gamma), std::move(phis), naive};
}

}  // namespace mixedtrails::io
