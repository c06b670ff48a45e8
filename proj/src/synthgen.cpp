#include "mixedtrails/synthgen.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mixedtrails::synthgen {

namespace {

// RNG substream identifiers; fixed so generated datasets never change
// between runs or platforms for a given seed.
constexpr std::uint64_t kGraphStream = 1;
constexpr std::uint64_t kColorStream = 2;
constexpr std::uint64_t kAttrStream = 3;
constexpr std::uint64_t kPathStream = 4;
constexpr std::uint64_t kChoiceStream = 5;

StateIndex sample_row(rng::Xoshiro256& rng,
                      std::span<const std::pair<StateIndex, double>> row) {
  const double u = rng.next_double();
  double acc = 0.0;
  for (const auto& [j, p] : row) {
    acc += p;
    if (u < acc) return j;
  }
  return row.back().first;
}

std::string shade_to_string(double shade) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), shade);
  return std::string(buf, ptr);
}

const char* color_name(NodeColor c) { return c == NodeColor::red ? "red" : "blue"; }

}  // namespace

bool ColoredGraph::has_edge(StateIndex a, StateIndex b) const {
  const auto& nbrs = adjacency.at(a);
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

std::size_t ColoredGraph::n_edges() const {
  std::size_t twice = 0;
  for (const auto& nbrs : adjacency) twice += nbrs.size();
  return twice / 2;
}

ColoredGraph generate_ba_graph(int n, int m_attach, double p_red, std::uint64_t seed) {
  if (n < 1 || m_attach < 1 || m_attach >= n)
    throw std::invalid_argument("generate_ba_graph requires 1 <= m_attach < n");
  if (!(p_red >= 0.0 && p_red <= 1.0))
    throw std::invalid_argument("p_red must be a probability");

  ColoredGraph g;
  g.n_nodes = n;
  g.adjacency.resize(static_cast<std::size_t>(n));
  std::vector<std::int64_t> degree(static_cast<std::size_t>(n), 0);

  auto add_edge = [&](StateIndex a, StateIndex b) {
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
    ++degree[a];
    ++degree[b];
  };

  // complete seed graph on the first m_attach nodes
  for (StateIndex a = 0; a < m_attach; ++a)
    for (StateIndex b = a + 1; b < m_attach; ++b) add_edge(a, b);

  auto rng = rng::Xoshiro256::substream(seed, kGraphStream, 0);
  std::vector<StateIndex> picked;
  for (StateIndex v = m_attach; v < n; ++v) {
    // degree snapshot before v attaches; targets are distinct
    std::int64_t total = 0;
    for (StateIndex u = 0; u < v; ++u) total += degree[u];
    picked.clear();
    while (static_cast<int>(picked.size()) < m_attach) {
      StateIndex candidate;
      if (total == 0) {  // degenerate seed (m_attach == 1): uniform choice
        candidate = static_cast<StateIndex>(rng.next_below(static_cast<std::uint64_t>(v)));
      } else {
        std::int64_t r =
            static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(total)));
        candidate = 0;
        for (StateIndex u = 0; u < v; ++u) {
          r -= degree[u];
          if (r < 0) {
            candidate = u;
            break;
          }
        }
      }
      if (std::find(picked.begin(), picked.end(), candidate) != picked.end()) continue;
      picked.push_back(candidate);
    }
    for (StateIndex u : picked) add_edge(v, u);
  }
  for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());

  auto color_rng = rng::Xoshiro256::substream(seed, kColorStream, 0);
  g.color.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g.color.push_back(color_rng.next_double() < p_red ? NodeColor::red : NodeColor::blue);
  return g;
}

BeliefMatrix build_theta(const ColoredGraph& g, ThetaVariant variant) {
  const char* label = variant == ThetaVariant::link ? "link"
                      : variant == ThetaVariant::red ? "red"
                                                     : "blue";
  BeliefMatrix theta(label, g.n_nodes);
  for (StateIndex i = 0; i < g.n_nodes; ++i) {
    const auto& nbrs = g.adjacency[i];
    if (nbrs.empty())
      throw std::invalid_argument("node " + std::to_string(i) + " is isolated");
    for (StateIndex j : nbrs) {
      double w = 1.0;
      if (variant == ThetaVariant::red && g.color[j] == NodeColor::red) w = 10.0;
      if (variant == ThetaVariant::blue && g.color[j] == NodeColor::blue) w = 10.0;
      theta.add_weight(i, j, w);
    }
  }
  theta.normalize();
  return theta;
}

Thetas build_all_thetas(const ColoredGraph& g) {
  return {build_theta(g, ThetaVariant::link), build_theta(g, ThetaVariant::red),
          build_theta(g, ThetaVariant::blue)};
}

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::link: return "link";
    case Scenario::color: return "color";
    case Scenario::memory: return "memory";
    case Scenario::violet: return "violet";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& name) {
  if (name == "link") return Scenario::link;
  if (name == "color") return Scenario::color;
  if (name == "memory") return Scenario::memory;
  if (name == "violet") return Scenario::violet;
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::vector<WalkStep> walk_one(const ColoredGraph& g, const Thetas& thetas, Scenario scenario,
                               const WalkerAttributes& attrs, int n_steps,
                               rng::Xoshiro256& path_rng, rng::Xoshiro256& choice_rng) {
  std::vector<WalkStep> steps;
  steps.reserve(static_cast<std::size_t>(n_steps));

  StateIndex current =
      static_cast<StateIndex>(path_rng.next_below(static_cast<std::uint64_t>(g.n_nodes)));
  // visit tallies for the memory rule; the start node counts
  std::int64_t red_visits = g.color[current] == NodeColor::red ? 1 : 0;
  std::int64_t blue_visits = 1 - red_visits;

  for (int step = 0; step < n_steps; ++step) {
    WalkStep out;
    out.src = current;
    out.majority = red_visits > blue_visits    ? "red"
                   : blue_visits > red_visits  ? "blue"
                                               : "draw";
    const BeliefMatrix* theta = &thetas.link;
    switch (scenario) {
      case Scenario::link:
        break;
      case Scenario::color:
        theta = attrs.color == NodeColor::red ? &thetas.red : &thetas.blue;
        break;
      case Scenario::memory:
        if (red_visits > blue_visits)
          theta = &thetas.red;
        else if (blue_visits > red_visits)
          theta = &thetas.blue;
        break;
      case Scenario::violet: {
        const bool red = choice_rng.next_double() < attrs.shade;
        out.drawn_color = red ? "red" : "blue";
        theta = red ? &thetas.red : &thetas.blue;
        break;
      }
    }
    out.dst = sample_row(path_rng, theta->row(current));
    current = out.dst;
    if (g.color[current] == NodeColor::red)
      ++red_visits;
    else
      ++blue_visits;
    steps.push_back(std::move(out));
  }
  return steps;
}

std::string node_label(int node, int n_nodes) {
  std::string label = std::to_string(node);
  const std::size_t width = std::to_string(n_nodes - 1).size();
  return std::string(width - label.size(), '0') + label;
}

TransitionDataset simulate_walkers(const ColoredGraph& g, const Thetas& thetas,
                                   const WalkerConfig& cfg) {
  if (cfg.n_walkers < 1 || cfg.n_steps < 1)
    throw std::invalid_argument("simulate_walkers requires n_walkers >= 1 and n_steps >= 1");

  const std::size_t m =
      static_cast<std::size_t>(cfg.n_walkers) * static_cast<std::size_t>(cfg.n_steps);
  std::vector<Transition> transitions(m);
  std::vector<std::string> walker_color(m), majority(m), shade_col, drawn_col;
  const bool violet = cfg.scenario == Scenario::violet;
  if (violet) {
    shade_col.resize(m);
    drawn_col.resize(m);
  }

  const int jobs = std::max(1, cfg.jobs);
  std::atomic<int> next_walker{0};
  auto simulate_range = [&] {
    for (;;) {
      const int w = next_walker.fetch_add(1);
      if (w >= cfg.n_walkers) return;
      auto attr_rng = rng::Xoshiro256::substream(cfg.seed, kAttrStream,
                                                 static_cast<std::uint64_t>(w));
      WalkerAttributes attrs;
      attrs.color = attr_rng.next_double() < 0.5 ? NodeColor::red : NodeColor::blue;
      attrs.shade = rng::sample_beta(attr_rng, cfg.shade_alpha, cfg.shade_beta);

      auto path_rng = rng::Xoshiro256::substream(cfg.seed, kPathStream,
                                                 static_cast<std::uint64_t>(w));
      auto choice_rng = rng::Xoshiro256::substream(cfg.seed, kChoiceStream,
                                                   static_cast<std::uint64_t>(w));
      const auto steps =
          walk_one(g, thetas, cfg.scenario, attrs, cfg.n_steps, path_rng, choice_rng);

      const std::string shade_str = violet ? shade_to_string(attrs.shade) : std::string();
      for (int s = 0; s < cfg.n_steps; ++s) {
        const std::size_t k =
            static_cast<std::size_t>(w) * static_cast<std::size_t>(cfg.n_steps) +
            static_cast<std::size_t>(s);
        transitions[k] = {steps[s].src, steps[s].dst, w, s};
        walker_color[k] = color_name(attrs.color);
        majority[k] = steps[s].majority;
        if (violet) {
          shade_col[k] = shade_str;
          drawn_col[k] = steps[s].drawn_color;
        }
      }
    }
  };
  if (jobs == 1) {
    simulate_range();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(simulate_range);
    for (auto& t : pool) t.join();
  }

  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(g.n_nodes));
  for (int i = 0; i < g.n_nodes; ++i) labels.push_back(node_label(i, g.n_nodes));
  std::vector<std::string> walker_ids;
  walker_ids.reserve(static_cast<std::size_t>(cfg.n_walkers));
  for (int w = 0; w < cfg.n_walkers; ++w) walker_ids.push_back("w" + std::to_string(w));

  TransitionDataset dataset(StateSpace(std::move(labels)), std::move(transitions),
                            std::move(walker_ids));
  dataset.add_metadata_column("walker_color", std::move(walker_color));
  dataset.add_metadata_column("majority", std::move(majority));
  if (violet) {
    dataset.add_metadata_column("shade", std::move(shade_col));
    dataset.add_metadata_column("drawn_color", std::move(drawn_col));
  }
  return dataset;
}

namespace {

BeliefMatrix relabeled(const BeliefMatrix& phi, std::string label) {
  BeliefMatrix copy = phi;
  copy.set_label(std::move(label));
  return copy;
}

GroupAssignmentProbabilities gamma_from_column(const TransitionDataset& d,
                                               const std::string& column,
                                               const std::vector<std::string>& groups) {
  const auto* values = d.metadata_column(column);
  if (values == nullptr)
    throw std::invalid_argument("dataset is missing metadata column '" + column + "'");
  std::vector<double> gamma(d.size() * groups.size(), 0.0);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto it = std::find(groups.begin(), groups.end(), (*values)[k]);
    if (it == groups.end())
      throw std::invalid_argument("metadata value '" + (*values)[k] +
                                  "' does not match any group");
    gamma[k * groups.size() + static_cast<std::size_t>(it - groups.begin())] = 1.0;
  }
  return GroupAssignmentProbabilities(groups, std::move(gamma));
}

}  // namespace

std::vector<Hypothesis> paper_hypotheses(const Thetas& thetas, const TransitionDataset& d) {
  std::vector<Hypothesis> out;
  const std::size_t m = d.size();

  out.push_back({"link",
                 GroupAssignmentProbabilities({"all"}, std::vector<double>(m, 1.0)),
                 {relabeled(thetas.link, "all")},
                 false});

  const std::vector<std::string> rb = {"red", "blue"};
  out.push_back({"link-color", gamma_from_column(d, "walker_color", rb),
                 {relabeled(thetas.link, "red"), relabeled(thetas.link, "blue")},
                 false});
  out.push_back({"color", gamma_from_column(d, "walker_color", rb),
                 {thetas.red, thetas.blue},
                 false});
  out.push_back({"mem", gamma_from_column(d, "majority", {"red", "blue", "draw"}),
                 {thetas.red, thetas.blue, relabeled(thetas.link, "draw")},
                 false});

  if (d.metadata_column("shade") != nullptr) {
    const auto& shades = *d.metadata_column("shade");
    std::vector<double> gamma(m * 2);
    for (std::size_t k = 0; k < m; ++k) {
      double s = 0.0;
      const auto res = std::from_chars(shades[k].data(), shades[k].data() + shades[k].size(), s);
      if (res.ec != std::errc{})
        throw std::invalid_argument("bad shade value '" + shades[k] + "'");
      gamma[k * 2] = s;
      gamma[k * 2 + 1] = 1.0 - s;
    }
    GroupAssignmentProbabilities violet_gamma(rb, std::move(gamma));
    out.push_back({"violet", violet_gamma, {thetas.red, thetas.blue}, false});
    out.push_back({"violet-naive", std::move(violet_gamma), {thetas.red, thetas.blue}, true});
  }
  return out;
}

}  // namespace mixedtrails::synthgen
