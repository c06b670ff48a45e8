#ifndef MIXEDTRAILS_SYNTHGEN_HPP
#define MIXEDTRAILS_SYNTHGEN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mixedtrails/core.hpp"
#include "mixedtrails/rng.hpp"

namespace mixedtrails::synthgen {

enum class NodeColor : std::uint8_t { red, blue };

struct ColoredGraph {
  int n_nodes = 0;
  std::vector<std::vector<StateIndex>> adjacency;  // sorted neighbor lists, undirected
  std::vector<NodeColor> color;

  bool has_edge(StateIndex a, StateIndex b) const;
  std::size_t n_edges() const;
};

// Barabasi-Albert preferential attachment: an m_attach-node complete seed
// graph, then each new node attaches to m_attach distinct existing nodes
// drawn proportionally to current degree (without replacement). Node colors
// are i.i.d. Bernoulli(p_red).
ColoredGraph generate_ba_graph(int n, int m_attach, double p_red, std::uint64_t seed);

enum class ThetaVariant { link, red, blue };

// Row-stochastic walk matrix on the graph: `link` is uniform over neighbors;
// `red`/`blue` reweight same-color targets by a factor of 10 before
// normalizing. Support is exactly the adjacency.
BeliefMatrix build_theta(const ColoredGraph& g, ThetaVariant variant);

struct Thetas {
  BeliefMatrix link;
  BeliefMatrix red;
  BeliefMatrix blue;
};

Thetas build_all_thetas(const ColoredGraph& g);

enum class Scenario { link, color, memory, violet };

const char* scenario_name(Scenario s);
Scenario parse_scenario(const std::string& name);

struct WalkerConfig {
  Scenario scenario = Scenario::link;
  int n_walkers = 1;
  int n_steps = 1;
  std::uint64_t seed = 0;
  double shade_alpha = 1.0;  // Beta prior of the violet shade
  double shade_beta = 1.0;
  int jobs = 1;
};

struct WalkerAttributes {
  NodeColor color = NodeColor::red;
  double shade = 0.0;  // probability of stepping as a red walker (violet only)
};

struct WalkStep {
  StateIndex src;
  StateIndex dst;
  // Majority color over the nodes visited so far (revisits counted,
  // current node included), evaluated before the step.
  std::string majority;
  std::string drawn_color;  // per-step color draw (violet scenario)
};

// One walker's trace; the start node and every destination come from
// path_rng, per-step color draws (violet) come from choice_rng only, so a
// shade-1.0 violet walker replays a red color walker given equal path
// streams.
std::vector<WalkStep> walk_one(const ColoredGraph& g, const Thetas& thetas, Scenario scenario,
                               const WalkerAttributes& attrs, int n_steps,
                               rng::Xoshiro256& path_rng, rng::Xoshiro256& choice_rng);

// Walkers start at uniformly random nodes and emit n_steps transitions each.
// The dataset carries per-transition metadata sufficient to rebuild every
// study hypothesis: columns "walker_color" and "majority" always, plus
// "shade" and "drawn_color" for the violet scenario. Walker w uses RNG
// substreams derived from (seed, stream, w); parallel runs equal serial ones.
TransitionDataset simulate_walkers(const ColoredGraph& g, const Thetas& thetas,
                                   const WalkerConfig& cfg);

// The study hypothesis roster for a simulated dataset: link, link-color,
// color, and mem; plus violet (mixture-elicited) and violet-naive when the
// dataset carries shades.
std::vector<Hypothesis> paper_hypotheses(const Thetas& thetas, const TransitionDataset& d);

// State label for node i, zero-padded so lexicographic order matches node order.
std::string node_label(int node, int n_nodes);

}  // namespace mixedtrails::synthgen

#endif
