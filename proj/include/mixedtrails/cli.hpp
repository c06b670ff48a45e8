#ifndef MIXEDTRAILS_CLI_HPP
#define MIXEDTRAILS_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace mixedtrails::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;       // bad flags / validation failures
inline constexpr int kExitIoFailure = 3;   // file-system failures

struct CompareArgs {
  std::string data;
  std::vector<std::string> hypotheses;
  std::string kappas = "grid";  // CSV list or the literal "grid"
  std::int64_t samples = 50;
  std::uint64_t seed = 0;
  std::int64_t exact_cap = 0;
  std::string out;
  int jobs = 1;
  std::string states;  // optional states file
};

struct GenerateArgs {
  std::string scenario;
  int nodes = 100;
  int attach = 10;
  int walkers = 10000;
  int steps = 10;
  std::uint64_t seed = 0;
  std::string outdir;
  int jobs = 1;
};

struct PlotArgs {
  std::string in;
  std::string out;
  bool log_x = false;
};

// The default kappa grid used when --kappas is "grid".
std::vector<double> default_kappa_grid();
std::vector<double> parse_kappas(const std::string& text);

int run_compare(const CompareArgs& args);
int run_generate(const GenerateArgs& args);
int run_plot(const PlotArgs& args);

}  // namespace mixedtrails::cli

#endif
