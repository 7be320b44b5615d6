#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "countstable/family.hpp"
#include "countstable/random.hpp"
#include "countstable/stability.hpp"

namespace countstable::cli {

enum class Command { kPmf, kSample, kVerify, kMoments, kApgf };
enum class Format { kCsv, kJson };

/// Exit codes; stable for scripting.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidParams = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerifyFailed = 3;

struct StableGroup {
  double alpha, delta, gamma;
};
struct CompoundGroup {
  double lambda, theta, alpha;
};
struct HermiteGroup {
  double mu, sigma2;
};

struct CliConfig {
  Command command = Command::kPmf;
  std::optional<StableGroup> stable;
  std::optional<CompoundGroup> compound;
  std::optional<HermiteGroup> hermite;
  std::optional<std::size_t> max_k;
  std::vector<unsigned long> n_list{2};
  std::uint64_t seed = kDefaultSeed;
  std::size_t count = 1000;
  std::size_t grid_points = 21;
  Format format = Format::kCsv;
  double tol = kPmfTolerance;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by parse_args for --help; what() is the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// argv without the program name. Throws UsageError.
CliConfig parse_args(const std::vector<std::string>& args);

/// Executes the command; returns the exit code.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with usage errors reported on `err`.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace countstable::cli
