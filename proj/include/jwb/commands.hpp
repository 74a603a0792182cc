#pragma once

#include <cstdint>
#include <string>

#include "jwb/jordanmaps.hpp"
#include "jwb/report.hpp"
#include "jwb/semigroup.hpp"
#include "jwb/strucalg.hpp"

namespace jwb::commands {

// Shared command options. samples = 0 selects each command's own default
// (50 for the identity suite, 100 for the derivation demo). The seed feeds
// every randomized sampler, so fixed options give bit-identical reports.
struct Options {
  bool json = false;
  uint64_t seed = 0;
  int samples = 0;
  int max_length = 6;
  bool exhaustive = false;
};

// Resolution: builtin name first, then a file path. Throws
// std::invalid_argument when neither applies.
strucalg::AlgebraPtr resolve_algebra(const std::string& arg);
jordanmaps::LinearMap resolve_map(const std::string& map_arg,
                                  const std::string& algebra_arg);
semigroup::Presentation resolve_presentation(const std::string& arg);

// Each command returns a RunReport; a failed check means a mathematical
// verdict (CLI exit 1), while malformed input throws std::invalid_argument
// (CLI exit 2).
report::RunReport verify_identities(const std::string& algebra_arg,
                                    const std::string& map_arg, const Options& opt);
report::RunReport decompose(const std::string& algebra_arg,
                            const std::string& map_arg, const Options& opt);
report::RunReport grassmann_demo(int n, const Options& opt);
report::RunReport pe2_demo(const std::string& presentation_arg,
                           const std::string& generator_arg, const Options& opt);
report::RunReport tideal(const std::string& generator_arg,
                         const std::string& algebra_arg, const Options& opt);
report::RunReport congruence(const std::string& presentation_arg, const Options& opt);

}  // namespace jwb::commands
