#pragma once

#include <cstdint>
#include <optional>

#include "nc2/codegen.hpp"
#include "nc2/encoders.hpp"
#include "nc2/netgraph.hpp"
#include "nc2/regions.hpp"

namespace nc2 {

struct PipelineOptions {
  std::uint64_t seed = 0;
  std::optional<std::uint32_t> q;  // first field tried; the ladder continues above it
};

// Everything derived from one network and seed: the normalized graph, its
// cut vector, a code with maximal transfer ranks, the sum-rate rank terms
// achieved by that code and the resulting region report.
struct Instance {
  Network input;
  Network net;
  CutVector cuts;
  CodeResult code;
  RankTerms achieved;
  RegionReport report;
  std::uint64_t seed = 0;

  const TransferMatrices& tm() const { return code.tm; }
  const Field& field() const { return code.code.field; }
};

inline Instance build_instance(const Network& input, const PipelineOptions& opt = {}) {
  Network net = normalize(input);
  const CutVector cv = cut_vector(net);
  CodeResult code = generate_valid_code(net, opt.seed, opt.q);
  const RankTerms achieved = achieved_rank_terms(code.tm, cv, opt.seed);
  RegionReport report = achievable_region(cv, achieved);
  report.seed = opt.seed;
  return {input, std::move(net), cv, std::move(code), achieved, std::move(report), opt.seed};
}

}  // namespace nc2
