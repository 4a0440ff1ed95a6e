#pragma once

#include <cstdint>
#include <string>

#include "certnn/network.hpp"
#include "certnn/pipeline.hpp"

namespace certnn {

/// Standalone SVG document showing, per pair: the input ellipse, the target
/// output ellipse, sampled input points, and their images under the network.
/// Planar problems only (nx = ny = 2); layout and sampling are deterministic
/// for fixed arguments, so output is byte-stable.
std::string emit_figure(const ProblemSpec& spec, const Network& net,
                        long samples_per_pair, std::uint64_t seed);

}  // namespace certnn
