#pragma once

#include "certnn/pipeline.hpp"

namespace certnn {

/// Demo geometry: 2-10-2 tanh, two mirrored same-size disk pairs. Chosen to
/// be comfortably learnable; the JSON fixture of the same name must stay in
/// lockstep (pinned by tests).
ProblemSpec twin_disks_problem();

/// Demo geometry: 2-5-2 tanh, three pairs of varied shapes and sizes.
ProblemSpec three_region_problem();

}  // namespace certnn
