#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "certnn/pencil.hpp"

namespace certnn {

/// One sparse coefficient entry in SDPA terms: matrix 0 is the constant
/// side, matrices 1..m belong to the variables; indices are 1-based and
/// restricted to the upper triangle.
struct SdpaEntry {
  int mat = 0;
  int block = 0;
  int i = 0;
  int j = 0;
  double value = 0;
};

/// Sparse SDPA problem: minimize c'z subject to sum_i z_i F_i - F0 PSD,
/// blockwise. Negative block dimensions mark diagonal blocks.
struct SdpaProblem {
  int var_count = 0;
  std::vector<int> block_dims;
  Eigen::VectorXd objective;
  std::vector<SdpaEntry> entries;
};

/// Encode a pencil as an SDPA feasibility problem (zero objective). The
/// pencil's constant block maps to -F0 under the SDPA convention; sign
/// constraints become one extra diagonal block with a unit entry per
/// constrained variable, appended last.
SdpaProblem to_sdpa(const AffinePencil& pencil);

/// Render in the sparse ".dat-s" format. Values are printed with enough
/// digits to reparse to the identical double.
std::string write_sdpa(const SdpaProblem& p);

/// Parse the sparse format back. Accepts comment lines starting with " or *.
/// Throws std::runtime_error on malformed input.
SdpaProblem parse_sdpa(const std::string& text);

/// Rebuild an affine pencil from parsed data: one block per SDPA block,
/// F(z) = sum_i z_i F_i - F0, all variables unconstrained (sign information
/// lives in the appended diagonal block, which is kept as a block).
AffinePencil from_sdpa(const SdpaProblem& p);

}  // namespace certnn
