#include "certnn/sdpa.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace certnn {

SdpaProblem to_sdpa(const AffinePencil& pencil) {
  pencil.validate();
  if (pencil.blocks.empty()) throw std::invalid_argument("pencil has no blocks");

  std::vector<int> constrained;
  for (int i = 0; i < pencil.var_count(); ++i)
    if (pencil.vars[i].sign != VarSign::Free) constrained.push_back(i);

  SdpaProblem p;
  p.var_count = pencil.var_count();
  for (const PencilBlock& blk : pencil.blocks) p.block_dims.push_back(blk.dim());
  if (!constrained.empty())
    p.block_dims.push_back(-static_cast<int>(constrained.size()));
  p.objective = Eigen::VectorXd::Zero(p.var_count);

  for (std::size_t b = 0; b < pencil.blocks.size(); ++b) {
    const PencilBlock& blk = pencil.blocks[b];
    const int blkno = static_cast<int>(b) + 1;
    // SDPA wants X = sum z_i F_i - F0, so the constant side flips sign.
    for (int i = 0; i < blk.dim(); ++i)
      for (int j = i; j < blk.dim(); ++j)
        if (blk.constant(i, j) != 0.0)
          p.entries.push_back({0, blkno, i + 1, j + 1, -blk.constant(i, j)});
    for (const PencilBlock::Term& t : blk.terms)
      for (int i = 0; i < blk.dim(); ++i)
        for (int j = i; j < blk.dim(); ++j)
          if (t.coeff(i, j) != 0.0)
            p.entries.push_back({t.var + 1, blkno, i + 1, j + 1, t.coeff(i, j)});
  }
  const int sign_blk = static_cast<int>(pencil.blocks.size()) + 1;
  for (std::size_t s = 0; s < constrained.size(); ++s) {
    int pos = static_cast<int>(s) + 1;
    p.entries.push_back({constrained[s] + 1, sign_blk, pos, pos, 1.0});
  }
  return p;
}

std::string write_sdpa(const SdpaProblem& p) {
  std::ostringstream out;
  char buf[64];
  out << "* pencil feasibility export, zero objective\n";
  out << p.var_count << "\n";
  out << p.block_dims.size() << "\n";
  for (std::size_t i = 0; i < p.block_dims.size(); ++i)
    out << (i ? " " : "") << p.block_dims[i];
  out << "\n";
  for (int i = 0; i < p.var_count; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", p.objective[i]);
    out << (i ? " " : "") << buf;
  }
  out << "\n";
  for (const SdpaEntry& e : p.entries) {
    std::snprintf(buf, sizeof buf, "%.17g", e.value);
    out << e.mat << " " << e.block << " " << e.i << " " << e.j << " " << buf << "\n";
  }
  return out.str();
}

SdpaProblem parse_sdpa(const std::string& text) {
  std::istringstream lines(text);
  std::ostringstream data;
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && (line[0] == '*' || line[0] == '"')) continue;
    for (char& c : line)
      if (c == ',' || c == '{' || c == '}' || c == '(' || c == ')') c = ' ';
    data << line << "\n";
  }
  std::istringstream in(data.str());

  SdpaProblem p;
  int nblocks = 0;
  if (!(in >> p.var_count) || p.var_count < 0)
    throw std::runtime_error("sdpa: bad variable count");
  if (!(in >> nblocks) || nblocks <= 0)
    throw std::runtime_error("sdpa: bad block count");
  p.block_dims.resize(nblocks);
  for (int b = 0; b < nblocks; ++b) {
    if (!(in >> p.block_dims[b]) || p.block_dims[b] == 0)
      throw std::runtime_error("sdpa: bad block dimension");
  }
  p.objective.resize(p.var_count);
  for (int i = 0; i < p.var_count; ++i)
    if (!(in >> p.objective[i])) throw std::runtime_error("sdpa: bad objective");

  SdpaEntry e;
  while (in >> e.mat) {
    if (!(in >> e.block >> e.i >> e.j >> e.value))
      throw std::runtime_error("sdpa: truncated entry");
    if (e.mat < 0 || e.mat > p.var_count)
      throw std::runtime_error("sdpa: entry matrix index out of range");
    if (e.block < 1 || e.block > nblocks)
      throw std::runtime_error("sdpa: entry block index out of range");
    const int dim = std::abs(p.block_dims[e.block - 1]);
    if (e.i < 1 || e.j < e.i || e.j > dim)
      throw std::runtime_error("sdpa: entry position out of range");
    if (p.block_dims[e.block - 1] < 0 && e.i != e.j)
      throw std::runtime_error("sdpa: off-diagonal entry in a diagonal block");
    p.entries.push_back(e);
  }
  return p;
}

AffinePencil from_sdpa(const SdpaProblem& p) {
  AffinePencil pencil;
  for (int i = 0; i < p.var_count; ++i)
    pencil.add_var("z[" + std::to_string(i) + "]", VarSign::Free);
  for (std::size_t b = 0; b < p.block_dims.size(); ++b)
    pencil.add_block("block[" + std::to_string(b) + "]", std::abs(p.block_dims[b]));
  for (const SdpaEntry& e : p.entries) {
    PencilBlock& blk = pencil.blocks[e.block - 1];
    if (e.mat == 0)
      blk.add_constant_entry(e.i - 1, e.j - 1, -e.value);
    else
      blk.add_term_entry(e.mat - 1, e.i - 1, e.j - 1, e.value);
  }
  pencil.validate();
  return pencil;
}

}  // namespace certnn
