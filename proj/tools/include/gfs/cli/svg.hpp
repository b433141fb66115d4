#pragma once

#include "gfs/experiments.hpp"

#include <string>
#include <vector>

namespace gfs::cli {

/// One heatmap panel per grid: delta on x, log10(rho) or tau on y, gray level
/// = P(EFS) (white = 1). Invalid cells are hatched red.
std::string heatmap_svg(const std::vector<const PhaseGrid*>& grids,
                        const std::vector<std::string>& titles);

}  // namespace gfs::cli
