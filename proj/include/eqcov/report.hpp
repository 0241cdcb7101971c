#pragma once

#include <string>
#include <vector>

#include "eqcov/covstats.hpp"
#include "eqcov/geometry.hpp"
#include "eqcov/mlm.hpp"

namespace eqcov {

// Plain-text reports: lowercase "name value" lines and aligned tables.
// JSON reports: stable key order, one schema per analysis kind.

std::string to_text(const BoxMResult& r);
std::string to_json(const BoxMResult& r);

// `analysis` distinguishes a plain location test from one run on dispersion
// deviations ("manova" / "levene").
std::string to_text(const ManovaResult& r, const std::string& analysis =
                                               "manova");
std::string to_json(const ManovaResult& r, const std::string& analysis =
                                               "manova");

std::string to_text(const std::vector<EigSizeStats>& stats);
std::string to_json(const std::vector<EigSizeStats>& stats);

std::string to_text(const std::vector<ScreeSeries>& series);
std::string to_json(const std::vector<ScreeSeries>& series);

std::string ellipses_to_text(const std::vector<EllipsePanel>& panels,
                             double coverage, double radius);
std::string ellipses_to_json(const std::vector<EllipsePanel>& panels,
                             double coverage, double radius);

std::string pca_to_text(const PcaProjection& proj,
                        const std::vector<std::string>& variable_names);
std::string pca_to_json(const PcaProjection& proj,
                        const std::vector<std::string>& variable_names);

}  // namespace eqcov
