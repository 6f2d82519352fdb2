#pragma once

#include "rcmkf/evaluation.hpp"
#include "rcmkf/filtering.hpp"
#include "rcmkf/golden.hpp"

#include <ostream>
#include <span>
#include <string>

namespace rcmkf {

/// 17 significant digits, '.' decimal separator, locale independent.
std::string format_number(double v);

/// Header: step, then rmse_pos_<variant> per variant (rmse_pos_rcmkfu, ...).
void write_rmse_csv(std::ostream& out, std::span<const FilterVariant> variants, std::span<const RmseReport> reports);

void write_nees_csv(std::ostream& out, std::span<const FilterVariant> variants, std::span<const NeesReport> reports);

/// Header: sigma_theta_deg, nes_measurement_conditioned, nes_nested,
/// lower_bound, upper_bound.
void write_consistency_csv(std::ostream& out, const NesReport& measurement_conditioned, const NesReport& nested);

/// One row per operating point: the point, oracle mean and upper-triangle
/// covariance entries, and their standard errors. Spatial layout
/// (x, y, z, eta); planar rows leave the z entries empty.
void write_golden_csv(std::ostream& out, std::span<const GoldenRow> rows);

std::string column_name(FilterVariant v);

}  // namespace rcmkf
