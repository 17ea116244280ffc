#pragma once

#include <filesystem>
#include <string>

#include "icpc/dataset.hpp"
#include "icpc/meanfield.hpp"
#include "icpc/panel.hpp"
#include "icpc/scaling.hpp"

namespace icpc {

// Wide monthly series, header: period,pi,pi_e,ygap,cinf[,u].
// Rows are sorted by period label; duplicate periods, missing columns and
// non-numeric cells are reported with row numbers. Numbers are written as
// shortest round-trip decimals, so save/load is bit-exact.
TimeSeriesDataset load_timeseries_csv(const std::filesystem::path& path);
void save_timeseries_csv(const std::filesystem::path& path,
                         const TimeSeriesDataset& data);

enum class PanelAlignment {
  kStrict,        // a unit missing a calendar period is an error
  kCompleteCase,  // drop periods missing any unit; flag the dataset
};

// Long format, header: country,period,pi_core,cinf,ygap. The cinf column
// holds the index level; the loader lags it one period within each country
// (dropping each country's first row) to build the regressor.
PanelDataset load_panel_csv(const std::filesystem::path& path,
                            PanelAlignment alignment = PanelAlignment::kStrict);
void save_panel_csv(const std::filesystem::path& path,
                    const PanelDataset& data);

// Density snapshot, header: cell_center,density.
void save_density_csv(const std::filesystem::path& path,
                      const DensityGrid& grid);

// Scaling experiment points, header: lambda_bar,kappa_inf_hat.
void save_scaling_points_csv(const std::filesystem::path& path,
                             const ScalingResult& result);

// Shortest decimal that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace icpc
