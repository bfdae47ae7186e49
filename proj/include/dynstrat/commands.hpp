#pragma once

// Library side of the command-line tool. JSON reports are returned; CSV
// grids are streamed.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynstrat/returns_io.hpp"
#include "dynstrat/serialization.hpp"

namespace dynstrat {

json cmd_analyze(std::span<const double> returns, const FilterSpec& spec, double periods_per_year = 252.0);

enum class SweepFamily { ewma, sma, holt_winters };
SweepFamily sweep_family_from_string(const std::string& name);

// One CSV row per grid point (the Cartesian product with grid2 for
// Holt-Winters), all scored on the same sample.
void cmd_sweep(std::span<const double> returns, SweepFamily family, const std::vector<double>& grid,
               const std::vector<double>& grid2, std::ostream& out);

enum class FitKind { ols, tls, cca };
FitKind fit_kind_from_string(const std::string& name);
json cmd_fit(const ReturnsFile& file, FitKind kind, int lags, bool standardize, const std::string& asset = "");

json cmd_optimize(const ReturnProcess& process, int k, const CostSpec& cost, std::uint64_t seed, int starts = 8);

void cmd_density(const std::vector<double>& rhos, double s_min, double s_max, int points, bool unit_variance,
                 double sigma_r, double sigma_x, std::ostream& out);

void cmd_simulate_returns(const ReturnProcess& process, std::size_t length, std::uint64_t seed, std::ostream& out);
json cmd_simulate_report(const SimulationPlan& plan);
json cmd_coverage(double rho, long t, std::size_t trials, CoverageMethod method, std::uint64_t seed, double level);
void cmd_convergence(const ReturnProcess& process, const ConvolutionFilter& filter, const std::vector<int>& n_grid,
                     Innovation law, std::size_t draws, std::uint64_t seed, std::ostream& out);

json cmd_stderr(double rho_hat, long t, std::optional<double> sr_hat, std::optional<double> skewness,
                std::optional<double> kurtosis, const std::vector<double>& levels);
void cmd_stderr_table(long t, std::ostream& out);

// moments-vs-rho, stderr-compare, density-grid, ci-tables
void cmd_report_figures(const std::string& figure_id, std::ostream& out);

}  // namespace dynstrat
