#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssf/common.hpp"
#include "ssf/ggm.hpp"
#include "ssf/lifetable.hpp"
#include "ssf/metrics.hpp"
#include "ssf/rules.hpp"
#include "ssf/sources.hpp"

namespace ssf {

/// Shortest decimal representation that round-trips the double.
std::string num_str(double v);
/// Fixed-point formatting, half-even at the binary value (printf %.*f).
std::string fixed_str(double v, int decimals);

/// Life-table CSV: header with `age,lx[,ex]`; one row per age, ages
/// contiguous and ascending; the last row is the open-ended age. The
/// terminal closing rate is `terminal_m` when given, else 1/ex of the
/// last row. Any non-terminal ex values (and any other columns) are
/// ignored; the table is rebuilt from lx. Errors carry file and line.
LifeTable read_lifetable_csv(const std::filesystem::path& path,
                             std::optional<double> terminal_m = {});

/// Deaths/exposures CSV: header with `age,deaths,exposure`
/// (`exposures` is accepted too).
MortalityData read_mortality_csv(const std::filesystem::path& path);

/// Plain e-vector CSV: header with `age,ex`.
EVector read_evector_csv(const std::filesystem::path& path);

/// Detects the lifetable vs deaths/exposures schema from the header.
bool csv_has_column(const std::filesystem::path& path,
                    const std::string& column);

/// Full column set: age,lx,dx,px,qx,ax,Lx,mx,Tx,ex.
void write_lifetable_csv(const std::filesystem::path& path,
                         const LifeTable& table);

/// Appendix-style matrix: corner label, age columns, one row per CT/ECT
/// value, blank cells where infeasible, fixed decimals, trailing newline.
void write_factor_matrix_csv(const std::filesystem::path& path,
                             const FactorMatrix& matrix,
                             const std::string& corner, int decimals = 3);

void write_fit_csv(const std::filesystem::path& path, const FitResult& fit);

/// (age, e, e_ssf) rows; e_ssf is the floor-and-round value the SSF
/// formula would consume at that age.
void write_evector_csv(const std::filesystem::path& path,
                       const GgmParams& params, double age_min, double age_max,
                       double step);

/// RuleConfig from a JSON file overlaid on the built-in defaults.
/// Recognized keys: A, bonuses, min_ect, points, teacher_point_bonus,
/// ceiling, floor, min_entry_age.
RuleConfig load_rule_config(const std::filesystem::path& path);

/// Record of one CLI run, written beside every output set. Re-running
/// the same command with the same manifest reproduces every output file
/// byte for byte.
struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> options;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string tool_version = kToolVersion;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& m);

}  // namespace ssf
