#pragma once

#include <optional>
#include <string>

namespace ingarch::cli {

// Options shared by every subcommand; explicit flags override config-file
// keys. Exit codes: 0 success, 1 input/configuration/data errors,
// 2 optimization failure, 3 verification reported failing checks.
struct Options {
  std::string config_path;
  std::string model;
  std::string panel_path;
  std::string out_path;
  std::string delta_policy;
  std::optional<std::string> lags;
  std::string fit_report_path;  // predict only
  std::optional<std::uint64_t> seed;
  std::optional<long> horizon;
  std::optional<std::size_t> verify_n;
};

int cmd_simulate(const Options& options);
int cmd_fit(const Options& options);
int cmd_predict(const Options& options);
int cmd_moments(const Options& options);
int cmd_verify(const Options& options);

}  // namespace ingarch::cli
