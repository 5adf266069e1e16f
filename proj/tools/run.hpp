#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace fraclimit::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericError = 3, kIoError = 4 };

//! Runs the configured mode, writing artifacts, config.cfg and manifest.json into
//! cfg.out_dir. Returns kOk iff every phase-level check passed. Module errors
//! propagate as exceptions.
int run_mode(const RunConfig& cfg, std::ostream& log);

//! Maps the in-flight exception to an exit code and a message.
int exit_code_for_current_exception(std::string& message);

}  // namespace fraclimit::cli
