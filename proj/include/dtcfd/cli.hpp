#pragma once

namespace dtcfd {

/// Process exit codes of the command-line interface.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitConfigError = 2,  ///< bad configuration file or command-line usage
  kExitDiverged = 3,
  kExitRuntimeError = 4,  ///< unreadable or rejected result bundles, unwritable output
};

/// Environment variable holding the default worker thread count.
inline constexpr const char* kThreadsEnv = "DTCFD_THREADS";

/// Subcommands: run, verify, sweep, compare.
int cli_main(int argc, char** argv);

}  // namespace dtcfd
