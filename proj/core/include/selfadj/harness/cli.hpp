#pragma once

namespace selfadj::harness {

/// Entry point of the `selfadj` tool. Returns the process exit code:
/// 0 success, 2 config error, 3 boundary-data error, 4 solver failure.
int run_cli(int argc, char** argv);

}  // namespace selfadj::harness
