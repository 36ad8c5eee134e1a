#pragma once

namespace gapkit {

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 2 configuration error, 3 certificate/hypothesis failure.
int cli_run(int argc, const char* const* argv);

}  // namespace gapkit
