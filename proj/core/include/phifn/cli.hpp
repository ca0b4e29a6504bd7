#pragma once

namespace phifn {

// Entry point behind the `phifn` binary; returns the process exit code
// (0 ok, 1 numerical/domain failure, 2 usage).
int cli_main(int argc, const char* const* argv);

}  // namespace phifn
