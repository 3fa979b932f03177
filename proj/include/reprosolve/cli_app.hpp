#pragma once

namespace reprosolve {

// Exit codes: 0 success, 1 failed verification, 2 configuration error,
// 3 budget exceeded.
int cli_main(int argc, const char* const* argv);

}  // namespace reprosolve
