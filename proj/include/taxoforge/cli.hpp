#pragma once

namespace taxoforge {

// Exit codes: 0 validation passed, 1 I/O or configuration error, 2 validation failed.
int run_cli(int argc, char** argv);

}  // namespace taxoforge
