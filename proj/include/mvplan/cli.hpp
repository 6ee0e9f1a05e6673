#pragma once

namespace mvp {

// Exit codes: 0 ok, 1 bad input or usage, 2 no solution found, 3 oracle disagreement.
int run_cli(int argc, char** argv);

}  // namespace mvp
