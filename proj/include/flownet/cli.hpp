#pragma once

#include <string>
#include <vector>

namespace flownet {

// Full command-line front end. Exit codes: 0 ok, 2 parse error, 3 validation
// error, 4 numerical abort, 5 property failure (verify-policy), 1 internal.
// The vector form takes the arguments without the program name, in order.
int run_cli(std::vector<std::string> args);
int run_cli(int argc, char** argv);

}  // namespace flownet
