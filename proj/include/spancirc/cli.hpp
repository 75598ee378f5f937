#pragma once

#include <string>
#include <vector>

namespace spancirc {

// Exit codes: 0 solved/ran, 1 usage or parse error, 2 internal invariant failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace spancirc
