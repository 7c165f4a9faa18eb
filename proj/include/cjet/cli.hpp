#ifndef CJET_CLI_HPP
#define CJET_CLI_HPP

#include <string>
#include <vector>

namespace cjet::cli {

int run(const std::vector<std::string> &args);

} // namespace cjet::cli

#include "cli_impl.hpp"

#endif
