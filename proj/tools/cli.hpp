#ifndef SLNW_CLI_HPP
#define SLNW_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace slnw::cli {

// Exit-code contract: 0 verified, 1 precondition or verification failure,
// 2 soft failure (search budget exhausted / inconclusive).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace slnw::cli

#endif
