#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sklevy::cli {

inline constexpr const char* kOutDirEnv = "SKLEVY_OUT_DIR";

/// args excludes the program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace sklevy::cli
