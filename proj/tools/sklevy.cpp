#include "sklevy/cli/commands.hpp"

int main(int argc, char** argv) { return sklevy::cli::run(argc, argv); }
