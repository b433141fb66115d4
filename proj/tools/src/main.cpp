#include "gfs/cli/commands.hpp"

int main(int argc, char** argv) { return gfs::cli::run(argc, argv); }
