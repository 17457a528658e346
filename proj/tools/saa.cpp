#include "saa/cli/commands.hpp"

int main(int argc, char** argv) { return saa::cli::run(argc, argv); }
