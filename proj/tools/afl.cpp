#include "afl/cli.hpp"

int main(int argc, char** argv) { return afl::cli::run_main(argc, argv); }
