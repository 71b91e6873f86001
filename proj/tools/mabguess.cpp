#include "mabguess/cli/commands.hpp"

int main(int argc, char** argv) { return mabguess::cli::run_main(argc, argv); }
