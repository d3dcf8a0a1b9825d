#include "cylhypo/cli/commands.hpp"

int main(int argc, char** argv) { return cylhypo::cli::main_entry(argc, argv); }
