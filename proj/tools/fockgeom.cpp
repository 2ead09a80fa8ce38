#include "fockgeom/cli.hpp"

int main(int argc, char** argv) { return fockgeom::cli::run_command(argc, argv); }
