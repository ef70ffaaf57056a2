#include "fptlab/cli.hpp"

int main(int argc, char** argv) { return fptlab::cli::main(argc, argv); }
