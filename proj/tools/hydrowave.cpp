#include "hydroelastic/cli.hpp"

int main(int argc, char** argv) { return hydroelastic::run_cli(argc, argv); }
