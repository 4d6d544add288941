#include "entloc/cli.hpp"

int main(int argc, char** argv) { return entloc::run_cli(argc, argv); }
