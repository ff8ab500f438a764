#include "koszulpk/cli.hpp"

int main(int argc, char** argv) { return kpk::cli::run(argc, argv); }
