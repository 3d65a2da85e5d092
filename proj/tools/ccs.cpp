#include "ccs_cli.hpp"

int main(int argc, char** argv) { return ccs::cli::run(argc, argv); }
