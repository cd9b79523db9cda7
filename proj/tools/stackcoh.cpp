#include "stackcoh/cli.hpp"

#ifndef STACKCOH_DEFAULT_MANIFEST
#define STACKCOH_DEFAULT_MANIFEST ""
#endif

int main(int argc, char** argv) { return stackcoh::cli::main(argc, argv, std::cout, std::cerr, STACKCOH_DEFAULT_MANIFEST); }
