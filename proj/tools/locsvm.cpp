#include "locsvm/cli.hpp"

int main(int argc, char** argv) { return locsvm::cli_run(argc, argv); }
