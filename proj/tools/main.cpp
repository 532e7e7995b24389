#include "loosecore/cli.hpp"

int main(int argc, char** argv) { return loosecore::cli_main(argc, argv); }
