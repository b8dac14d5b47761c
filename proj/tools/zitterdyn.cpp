#include "zitterdyn/cli.hpp"

int main(int argc, char** argv) { return zitterdyn::cli_main(argc, argv); }
