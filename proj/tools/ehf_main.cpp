#include "ehf/cli.hpp"

int main(int argc, char** argv) { return ehf::cli_main(argc, argv); }
