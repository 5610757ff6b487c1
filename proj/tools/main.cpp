#include "dtcfd/cli.hpp"

int main(int argc, char** argv) { return dtcfd::cli_main(argc, argv); }
