#include "emacreg/cli.hpp"

int main(int argc, char** argv) { return emacreg::cli_main(argc, argv); }
