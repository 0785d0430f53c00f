#include <iostream>

#include "qzero/cli.h"

int main(int argc, char** argv) { return qzero::runCli(argc, argv, std::cout, std::cerr); }
