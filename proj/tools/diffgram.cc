#include <iostream>

#include "diffgram/cli.h"

int main(int argc, char** argv) { return diffgram::cli::run(argc, argv, std::cout, std::cerr); }
