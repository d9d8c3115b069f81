#include "pinewton/cli.hpp"

int main(int argc, char** argv) { return pinewton::cli::run(argc, argv); }
