#include "qwipe/cli.hpp"

int main(int argc, char **argv) { return qwipe::cli::run(argc, argv); }
