#include "polfocus/cli.hpp"

int main(int argc, char** argv) { return polfocus::cli::run(argc, argv); }
