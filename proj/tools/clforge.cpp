#include "clforge/cli.hpp"

int main(int argc, char** argv) { return clforge::cli::run(argc, argv); }
