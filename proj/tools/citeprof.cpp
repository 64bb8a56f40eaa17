#include "citeprof/cli.hpp"

int main(int argc, char** argv) { return citeprof::cli::run(argc, argv); }
