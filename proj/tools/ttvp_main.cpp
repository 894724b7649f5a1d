#include "ttvp/cli.hpp"

int main(int argc, char** argv) { return ttvp::cli::run(argc, argv); }
