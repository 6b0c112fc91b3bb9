#include "gl2lab/cli.hpp"

int main(int argc, char** argv) { return gl2lab::cli::cli_main(argc, argv); }
