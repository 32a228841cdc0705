#include "spinlab/cli.hpp"

int main(int argc, char** argv) { return spinlab::cli_main(argc, argv); }
