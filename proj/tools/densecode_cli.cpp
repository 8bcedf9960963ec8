#include "densecode/cli.hpp"

int main(int argc, char** argv) { return densecode::run_cli(argc, argv); }
