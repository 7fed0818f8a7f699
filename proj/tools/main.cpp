#include "cachenet/cli.hpp"

int main(int argc, char** argv) { return cachenet::run_cli(argc, argv); }
