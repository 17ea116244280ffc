#include "icpc/cli.hpp"

int main(int argc, char** argv) { return icpc::run_cli(argc, argv); }
