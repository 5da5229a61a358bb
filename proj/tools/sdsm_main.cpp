#include "sdsm/cli.hpp"

int main(int argc, char** argv) { return sdsm::run_cli(argc, argv); }
