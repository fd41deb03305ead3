#include "oval/cli.hpp"

int main(int argc, char** argv) { return oval::run_cli(argc, argv); }
