#include "teamnego/cli.hpp"

int main(int argc, char** argv) { return teamnego::run_cli(argc, argv); }
