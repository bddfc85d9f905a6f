#include "cli.hpp"

int main(int argc, char** argv) { return atomex::run_cli(argc, argv); }
