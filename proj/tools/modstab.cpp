#include "modstab/cli.hpp"

int main(int argc, char** argv) { return modstab::run_command(argc, argv); }
