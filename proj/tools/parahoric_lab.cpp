#include "parahoric/cli.hpp"

int main(int argc, char** argv) { return parahoric::run_cli(argc, argv); }
