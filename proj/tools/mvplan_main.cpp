#include "mvplan/cli.hpp"

int main(int argc, char** argv) { return mvp::run_cli(argc, argv); }
