#include "wentzell/runner.hpp"

int main(int argc, char** argv) { return wentzell::run_cli(argc, argv); }
