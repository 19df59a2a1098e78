#include "dislofix/commands.hpp"

int main(int argc, char** argv) { return dislofix::run_cli(argc, argv); }
