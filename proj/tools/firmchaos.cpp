#include "firmchaos/cli.hpp"

int main(int argc, char** argv) { return firmchaos::cli::run(argc, argv); }
