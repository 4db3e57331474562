#include "cli.hpp"

int main(int argc, char** argv) { return cryptacc::cli::run(argc, argv); }
