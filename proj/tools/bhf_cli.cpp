#include "bhf/cli.hpp"

int main(int argc, char** argv) { return bhf::cli::run(argc, argv); }
