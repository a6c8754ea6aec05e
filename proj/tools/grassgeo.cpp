#include "cli_app.hpp"

int main(int argc, char** argv) { return grassgeo::cli::run_cli(argc, argv, std::cin, std::cout); }
