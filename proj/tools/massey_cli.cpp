#include <massey/cli.hpp>

int main(int argc, char** argv) { return massey::cli::run_cli(argc, argv); }
