#include "cli.hpp"

int main(int argc, char** argv) { return qvlasov::cli::run_cli(argc, argv); }
