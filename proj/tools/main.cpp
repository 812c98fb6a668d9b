#include "circacp/cli.hpp"

int main(int argc, char** argv) { return circacp::cli::run(argc, argv); }
