#include "lsr/io.hpp"

int main(int argc, char** argv) { return lsr::cli_main(argc, argv); }
