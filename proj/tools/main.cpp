#include "sparsify/cli.hpp"

int main(int argc, char** argv) { return sparsify::main_entry(argc, argv); }
