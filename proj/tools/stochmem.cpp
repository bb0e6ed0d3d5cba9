#include "stochmem/cli.hpp"

int main(int argc, char** argv) { return stochmem::cli::dispatch(argc, argv); }
