#include "ctqubo/cli.hpp"

int main(int argc, char** argv) { return ctqubo::cli::run(argc, argv); }
