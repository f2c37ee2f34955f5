#include "lasso/cli.hpp"

int main(int argc, char** argv) { return lasso::cli::run(argc, argv); }
