#include "circlelab/cli.hpp"

int main(int argc, char** argv) { return circlelab::cli::run(argc, argv); }
