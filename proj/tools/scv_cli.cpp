#include "scv/experiments.hpp"

int main(int argc, char** argv) { return scv::cli_main(argc, argv); }
