#include "helmddm/cli.hpp"

int main(int argc, char** argv) { return helmddm::run_cli(argc, argv); }
