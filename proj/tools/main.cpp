#include "tempreg/cli.hpp"

int main(int argc, char** argv) { return tempreg::run_cli(argc, argv); }
