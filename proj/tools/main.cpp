#include "selfadj/harness/cli.hpp"

int main(int argc, char** argv) { return selfadj::harness::run_cli(argc, argv); }
