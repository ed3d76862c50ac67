#include "tptweak/harness.hpp"

int main(int argc, char** argv) { return tptweak::run_cli(argc, argv); }
