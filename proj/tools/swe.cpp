#include "swe/cli.hpp"

int main(int argc, char** argv) { return swe::parse_and_dispatch(argc, argv); }
