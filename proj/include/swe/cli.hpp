#pragma once

namespace swe {

// Exit codes: 0 success, 1 validation error, 2 numerical failure.
int parse_and_dispatch(int argc, char** argv);

}  // namespace swe
