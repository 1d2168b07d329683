#ifndef CIRCLELAB_CLI_HPP
#define CIRCLELAB_CLI_HPP

namespace circlelab::cli {

// exit codes: 0 success, 2 precondition refusal, 1 internal error, 64 usage
int run(int argc, const char* const* argv);

}

#endif
